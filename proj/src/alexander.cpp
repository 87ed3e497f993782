#include "knotdimer/alexander.hpp"

#include <algorithm>
#include <functional>

#include "knotdimer/error.hpp"

namespace knotdimer {

namespace {

std::vector<int> bounded_faces(const KnotDiagram& d) {
  std::vector<int> out;
  for (int f = 0; f < static_cast<int>(d.faces().size()); ++f)
    if (f != d.unbounded_face()) out.push_back(f);
  return out;
}

int column_of(const std::vector<int>& faces, int face) {
  const auto it = std::find(faces.begin(), faces.end(), face);
  return it == faces.end() ? -1 : static_cast<int>(it - faces.begin());
}

}  // namespace

FoxMatrix fox_matrix(const KnotDiagram& d) {
  FoxMatrix m;
  m.faces = bounded_faces(d);
  m.matrix = zero_matrix(d.crossing_count(), static_cast<Eigen::Index>(m.faces.size()));
  for (int x = 0; x < d.crossing_count(); ++x) {
    const QuadrantRoles r = quadrant_roles(d, x);
    const std::pair<int, LaurentPoly> entries[] = {
        {r.left_out, LaurentPoly::t()}, {r.left_in, -LaurentPoly::t()}, {r.right_out, LaurentPoly(-1)}, {r.right_in, LaurentPoly(1)}};
    for (const auto& [q, value] : entries) {
      const int col = column_of(m.faces, d.face_at(x, q));
      if (col >= 0) m.matrix(x, col) += value;
    }
  }
  return m;
}

SignPattern normalizing_signs(const KnotDiagram& d, const std::vector<FaceColor>& coloring) {
  SignPattern s;
  for (int x = 0; x < d.crossing_count(); ++x) {
    const int f = d.face_at(x, quadrant_roles(d, x).left_out);
    s.rows.push_back(coloring[static_cast<std::size_t>(f)] == FaceColor::Black ? -1 : 1);
  }
  for (auto c : coloring) s.columns.push_back(c == FaceColor::Black ? -1 : 1);
  return s;
}

FoxMatrix sign_normalize(const FoxMatrix& m, const KnotDiagram& d, const std::vector<FaceColor>& coloring) {
  const SignPattern s = normalizing_signs(d, coloring);
  FoxMatrix out = m;
  for (Eigen::Index i = 0; i < out.matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.matrix.cols(); ++j) {
      const int sign = s.rows[static_cast<std::size_t>(i)] * s.columns[static_cast<std::size_t>(m.faces[static_cast<std::size_t>(j)])];
      if (sign < 0) out.matrix(i, j) = -out.matrix(i, j);
      if (!out.matrix(i, j).has_nonnegative_coeffs()) {
        throw Error(ErrorKind::NotNormalizable, "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                                    ") is " + out.matrix(i, j).to_string());
      }
    }
  }
  out.normalized = true;
  return out;
}

int default_deleted_face(const KnotDiagram& d) {
  const auto adj = faces_adjacent_to_unbounded(d);
  if (adj.empty()) throw Error(ErrorKind::FaceNotAdjacent, "no bounded face touches the unbounded face");
  return adj.front();
}

void check_deleted_face(const KnotDiagram& d, int face) {
  if (face < 0 || face >= static_cast<int>(d.faces().size()))
    throw Error(ErrorKind::MalformedInput, "face " + std::to_string(face) + " does not exist");
  if (face == d.unbounded_face()) throw Error(ErrorKind::FaceUnbounded, "face " + std::to_string(face) + " is the unbounded face");
  if (!faces_share_edge(d, face, d.unbounded_face()))
    throw Error(ErrorKind::FaceNotAdjacent, "face " + std::to_string(face) + " shares no edge with the unbounded face");
}

LPMatrix delete_face_column(const FoxMatrix& m, const KnotDiagram& d, int face) {
  check_deleted_face(d, face);
  const int drop = column_of(m.faces, face);
  LPMatrix out(m.matrix.rows(), m.matrix.cols() - 1);
  for (Eigen::Index j = 0, k = 0; j < m.matrix.cols(); ++j) {
    if (j == drop) continue;
    out.col(k++) = m.matrix.col(j);
  }
  return out;
}

LaurentPoly alexander_det(const KnotDiagram& d, std::optional<int> deleted_face) {
  if (d.is_unknot()) return LaurentPoly(1);
  const int face = deleted_face.value_or(default_deleted_face(d));
  const FoxMatrix n = sign_normalize(fox_matrix(d), d, checkerboard_coloring(d));
  return normalize_unit(det(delete_face_column(n, d, face)));
}

AlexanderGraph build_alexander_graph(const KnotDiagram& d, std::optional<int> deleted_face) {
  AlexanderGraph ag;
  if (d.is_unknot()) return ag;
  ag.deleted_face = deleted_face.value_or(default_deleted_face(d));
  check_deleted_face(d, ag.deleted_face);
  for (int f = 0; f < static_cast<int>(d.faces().size()); ++f)
    if (f != d.unbounded_face() && f != ag.deleted_face) ag.faces.push_back(f);
  std::vector<int> vertex_of(d.faces().size(), -1);
  for (std::size_t k = 0; k < ag.faces.size(); ++k) vertex_of[static_cast<std::size_t>(ag.faces[k])] = static_cast<int>(k);

  const int n = d.crossing_count();
  for (const auto& c : d.crossings()) ag.crossing_sign.push_back(c.sign);
  ag.graph = PlaneBipartiteGraph(n, static_cast<int>(ag.faces.size()));
  std::vector<std::array<int, 4>> edge_at(static_cast<std::size_t>(n), {-1, -1, -1, -1});
  for (int x = 0; x < n; ++x) {
    const QuadrantRoles r = quadrant_roles(d, x);
    for (int q = 0; q < 4; ++q) {
      const int v = vertex_of[static_cast<std::size_t>(d.face_at(x, q))];
      if (v < 0) continue;
      const bool left = r.is_left(q);
      edge_at[static_cast<std::size_t>(x)][static_cast<std::size_t>(q)] =
          ag.graph.add_edge(x, v, left ? LaurentPoly::t() : LaurentPoly(1));
      ag.edge_crossing.push_back(x);
      ag.edge_quadrant.push_back(q);
      ag.edge_left.push_back(left);
    }
  }
  for (std::size_t k = 0; k < ag.faces.size(); ++k) {
    auto& rot = ag.graph.rot2[k];
    rot.clear();
    const auto& boundary = d.faces()[static_cast<std::size_t>(ag.faces[k])].boundary;
    for (auto it = boundary.rbegin(); it != boundary.rend(); ++it)
      rot.push_back(edge_at[static_cast<std::size_t>(it->crossing)][static_cast<std::size_t>(it->quadrant)]);
  }
  return ag;
}

KasteleynWeighting kauffman_weighting(const AlexanderGraph& ag) {
  KasteleynWeighting signs(ag.graph.edges.size(), 1);
  if (ag.graph.edges.empty()) return signs;
  for (std::size_t e = 0; e < signs.size(); ++e) {
    const int x = ag.edge_crossing[e];
    const int out_out = ag.crossing_sign[static_cast<std::size_t>(x)] > 0 ? 1 : 2;
    if (ag.edge_quadrant[e] == out_out) signs[e] = -1;
  }
  if (!verify_kasteleyn(ag.graph, signs))
    throw Error(ErrorKind::KasteleynCheckFailed, "local out-out signs violate the face parity condition");
  return signs;
}

LaurentPoly alexander_dimer(const KnotDiagram& d, std::optional<int> deleted_face) {
  if (d.is_unknot()) return LaurentPoly(1);
  const AlexanderGraph ag = build_alexander_graph(d, deleted_face);
  return normalize_unit(partition_function(apply_signs(ag.graph, kauffman_weighting(ag))));
}

std::size_t alexander_state_count(const KnotDiagram& d, std::optional<int> deleted_face) {
  if (d.is_unknot()) return 1;
  return enumerate_matchings(build_alexander_graph(d, deleted_face).graph).size();
}

LaurentPoly kauffman_state_sum(const KnotDiagram& d, std::optional<int> deleted_face, std::size_t* state_count) {
  if (d.is_unknot()) {
    if (state_count) *state_count = 1;
    return LaurentPoly(1);
  }
  const int removed = deleted_face.value_or(default_deleted_face(d));
  check_deleted_face(d, removed);
  const int n = d.crossing_count();
  // Local weight of each marker: t on the left of the over-strand, 1 on the
  // right, negated between the two outgoing strands.
  std::vector<std::vector<std::pair<int, LaurentPoly>>> markers(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    const QuadrantRoles r = quadrant_roles(d, x);
    for (int q = 0; q < 4; ++q) {
      const int f = d.face_at(x, q);
      if (f == d.unbounded_face() || f == removed) continue;
      LaurentPoly w = r.is_left(q) ? LaurentPoly::t() : LaurentPoly(1);
      if (q == out_out_quadrant(d, x)) w = -w;
      markers[static_cast<std::size_t>(x)].emplace_back(f, std::move(w));
    }
  }
  std::vector<char> used(d.faces().size(), 0);
  LaurentPoly total;
  std::size_t states = 0;
  std::function<void(int, const LaurentPoly&)> walk = [&](int x, const LaurentPoly& acc) {
    if (x == n) {
      total += acc;
      ++states;
      return;
    }
    for (const auto& [f, w] : markers[static_cast<std::size_t>(x)]) {
      if (used[static_cast<std::size_t>(f)]) continue;
      used[static_cast<std::size_t>(f)] = 1;
      walk(x + 1, acc * w);
      used[static_cast<std::size_t>(f)] = 0;
    }
  };
  walk(0, LaurentPoly(1));
  if (state_count) *state_count = states;
  return normalize_unit(total);
}

}  // namespace knotdimer
