#include "knotdimer/twisted.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <random>

#include "knotdimer/error.hpp"

namespace knotdimer {

namespace {

void require_valid(const KnotDiagram& d, const Representation& rho) {
  if (!verify_representation(d, rho))
    throw Error(ErrorKind::InvalidRepresentation, "images do not satisfy the Wirtinger relations of this diagram");
}

std::vector<int> over_arcs(const KnotDiagram& d) {
  std::vector<int> out(static_cast<std::size_t>(d.crossing_count()), -1);
  for (const auto& r : wirtinger_relations(d)) out[static_cast<std::size_t>(r.crossing)] = r.over_arc;
  return out;
}

void add_block(LPMatrix& m, Eigen::Index row, Eigen::Index col, const LPMatrix& block) {
  for (Eigen::Index i = 0; i < block.rows(); ++i)
    for (Eigen::Index j = 0; j < block.cols(); ++j)
      if (!block(i, j).is_zero()) m(row + i, col + j) += block(i, j);
}

bool is_permutation_pattern(const LPMatrix& b) {
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    int row = 0, col = 0;
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      row += !b(i, j).is_zero();
      col += !b(j, i).is_zero();
    }
    if (row != 1 || col != 1) return false;
  }
  return true;
}

}  // namespace

BlockMatrix twisted_block_matrix(const KnotDiagram& d, const Representation& rho) {
  require_valid(d, rho);
  const int n = rho.dim;
  BlockMatrix out;
  out.block_dim = n;
  for (int f = 0; f < static_cast<int>(d.faces().size()); ++f)
    if (f != d.unbounded_face()) out.faces.push_back(f);
  out.matrix = zero_matrix(static_cast<Eigen::Index>(d.crossing_count()) * n, static_cast<Eigen::Index>(out.faces.size()) * n);
  const auto over = over_arcs(d);
  const LPMatrix id = to_lp(IntMatrix::Identity(n, n));
  for (int x = 0; x < d.crossing_count(); ++x) {
    const LPMatrix tx = times_t(rho.images[static_cast<std::size_t>(over[static_cast<std::size_t>(x)])]);
    const QuadrantRoles r = quadrant_roles(d, x);
    const std::pair<int, LPMatrix> blocks[] = {{r.left_out, tx}, {r.left_in, -tx}, {r.right_out, -id}, {r.right_in, id}};
    for (const auto& [q, block] : blocks) {
      const auto it = std::find(out.faces.begin(), out.faces.end(), d.face_at(x, q));
      if (it == out.faces.end()) continue;
      add_block(out.matrix, static_cast<Eigen::Index>(x) * n, (it - out.faces.begin()) * n, block);
    }
  }
  return out;
}

BlockMatrix sign_normalize(const BlockMatrix& m, const KnotDiagram& d, const std::vector<FaceColor>& coloring) {
  const SignPattern s = normalizing_signs(d, coloring);
  BlockMatrix out = m;
  const int n = m.block_dim;
  for (Eigen::Index i = 0; i < out.matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.matrix.cols(); ++j) {
      const int sign = s.rows[static_cast<std::size_t>(i / n)] * s.columns[static_cast<std::size_t>(m.faces[static_cast<std::size_t>(j / n)])];
      if (sign < 0) out.matrix(i, j) = -out.matrix(i, j);
    }
  }
  out.normalized = true;
  return out;
}

LPMatrix delete_block_column(const BlockMatrix& m, const KnotDiagram& d, int face) {
  check_deleted_face(d, face);
  const int n = m.block_dim;
  const auto drop = std::find(m.faces.begin(), m.faces.end(), face) - m.faces.begin();
  LPMatrix out(m.matrix.rows(), m.matrix.cols() - n);
  for (Eigen::Index j = 0, k = 0; j < m.matrix.cols(); ++j) {
    if (j / n == drop) continue;
    out.col(k++) = m.matrix.col(j);
  }
  return out;
}

LaurentPoly twisted_det(const KnotDiagram& d, const Representation& rho, std::optional<int> deleted_face) {
  require_valid(d, rho);
  if (d.is_unknot()) return LaurentPoly(1);
  const int face = deleted_face.value_or(default_deleted_face(d));
  const BlockMatrix m = sign_normalize(twisted_block_matrix(d, rho), d, checkerboard_coloring(d));
  return normalize_unit(det(delete_block_column(m, d, face)));
}

std::vector<GadgetEdge> encode_matrix_gadget(const LPMatrix& m) {
  std::vector<GadgetEdge> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) out.push_back({static_cast<int>(i), static_cast<int>(j), m(i, j)});
  return out;
}

DrawnGraph build_twisted_graph(const KnotDiagram& d, const Representation& rho, std::optional<int> deleted_face,
                               TwistedLayout layout) {
  require_valid(d, rho);
  if (d.is_unknot()) return {};
  const AlexanderGraph ag = build_alexander_graph(d, deleted_face);
  const int n = rho.dim;
  const int crossings = ag.graph.n1;
  const int face_vertices = ag.graph.n2;
  const auto over = over_arcs(d);
  const LPMatrix id = to_lp(IntMatrix::Identity(n, n));

  // Normalized blocks: tX on left quadrants, the identity on right ones.
  std::vector<LPMatrix> block(ag.graph.edges.size());
  std::vector<std::vector<int>> gadget(ag.graph.edges.size());
  std::vector<RoutedEdge> edges;
  for (std::size_t a = 0; a < ag.graph.edges.size(); ++a) {
    const int x = ag.graph.edges[a].u;
    const int k = ag.graph.edges[a].v;
    block[a] = ag.edge_left[a] ? times_t(rho.images[static_cast<std::size_t>(over[static_cast<std::size_t>(x)])]) : id;
    for (const auto& ge : encode_matrix_gadget(block[a])) {
      gadget[a].push_back(static_cast<int>(edges.size()));
      edges.push_back({x * n + ge.row, k * n + ge.col, ge.weight});
    }
  }

  // Preferred rotations: gadgets in Alexander-graph order, and inside a
  // gadget the order of two facing rows of slots.
  std::vector<std::vector<int>> target1(static_cast<std::size_t>(crossings * n)), target2(static_cast<std::size_t>(face_vertices * n));
  for (int x = 0; x < crossings; ++x)
    for (int a : ag.graph.rot1[static_cast<std::size_t>(x)])
      for (int e : gadget[static_cast<std::size_t>(a)]) target1[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)].r)].push_back(e);
  for (int k = 0; k < face_vertices; ++k)
    for (int a : ag.graph.rot2[static_cast<std::size_t>(k)]) {
      const auto& gs = gadget[static_cast<std::size_t>(a)];
      for (auto it = gs.rbegin(); it != gs.rend(); ++it) target2[static_cast<std::size_t>(edges[static_cast<std::size_t>(*it)].c)].push_back(*it);
    }

  auto label_slots = [&](DrawnGraph g) {
    for (int x = 0; x < crossings; ++x)
      for (int i = 0; i < n; ++i) g.slot1[static_cast<std::size_t>(x * n + i)] = {x, i};
    for (int k = 0; k < face_vertices; ++k)
      for (int j = 0; j < n; ++j) g.slot2[static_cast<std::size_t>(k * n + j)] = {ag.faces[static_cast<std::size_t>(k)], j};
    return g;
  };

  // Gauge: along a BFS tree, permutation gadgets identify copies into
  // sheets. Each sheet is a copy of the Alexander graph and draws without
  // crossings; only the remaining edges have to cross anything.
  std::vector<std::vector<int>> incident(static_cast<std::size_t>(crossings + face_vertices));
  for (std::size_t a = 0; a < ag.graph.edges.size(); ++a) {
    incident[static_cast<std::size_t>(ag.graph.edges[a].u)].push_back(static_cast<int>(a));
    incident[static_cast<std::size_t>(crossings + ag.graph.edges[a].v)].push_back(static_cast<int>(a));
  }
  auto gauge = [&](int first_root, std::vector<int>& sheet1, std::vector<int>& sheet2) {
    sheet1.assign(static_cast<std::size_t>(crossings * n), -1);
    sheet2.assign(static_cast<std::size_t>(face_vertices * n), -1);
    const int total = crossings + face_vertices;
    std::vector<char> seen(static_cast<std::size_t>(total), 0);
    auto identity_sheets = [&](int vertex) {
      for (int i = 0; i < n; ++i) {
        if (vertex < crossings)
          sheet1[static_cast<std::size_t>(vertex * n + i)] = i;
        else
          sheet2[static_cast<std::size_t>((vertex - crossings) * n + i)] = i;
      }
    };
    for (int k = 0; k < total; ++k) {
      const int root = (first_root + k) % total;
      if (seen[static_cast<std::size_t>(root)]) continue;
      seen[static_cast<std::size_t>(root)] = 1;
      identity_sheets(root);
      std::deque<int> queue{root};
      while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (int a : incident[static_cast<std::size_t>(v)]) {
          const int other = v < crossings ? crossings + ag.graph.edges[static_cast<std::size_t>(a)].v : ag.graph.edges[static_cast<std::size_t>(a)].u;
          if (seen[static_cast<std::size_t>(other)]) continue;
          seen[static_cast<std::size_t>(other)] = 1;
          queue.push_back(other);
          if (!is_permutation_pattern(block[static_cast<std::size_t>(a)])) {
            identity_sheets(other);
            continue;
          }
          for (int e : gadget[static_cast<std::size_t>(a)]) {
            const auto& edge = edges[static_cast<std::size_t>(e)];
            if (v < crossings)
              sheet2[static_cast<std::size_t>(edge.c)] = sheet1[static_cast<std::size_t>(edge.r)];
            else
              sheet1[static_cast<std::size_t>(edge.r)] = sheet2[static_cast<std::size_t>(edge.c)];
          }
        }
      }
    }
  };

  std::vector<int> identity_order(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) identity_order[e] = static_cast<int>(e);
  if (layout == TwistedLayout::Gadgets) {
    DrawnGraph g = route_edges(crossings * n, face_vertices * n, edges, target1, target2, identity_order);
    return label_slots(std::move(g));
  }

  // Sheets first, then the cross-sheet edges. Several gauge roots and
  // cross-sheet orders are tried; the drawing with the fewest crossings wins.
  std::mt19937 rng(20240601U);
  std::optional<DrawnGraph> best;
  const int roots = std::min(crossings + face_vertices, 8);
  for (int trial = 0; trial < roots * 4; ++trial) {
    std::vector<int> sheet1, sheet2;
    gauge((trial / 4) * (crossings + face_vertices) / roots, sheet1, sheet2);
    std::vector<int> within, across;
    for (int e : identity_order) {
      const auto& edge = edges[static_cast<std::size_t>(e)];
      (sheet1[static_cast<std::size_t>(edge.r)] == sheet2[static_cast<std::size_t>(edge.c)] ? within : across).push_back(e);
    }
    std::stable_sort(within.begin(), within.end(), [&](int a, int b) {
      return sheet1[static_cast<std::size_t>(edges[static_cast<std::size_t>(a)].r)] <
             sheet1[static_cast<std::size_t>(edges[static_cast<std::size_t>(b)].r)];
    });
    if (trial % 4 != 0) std::shuffle(across.begin(), across.end(), rng);
    within.insert(within.end(), across.begin(), across.end());
    DrawnGraph g = route_edges(crossings * n, face_vertices * n, edges, target1, target2, within);
    if (!best || g.live_crossing_count() < best->live_crossing_count()) best = std::move(g);
    if (best->live_crossing_count() == 0) break;
  }
  return label_slots(std::move(*best));
}

LaurentPoly twisted_dimer(const KnotDiagram& d, const Representation& rho, std::optional<int> deleted_face, TwistedReport* report,
                          TwistedLayout layout) {
  require_valid(d, rho);
  if (d.is_unknot()) return LaurentPoly(1);
  const DrawnGraph drawn = build_twisted_graph(d, rho, deleted_face, layout);
  TwistedReport rep;
  rep.drawn_crossings = drawn.live_crossing_count();
  rep.planar = planarize(drawn, &rep.planarize);
  rep.signs = kasteleyn_weighting_by_component(rep.planar);
  const LaurentPoly z = partition_function(apply_signs(rep.planar, rep.signs));
  if (report) *report = std::move(rep);
  return normalize_unit(z);
}

}  // namespace knotdimer
