#include "knotdimer/plane_graph.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

#include "knotdimer/error.hpp"

namespace knotdimer {

PlaneBipartiteGraph::PlaneBipartiteGraph(int first, int second)
    : n1(first), n2(second), rot1(static_cast<std::size_t>(first)), rot2(static_cast<std::size_t>(second)) {}

int PlaneBipartiteGraph::add_edge(int u, int v, LaurentPoly weight) {
  const int id = edge_count();
  edges.push_back({u, v, std::move(weight)});
  rot1[static_cast<std::size_t>(u)].push_back(id);
  rot2[static_cast<std::size_t>(v)].push_back(id);
  return id;
}

void PlaneBipartiteGraph::validate() const {
  if (static_cast<int>(rot1.size()) != n1 || static_cast<int>(rot2.size()) != n2)
    throw Error(ErrorKind::MalformedInput, "rotation table size does not match vertex count");
  std::vector<std::vector<int>> inc1(static_cast<std::size_t>(n1)), inc2(static_cast<std::size_t>(n2));
  for (int e = 0; e < edge_count(); ++e) {
    const auto& ed = edges[static_cast<std::size_t>(e)];
    if (ed.u < 0 || ed.u >= n1 || ed.v < 0 || ed.v >= n2)
      throw Error(ErrorKind::MalformedInput, "edge " + std::to_string(e) + " has an endpoint out of range");
    inc1[static_cast<std::size_t>(ed.u)].push_back(e);
    inc2[static_cast<std::size_t>(ed.v)].push_back(e);
  }
  auto check = [](std::vector<int> want, std::vector<int> got, const std::string& who) {
    std::sort(want.begin(), want.end());
    std::sort(got.begin(), got.end());
    if (want != got) throw Error(ErrorKind::MalformedInput, "rotation at " + who + " is not a permutation of its edges");
  };
  for (int u = 0; u < n1; ++u) check(inc1[static_cast<std::size_t>(u)], rot1[static_cast<std::size_t>(u)], "r" + std::to_string(u));
  for (int v = 0; v < n2; ++v) check(inc2[static_cast<std::size_t>(v)], rot2[static_cast<std::size_t>(v)], "c" + std::to_string(v));
}

namespace {

// Vertex a dart points to, in the combined numbering.
int dart_head(const PlaneBipartiteGraph& g, int dart) {
  const auto& e = g.edges[static_cast<std::size_t>(dart / 2)];
  return dart % 2 == 0 ? g.n1 + e.v : e.u;
}

const std::vector<int>& rotation_of(const PlaneBipartiteGraph& g, int vertex) {
  return vertex < g.n1 ? g.rot1[static_cast<std::size_t>(vertex)]
                       : g.rot2[static_cast<std::size_t>(vertex - g.n1)];
}

// Position of each edge in the rotation at each of its ends.
struct RotationIndex {
  std::vector<int> at_u, at_v;
};

RotationIndex rotation_index(const PlaneBipartiteGraph& g) {
  RotationIndex idx{std::vector<int>(g.edges.size(), -1), std::vector<int>(g.edges.size(), -1)};
  for (int u = 0; u < g.n1; ++u) {
    const auto& r = g.rot1[static_cast<std::size_t>(u)];
    for (std::size_t k = 0; k < r.size(); ++k) idx.at_u[static_cast<std::size_t>(r[k])] = static_cast<int>(k);
  }
  for (int v = 0; v < g.n2; ++v) {
    const auto& r = g.rot2[static_cast<std::size_t>(v)];
    for (std::size_t k = 0; k < r.size(); ++k) idx.at_v[static_cast<std::size_t>(r[k])] = static_cast<int>(k);
  }
  return idx;
}

std::vector<GraphFace> trace_faces(const PlaneBipartiteGraph& g, std::vector<int>& face_of) {
  const RotationIndex idx = rotation_index(g);
  const int darts = 2 * g.edge_count();
  face_of.assign(static_cast<std::size_t>(darts), -1);
  std::vector<GraphFace> faces;
  for (int start = 0; start < darts; ++start) {
    if (face_of[static_cast<std::size_t>(start)] >= 0) continue;
    GraphFace face;
    int d = start;
    while (face_of[static_cast<std::size_t>(d)] < 0) {
      face_of[static_cast<std::size_t>(d)] = static_cast<int>(faces.size());
      face.darts.push_back(d);
      // Arrive at the head, continue along the next edge counterclockwise.
      const int w = dart_head(g, d);
      const int e = d / 2;
      const auto& rot = rotation_of(g, w);
      const int pos = w < g.n1 ? idx.at_u[static_cast<std::size_t>(e)] : idx.at_v[static_cast<std::size_t>(e)];
      const int next_edge = rot[static_cast<std::size_t>((pos + 1) % static_cast<int>(rot.size()))];
      d = 2 * next_edge + (w < g.n1 ? 0 : 1);
    }
    if (d != start) throw Error(ErrorKind::NotPlanarEmbedding, "face walk did not close");
    faces.push_back(std::move(face));
  }
  return faces;
}

}  // namespace

std::vector<int> component_labels(const PlaneBipartiteGraph& g, int* count) {
  std::vector<int> label(static_cast<std::size_t>(g.vertex_count()), -1);
  int next = 0;
  for (int s = 0; s < g.vertex_count(); ++s) {
    if (label[static_cast<std::size_t>(s)] >= 0) continue;
    std::deque<int> queue{s};
    label[static_cast<std::size_t>(s)] = next;
    while (!queue.empty()) {
      const int x = queue.front();
      queue.pop_front();
      for (int e : rotation_of(g, x)) {
        const auto& ed = g.edges[static_cast<std::size_t>(e)];
        const int y = x < g.n1 ? g.n1 + ed.v : ed.u;
        if (label[static_cast<std::size_t>(y)] < 0) {
          label[static_cast<std::size_t>(y)] = next;
          queue.push_back(y);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

std::vector<GraphFace> graph_faces(const PlaneBipartiteGraph& g) {
  g.validate();
  std::vector<int> face_of;
  auto faces = trace_faces(g, face_of);
  int comps = 0;
  const auto label = component_labels(g, &comps);
  std::vector<long> v(static_cast<std::size_t>(comps), 0), e(static_cast<std::size_t>(comps), 0),
      f(static_cast<std::size_t>(comps), 0);
  for (int x = 0; x < g.vertex_count(); ++x) ++v[static_cast<std::size_t>(label[static_cast<std::size_t>(x)])];
  for (const auto& ed : g.edges) ++e[static_cast<std::size_t>(label[static_cast<std::size_t>(ed.u)])];
  for (const auto& face : faces) {
    const auto& ed = g.edges[static_cast<std::size_t>(face.darts.front() / 2)];
    ++f[static_cast<std::size_t>(label[static_cast<std::size_t>(ed.u)])];
  }
  for (int c = 0; c < comps; ++c) {
    const auto k = static_cast<std::size_t>(c);
    if (e[k] == 0) continue;
    if (v[k] - e[k] + f[k] != 2) {
      throw Error(ErrorKind::NotPlanarEmbedding,
                  "Euler check failed: V - E + F = " + std::to_string(v[k] - e[k] + f[k]));
    }
  }
  return faces;
}

int default_unbounded_face(const std::vector<GraphFace>& faces) {
  int best = -1;
  for (int i = 0; i < static_cast<int>(faces.size()); ++i)
    if (best < 0 || faces[static_cast<std::size_t>(i)].length() > faces[static_cast<std::size_t>(best)].length()) best = i;
  return best;
}

std::vector<GraphComponent> connected_components(const PlaneBipartiteGraph& g) {
  int comps = 0;
  const auto label = component_labels(g, &comps);
  std::vector<GraphComponent> out(static_cast<std::size_t>(comps));
  std::vector<int> local(static_cast<std::size_t>(g.vertex_count()), -1);
  for (int x = 0; x < g.vertex_count(); ++x) {
    auto& comp = out[static_cast<std::size_t>(label[static_cast<std::size_t>(x)])];
    if (x < g.n1) {
      local[static_cast<std::size_t>(x)] = static_cast<int>(comp.v1.size());
      comp.v1.push_back(x);
    } else {
      local[static_cast<std::size_t>(x)] = static_cast<int>(comp.v2.size());
      comp.v2.push_back(x - g.n1);
    }
  }
  std::vector<int> local_edge(g.edges.size(), -1);
  for (auto& comp : out) {
    comp.graph = PlaneBipartiteGraph(static_cast<int>(comp.v1.size()), static_cast<int>(comp.v2.size()));
  }
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto& ed = g.edges[static_cast<std::size_t>(e)];
    auto& comp = out[static_cast<std::size_t>(label[static_cast<std::size_t>(ed.u)])];
    local_edge[static_cast<std::size_t>(e)] = static_cast<int>(comp.graph.edges.size());
    comp.graph.edges.push_back({local[static_cast<std::size_t>(ed.u)],
                                local[static_cast<std::size_t>(g.n1 + ed.v)], ed.weight});
    comp.edges.push_back(e);
  }
  for (auto& comp : out) {
    for (std::size_t i = 0; i < comp.v1.size(); ++i)
      for (int e : g.rot1[static_cast<std::size_t>(comp.v1[i])]) comp.graph.rot1[i].push_back(local_edge[static_cast<std::size_t>(e)]);
    for (std::size_t i = 0; i < comp.v2.size(); ++i)
      for (int e : g.rot2[static_cast<std::size_t>(comp.v2[i])]) comp.graph.rot2[i].push_back(local_edge[static_cast<std::size_t>(e)]);
  }
  return out;
}

std::vector<Matching> enumerate_matchings(const PlaneBipartiteGraph& g) {
  std::vector<Matching> result;
  if (g.n1 != g.n2) return result;
  const int nv = g.vertex_count();
  std::vector<char> used(static_cast<std::size_t>(nv), 0);
  Matching current;
  auto other = [&](int x, int e) {
    const auto& ed = g.edges[static_cast<std::size_t>(e)];
    return x < g.n1 ? g.n1 + ed.v : ed.u;
  };
  std::function<void(int)> search = [&](int matched) {
    if (matched == nv) {
      Matching m = current;
      std::sort(m.begin(), m.end());
      result.push_back(std::move(m));
      return;
    }
    // Branch on the free vertex with the fewest available edges.
    int best = -1;
    int best_deg = 0;
    for (int x = 0; x < nv; ++x) {
      if (used[static_cast<std::size_t>(x)]) continue;
      int deg = 0;
      for (int e : rotation_of(g, x))
        if (!used[static_cast<std::size_t>(other(x, e))]) ++deg;
      if (best < 0 || deg < best_deg) {
        best = x;
        best_deg = deg;
      }
      if (deg == 0) return;
    }
    std::vector<int> choices;
    for (int e : rotation_of(g, best))
      if (!used[static_cast<std::size_t>(other(best, e))]) choices.push_back(e);
    std::sort(choices.begin(), choices.end());
    for (int e : choices) {
      const int y = other(best, e);
      used[static_cast<std::size_t>(best)] = used[static_cast<std::size_t>(y)] = 1;
      current.push_back(e);
      search(matched + 2);
      current.pop_back();
      used[static_cast<std::size_t>(best)] = used[static_cast<std::size_t>(y)] = 0;
    }
  };
  search(0);
  std::sort(result.begin(), result.end());
  return result;
}

LaurentPoly partition_function(const PlaneBipartiteGraph& g) {
  if (g.n1 != g.n2) return {};
  std::vector<SparseRow> rows(static_cast<std::size_t>(g.n1));
  for (const auto& ed : g.edges) rows[static_cast<std::size_t>(ed.u)].emplace_back(ed.v, ed.weight);
  return permanent_sum(rows, g.n2);
}

LPMatrix weight_matrix(const PlaneBipartiteGraph& g) {
  LPMatrix m = zero_matrix(g.n1, g.n2);
  for (const auto& ed : g.edges) m(ed.u, ed.v) += ed.weight;
  return m;
}

namespace {

int negatives_on(const GraphFace& face, const KasteleynWeighting& signs) {
  int count = 0;
  for (int d : face.darts)
    if (signs[static_cast<std::size_t>(d / 2)] < 0) ++count;
  return count;
}

bool face_ok(const GraphFace& face, const KasteleynWeighting& signs) {
  const int neg = negatives_on(face, signs);
  return face.length() % 4 == 0 ? neg % 2 == 1 : neg % 2 == 0;
}

}  // namespace

KasteleynWeighting kasteleyn_weighting(const PlaneBipartiteGraph& g, std::optional<int> unbounded_face) {
  int comps = 0;
  const auto label = component_labels(g, &comps);
  if (comps > 1) throw Error(ErrorKind::Disconnected, std::to_string(comps) + " components");
  KasteleynWeighting signs(g.edges.size(), 1);
  if (g.edges.empty()) return signs;
  std::vector<int> face_of;
  graph_faces(g);
  const auto faces = trace_faces(g, face_of);
  const int root = unbounded_face.value_or(default_unbounded_face(faces));

  // Spanning tree by BFS from vertex 0.
  std::vector<char> in_tree(g.edges.size(), 0), seen(static_cast<std::size_t>(g.vertex_count()), 0);
  std::deque<int> queue{0};
  seen[0] = 1;
  while (!queue.empty()) {
    const int x = queue.front();
    queue.pop_front();
    for (int e : rotation_of(g, x)) {
      const auto& ed = g.edges[static_cast<std::size_t>(e)];
      const int y = x < g.n1 ? g.n1 + ed.v : ed.u;
      if (seen[static_cast<std::size_t>(y)]) continue;
      seen[static_cast<std::size_t>(y)] = 1;
      in_tree[static_cast<std::size_t>(e)] = 1;
      queue.push_back(y);
    }
  }

  // Dual tree over the remaining edges, rooted at the unbounded face.
  std::vector<std::vector<std::pair<int, int>>> dual(faces.size());
  for (int e = 0; e < g.edge_count(); ++e) {
    if (in_tree[static_cast<std::size_t>(e)]) continue;
    const int a = face_of[static_cast<std::size_t>(2 * e)];
    const int b = face_of[static_cast<std::size_t>(2 * e + 1)];
    dual[static_cast<std::size_t>(a)].emplace_back(e, b);
    dual[static_cast<std::size_t>(b)].emplace_back(e, a);
  }
  std::vector<int> parent_edge(faces.size(), -1), order;
  std::vector<char> reached(faces.size(), 0);
  reached[static_cast<std::size_t>(root)] = 1;
  std::deque<int> fq{root};
  while (!fq.empty()) {
    const int f = fq.front();
    fq.pop_front();
    order.push_back(f);
    for (const auto& [e, h] : dual[static_cast<std::size_t>(f)]) {
      if (reached[static_cast<std::size_t>(h)]) continue;
      reached[static_cast<std::size_t>(h)] = 1;
      parent_edge[static_cast<std::size_t>(h)] = e;
      fq.push_back(h);
    }
  }
  // Leaves first: every face's other cotree edges are already fixed.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int f = *it;
    if (f == root) continue;
    const int e = parent_edge[static_cast<std::size_t>(f)];
    signs[static_cast<std::size_t>(e)] = 1;
    if (!face_ok(faces[static_cast<std::size_t>(f)], signs)) signs[static_cast<std::size_t>(e)] = -1;
  }
  return signs;
}

bool verify_kasteleyn(const PlaneBipartiteGraph& g, const KasteleynWeighting& signs,
                      std::optional<int> unbounded_face) {
  if (signs.size() != g.edges.size()) return false;
  const auto faces = graph_faces(g);
  if (faces.empty()) return true;
  int comps = 0;
  component_labels(g, &comps);
  if (comps > 1 && !unbounded_face) {
    // Each component has its own unbounded face: the longest one.
    for (const auto& comp : connected_components(g)) {
      KasteleynWeighting local;
      for (int e : comp.edges) local.push_back(signs[static_cast<std::size_t>(e)]);
      if (!verify_kasteleyn(comp.graph, local)) return false;
    }
    return true;
  }
  const int root = unbounded_face.value_or(default_unbounded_face(faces));
  for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
    if (f == root) continue;
    if (!face_ok(faces[static_cast<std::size_t>(f)], signs)) return false;
  }
  return true;
}

PlaneBipartiteGraph apply_signs(const PlaneBipartiteGraph& g, const KasteleynWeighting& signs) {
  PlaneBipartiteGraph out = g;
  for (std::size_t e = 0; e < out.edges.size(); ++e)
    if (signs[e] < 0) out.edges[e].weight = -out.edges[e].weight;
  return out;
}

KasteleynWeighting kasteleyn_weighting_by_component(const PlaneBipartiteGraph& g) {
  KasteleynWeighting signs(g.edges.size(), 1);
  for (const auto& comp : connected_components(g)) {
    if (comp.edges.empty()) continue;
    const KasteleynWeighting local = kasteleyn_weighting(comp.graph);
    for (std::size_t k = 0; k < comp.edges.size(); ++k) signs[static_cast<std::size_t>(comp.edges[k])] = local[k];
  }
  return signs;
}

LPMatrix kasteleyn_matrix(const PlaneBipartiteGraph& g) {
  return weight_matrix(apply_signs(g, kasteleyn_weighting(g)));
}

std::string to_dot(const PlaneBipartiteGraph& g, const KasteleynWeighting* signs, const std::string& name) {
  std::ostringstream os;
  os << "graph " << name << " {\n";
  for (int u = 0; u < g.n1; ++u) os << "  r" << u << " [style=filled, fillcolor=black, fontcolor=white];\n";
  for (int v = 0; v < g.n2; ++v) os << "  c" << v << " [style=filled, fillcolor=white];\n";
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto& ed = g.edges[e];
    os << "  r" << ed.u << " -- c" << ed.v << " [label=\"" << ed.weight.to_string() << "\"";
    if (signs && (*signs)[e] < 0) os << ", style=dashed";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace knotdimer
