#pragma once

#include <optional>
#include <string>
#include <vector>

#include "knotdimer/laurent.hpp"
#include "knotdimer/matrix.hpp"

namespace knotdimer {

/// Weighted bipartite graph with a rotation system.
///
/// Vertices of the first colour are 0..n1-1, of the second 0..n2-1. Edge e
/// has two darts: 2e runs from its first-colour end to its second-colour end,
/// 2e+1 runs back. rot1[u] / rot2[v] list incident edge ids counterclockwise.
struct PlaneBipartiteGraph {
  struct Edge {
    int u;
    int v;
    LaurentPoly weight;
  };

  int n1 = 0;
  int n2 = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> rot1;
  std::vector<std::vector<int>> rot2;

  PlaneBipartiteGraph() = default;
  PlaneBipartiteGraph(int first, int second);

  /// Appends an edge and places it last in both rotations.
  int add_edge(int u, int v, LaurentPoly weight);
  int vertex_count() const { return n1 + n2; }
  int edge_count() const { return static_cast<int>(edges.size()); }

  /// Throws MalformedInput if indices are out of range or a rotation is not
  /// a permutation of the incident edges.
  void validate() const;
};

/// A face is the cyclic sequence of darts along its boundary.
struct GraphFace {
  std::vector<int> darts;
  int length() const { return static_cast<int>(darts.size()); }
};

/// Traces all faces. Throws NotPlanarEmbedding unless V - E + F = 2 holds
/// for every connected component that has an edge.
std::vector<GraphFace> graph_faces(const PlaneBipartiteGraph& g);
/// Longest face, lowest index on ties. -1 when there are no faces.
int default_unbounded_face(const std::vector<GraphFace>& faces);

/// Component label per vertex; first colour at 0..n1-1, second at n1.. .
std::vector<int> component_labels(const PlaneBipartiteGraph& g, int* count = nullptr);

struct GraphComponent {
  PlaneBipartiteGraph graph;
  std::vector<int> v1;     // original ids of the component's first-colour vertices
  std::vector<int> v2;
  std::vector<int> edges;  // original edge ids
};
/// Splits into connected components (isolated vertices form their own).
std::vector<GraphComponent> connected_components(const PlaneBipartiteGraph& g);

/// Edge ids, ascending.
using Matching = std::vector<int>;

/// All perfect matchings, sorted lexicographically. Empty when n1 != n2.
std::vector<Matching> enumerate_matchings(const PlaneBipartiteGraph& g);
/// Sum over perfect matchings of the product of edge weights.
LaurentPoly partition_function(const PlaneBipartiteGraph& g);
/// n1 x n2 matrix; parallel edges sum.
LPMatrix weight_matrix(const PlaneBipartiteGraph& g);

/// Sign (+1 or -1) per edge.
using KasteleynWeighting = std::vector<int>;

/// Spanning tree gets +1; the remaining signs are forced face by face while
/// pruning leaves of the dual tree rooted at the unbounded face.
/// Throws Disconnected.
KasteleynWeighting kasteleyn_weighting(const PlaneBipartiteGraph& g,
                                       std::optional<int> unbounded_face = std::nullopt);
/// kasteleyn_weighting on each connected component separately.
KasteleynWeighting kasteleyn_weighting_by_component(const PlaneBipartiteGraph& g);
/// Parity condition on every bounded face.
bool verify_kasteleyn(const PlaneBipartiteGraph& g, const KasteleynWeighting& signs,
                      std::optional<int> unbounded_face = std::nullopt);
PlaneBipartiteGraph apply_signs(const PlaneBipartiteGraph& g, const KasteleynWeighting& signs);
/// weight_matrix of the graph signed by kasteleyn_weighting.
LPMatrix kasteleyn_matrix(const PlaneBipartiteGraph& g);

/// Graphviz text. First colour "r<i>" filled black, second "c<j>" white;
/// edges labelled by weight, dashed where signs says -1.
std::string to_dot(const PlaneBipartiteGraph& g, const KasteleynWeighting* signs = nullptr,
                   const std::string& name = "G");

}  // namespace knotdimer
