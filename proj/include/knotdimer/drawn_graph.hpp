#pragma once

#include <string>
#include <vector>

#include "knotdimer/laurent.hpp"
#include "knotdimer/matrix.hpp"
#include "knotdimer/plane_graph.hpp"

namespace knotdimer {

/// Bipartite graph drawn in the plane with transversal edge crossings.
///
/// Edge e runs from first-colour vertex r to second-colour vertex c and
/// passes the crossing points in `crossings`, listed from the r end.
/// A crossing point joins edges e and f. Counterclockwise around it one
/// meets: e toward r, f toward r (if r_sides_adjacent) or f toward c, then
/// e toward c, then the remaining half of f.
///
/// Rewrites never renumber: replaced edges and consumed crossings are
/// marked dead.
struct DrawnGraph {
  struct Edge {
    int r = -1;
    int c = -1;
    LaurentPoly weight;
    std::vector<int> crossings;
    bool alive = true;
  };
  struct Crossing {
    int e = -1;
    int f = -1;
    bool r_sides_adjacent = false;
    bool alive = true;
  };
  /// Cluster coordinates: which gadget or diagram vertex a vertex copies,
  /// and its slot within it. cluster -1 marks rewrite-created vertices.
  struct Slot {
    int cluster = -1;
    int index = 0;
  };

  int n1 = 0;
  int n2 = 0;
  std::vector<Edge> edges;
  std::vector<Crossing> crossings;
  std::vector<std::vector<int>> rot1;
  std::vector<std::vector<int>> rot2;
  std::vector<Slot> slot1;
  std::vector<Slot> slot2;

  int add_vertex1();
  int add_vertex1(Slot s);
  int add_vertex2();
  int add_vertex2(Slot s);
  /// Appends a crossing-free edge, last in both rotations.
  int add_edge(int r, int c, LaurentPoly weight);

  int live_edge_count() const;
  int live_crossing_count() const;

  /// Structural consistency plus the Euler check on the map obtained by
  /// promoting crossings to vertices. Throws MalformedInput or
  /// NotPlanarEmbedding.
  void validate() const;
};

/// n1 x n2 matrix over live edges; parallel edges sum.
LPMatrix weight_matrix(const DrawnGraph& g);

DrawnGraph from_plane_graph(const PlaneBipartiteGraph& g);
/// Throws NotSingleCrossing if a live crossing remains.
PlaneBipartiteGraph to_plane_graph(const DrawnGraph& g);

/// Replaces edge (r, c, a) by the path r -1- c' -(-1)- r' -a- c.
/// The first `first` crossings go to the first segment, the next `middle`
/// to the middle one, the rest to the last. Returns the three new edge ids.
std::vector<int> triple_edge_in_place(DrawnGraph& g, int e, std::size_t first, std::size_t middle);
/// Pure form. A lone crossing goes to the middle segment; with several, the
/// first two segments take one each.
DrawnGraph triple_edge(const DrawnGraph& g, int e);

/// Replaces crossing edges e = (r1, c2, a) and f = (r2, c1, b) by the
/// seven-edge butterfly around new vertices r0, c0. Both edges must carry
/// exactly this one crossing and have distinct endpoints, else
/// NotSingleCrossing.
void insert_butterfly_in_place(DrawnGraph& g, int crossing);
DrawnGraph insert_butterfly(const DrawnGraph& g, int crossing);

struct PlanarizeReport {
  int triplings = 0;
  int butterflies = 0;
  int checks = 0;  // per-rewrite determinant checks run
};

/// Triples until every edge has at most one crossing and no crossing joins
/// edges with a common endpoint, then inserts one butterfly per crossing.
/// After every rewrite the map passes the Euler check and the weight matrix
/// determinant matches the input's up to sign at random points modulo a
/// large prime; at the end the exact determinants are compared.
/// Throws RewriteCheckFailed.
PlaneBipartiteGraph planarize(const DrawnGraph& g, PlanarizeReport* report = nullptr);

/// Straight-line drawing of the graph encoding m: first-colour slots on one
/// segment, second-colour slots on a parallel one, both in index order.
/// Edges (i,j) and (k,l) cross iff (i-k)(j-l) < 0.
DrawnGraph gadget_drawing(const LPMatrix& m);

struct RoutedEdge {
  int r;
  int c;
  LaurentPoly weight;
};

/// Draws the edges one at a time in `order` into a growing plane map.
/// Each edge goes into the corners that `target1`/`target2` (preferred
/// counterclockwise edge orders) ask for when they share a face; otherwise
/// it follows a path through the fewest existing edges. Edge ids in the
/// result match `edges`.
DrawnGraph route_edges(int n1, int n2, const std::vector<RoutedEdge>& edges,
                       const std::vector<std::vector<int>>& target1,
                       const std::vector<std::vector<int>>& target2, const std::vector<int>& order);

/// Graphviz text; crossing points are unlabeled point nodes.
std::string to_dot(const DrawnGraph& g, const std::string& name = "G");

}  // namespace knotdimer
