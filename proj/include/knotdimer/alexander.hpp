#pragma once

#include <optional>
#include <vector>

#include "knotdimer/knot_diagram.hpp"
#include "knotdimer/laurent.hpp"
#include "knotdimer/matrix.hpp"
#include "knotdimer/plane_graph.hpp"

namespace knotdimer {

/// Crossing-by-face matrix. Rows follow crossing ids, columns the bounded
/// faces in ascending face id (faces[j] is the face of column j).
struct FoxMatrix {
  LPMatrix matrix;
  std::vector<int> faces;
  bool normalized = false;
};

/// Per crossing: +t, -t, -1, +1 at the left-out, left-in, right-out and
/// right-in quadrants. Entries add when a face fills two quadrants.
FoxMatrix fox_matrix(const KnotDiagram& d);

/// Row and column signs that make a Fox matrix nonnegative.
struct SignPattern {
  std::vector<int> rows;     // per crossing
  std::vector<int> columns;  // per face id (all faces, including the unbounded one)
};
SignPattern normalizing_signs(const KnotDiagram& d, const std::vector<FaceColor>& coloring);

/// Applies normalizing_signs. Throws NotNormalizable if a negative
/// coefficient survives.
FoxMatrix sign_normalize(const FoxMatrix& m, const KnotDiagram& d, const std::vector<FaceColor>& coloring);

/// Lowest-id bounded face adjacent to the unbounded face.
int default_deleted_face(const KnotDiagram& d);
/// Throws FaceUnbounded or FaceNotAdjacent for an invalid choice.
void check_deleted_face(const KnotDiagram& d, int face);

/// Drops the column of `face`. Square C x C result.
LPMatrix delete_face_column(const FoxMatrix& m, const KnotDiagram& d, int face);

/// Unit-normalized determinant of the normalized, column-deleted matrix.
LaurentPoly alexander_det(const KnotDiagram& d, std::optional<int> deleted_face = std::nullopt);

/// Crossing/face incidence graph with the unbounded and one adjacent face removed.
struct AlexanderGraph {
  PlaneBipartiteGraph graph;          // first colour: crossings; second: faces[]
  std::vector<int> faces;             // diagram face of each second-colour vertex
  int deleted_face = -1;
  std::vector<int> edge_crossing;     // per edge
  std::vector<int> edge_quadrant;     // per edge
  std::vector<char> edge_left;        // per edge: weight t
  std::vector<int> crossing_sign;     // per crossing
};

/// Edges ordered by (crossing, quadrant); rotation follows quadrant order at
/// a crossing and reversed face traversal at a face.
AlexanderGraph build_alexander_graph(const KnotDiagram& d, std::optional<int> deleted_face = std::nullopt);

/// -1 on the edge into the quadrant between the two outgoing strands.
/// Throws KasteleynCheckFailed if the result fails verify_kasteleyn.
KasteleynWeighting kauffman_weighting(const AlexanderGraph& ag);

/// Partition function of the Kauffman-signed Alexander graph, unit-normalized.
LaurentPoly alexander_dimer(const KnotDiagram& d, std::optional<int> deleted_face = std::nullopt);
/// Alexander graph matching count.
std::size_t alexander_state_count(const KnotDiagram& d, std::optional<int> deleted_face = std::nullopt);

/// Sum over marker states read straight off the diagram, unit-normalized.
LaurentPoly kauffman_state_sum(const KnotDiagram& d, std::optional<int> deleted_face = std::nullopt,
                               std::size_t* state_count = nullptr);

}  // namespace knotdimer
