#pragma once

#include <optional>
#include <vector>

#include "knotdimer/alexander.hpp"
#include "knotdimer/drawn_graph.hpp"
#include "knotdimer/knot_diagram.hpp"
#include "knotdimer/representation.hpp"

namespace knotdimer {

/// nC x n(C+1) matrix with n x n blocks: block row per crossing, block
/// column per bounded face (ascending face id).
struct BlockMatrix {
  LPMatrix matrix;
  int block_dim = 1;
  std::vector<int> faces;
  bool normalized = false;
};

/// Fox matrix with t replaced by tX (X the image of the over arc) and 1 by
/// the identity.
BlockMatrix twisted_block_matrix(const KnotDiagram& d, const Representation& rho);
/// The untwisted row and column signs applied block by block.
BlockMatrix sign_normalize(const BlockMatrix& m, const KnotDiagram& d, const std::vector<FaceColor>& coloring);
/// Drops the n columns of `face`. Throws FaceUnbounded / FaceNotAdjacent.
LPMatrix delete_block_column(const BlockMatrix& m, const KnotDiagram& d, int face);

/// Unit-normalized determinant of the normalized, block-column-deleted
/// matrix. Throws InvalidRepresentation unless rho satisfies the Wirtinger
/// relations.
LaurentPoly twisted_det(const KnotDiagram& d, const Representation& rho, std::optional<int> deleted_face = std::nullopt);

struct GadgetEdge {
  int row;
  int col;
  LaurentPoly weight;
};
/// One edge per nonzero entry, row-major.
std::vector<GadgetEdge> encode_matrix_gadget(const LPMatrix& m);

enum class TwistedLayout {
  Sheets,   // gauge copies into sheets first; usually few or no crossings
  Gadgets,  // edges in gadget order, no gauge; crossings are common
};

/// Alexander graph with every vertex copied n times and every edge replaced
/// by the graph encoding tX (left quadrants) or the identity. Copy i of
/// crossing x is first-colour vertex x*n+i; copy j of face vertex k is
/// second-colour vertex k*n+j, so the weight matrix is the normalized,
/// block-column-deleted block matrix.
DrawnGraph build_twisted_graph(const KnotDiagram& d, const Representation& rho,
                               std::optional<int> deleted_face = std::nullopt,
                               TwistedLayout layout = TwistedLayout::Sheets);

struct TwistedReport {
  int drawn_crossings = 0;
  PlanarizeReport planarize;
  PlaneBipartiteGraph planar;  // the graph whose matchings are summed
  KasteleynWeighting signs;
};

/// build_twisted_graph, planarize, Kasteleyn signs per component, partition
/// function; unit-normalized.
LaurentPoly twisted_dimer(const KnotDiagram& d, const Representation& rho, std::optional<int> deleted_face = std::nullopt,
                          TwistedReport* report = nullptr, TwistedLayout layout = TwistedLayout::Sheets);

}  // namespace knotdimer
