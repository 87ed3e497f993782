#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "knotdimer/knot_diagram.hpp"
#include "knotdimer/matrix.hpp"

namespace knotdimer {

/// Integer matrices with determinant +-1, one per arc (Wirtinger generator).
struct Representation {
  int dim = 1;
  std::vector<IntMatrix> images;  // indexed by arc id
};

/// Arc colour c maps to the permutation matrix of x -> 2c - x mod p, with
/// basis vector k standing for the residue k+1 mod p.
/// Throws InvalidColoring.
Representation builtin_coloring_rep(const KnotDiagram& d, int p, const std::vector<int>& colors);
/// The p x p matrix of x -> 2c - x mod p in that basis.
IntMatrix reflection_matrix(int p, int c);
/// All non-constant colourings mod p with colour 0 on arc 0, in
/// lexicographic order.
std::vector<std::vector<int>> find_colorings(const KnotDiagram& d, int p);

Representation trivial_rep(const KnotDiagram& d);

/// Every crossing satisfies rho(out) = rho(over)^-s rho(in) rho(over)^s.
bool verify_representation(const KnotDiagram& d, const Representation& rho);

/// Exact inverse of a determinant +-1 integer matrix. Throws
/// InvalidRepresentation otherwise.
IntMatrix unimodular_inverse(const IntMatrix& m);
long long int_det(const IntMatrix& m);

/// P rho P^-1 on every arc.
Representation conjugate(const Representation& rho, const IntMatrix& p);

/// "dim n", then per arc "arc <id>" and n rows of n integers.
/// Throws InvalidRepresentation on shape, id or determinant problems.
Representation parse_representation(std::string_view text, int arc_count);
std::string format_representation(const Representation& rho);

}  // namespace knotdimer
