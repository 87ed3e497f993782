#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

#include "knotdimer/laurent.hpp"

namespace Eigen {

template <>
struct NumTraits<knotdimer::LaurentPoly> : GenericNumTraits<knotdimer::LaurentPoly> {
  typedef knotdimer::LaurentPoly Real;
  typedef knotdimer::LaurentPoly NonInteger;
  typedef knotdimer::LaurentPoly Literal;
  typedef knotdimer::LaurentPoly Nested;
  enum {
    IsComplex = 0,
    IsInteger = 1,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 4,
    MulCost = 16
  };
};

}  // namespace Eigen

namespace knotdimer {

using LPMatrix = Eigen::Matrix<LaurentPoly, Eigen::Dynamic, Eigen::Dynamic>;
using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

/// Zero-filled rows x cols matrix (Eigen's uninitialized constructor leaves
/// LaurentPoly default-constructed, which is already zero; this just reads better).
LPMatrix zero_matrix(Eigen::Index rows, Eigen::Index cols);
LPMatrix to_lp(const IntMatrix& m);
/// t * m, entrywise.
LPMatrix times_t(const IntMatrix& m);
bool equal(const LPMatrix& a, const LPMatrix& b);
std::size_t nonzero_count(const LPMatrix& m);

// Determinants. All throw NotSquare on non-square input.

/// Dispatches on size: cofactor expansion up to 8, Bareiss up to 16,
/// multi-modular evaluation/interpolation beyond.
LaurentPoly det(const LPMatrix& m);
/// Memoized cofactor expansion (dynamic programming over used-column sets).
LaurentPoly det_cofactor(const LPMatrix& m);
/// Fraction-free Bareiss elimination over Z[t], after clearing t^-k per row.
LaurentPoly det_bareiss(const LPMatrix& m);
/// Evaluation at D+1 points modulo enough 62-bit primes, Newton
/// interpolation, CRT reconstruction. D and the coefficient bound are
/// rigorous upper bounds, so the result is exact.
LaurentPoly det_modular(const LPMatrix& m);
/// Textbook sum over all permutations. Exponential; test oracle only.
LaurentPoly det_leibniz(const LPMatrix& m);

/// det(m(t0)) mod p for t0 != 0 mod p; cheap fingerprint of a determinant.
std::uint64_t det_mod_at(const LPMatrix& m, std::uint64_t p, std::uint64_t t0);

// Permanents. All throw NotSquare on non-square input.

/// Ryser for small dense input, sparse row sweep otherwise.
LaurentPoly perm(const LPMatrix& m);
/// Ryser's inclusion-exclusion formula, Gray-code order. n <= 30.
LaurentPoly perm_ryser(const LPMatrix& m);
/// Row-by-row sweep keyed by the set of still-open used columns.
LaurentPoly perm_sparse(const LPMatrix& m);

/// One sparse row: (column, value) pairs.
using SparseRow = std::vector<std::pair<int, LaurentPoly>>;

/// Shared kernel behind det_cofactor and perm_sparse. Rows are processed in a
/// greedy order that keeps the set of open columns small; when `signed_sum`
/// is true each term carries its permutation sign. Entries of a row may
/// repeat a column; repeated entries are distinct terms (parallel edges).
LaurentPoly sweep_sum(const std::vector<SparseRow>& rows, int cols, bool signed_sum);
/// Unsigned sum after forcing one-entry lines and merging two-entry lines;
/// the remainder goes through sweep_sum.
LaurentPoly permanent_sum(const std::vector<SparseRow>& rows, int cols);

}  // namespace knotdimer
