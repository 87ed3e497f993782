#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace knotdimer {

using BigInt = mpz_class;

/// Integer Laurent polynomial in one variable t.
///
/// Stored as a lowest degree plus a dense coefficient run. The run is kept
/// trimmed: first and last coefficients are nonzero, and zero is the empty run.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  LaurentPoly(long value);  // NOLINT: constants convert implicitly, Eigen needs it
  LaurentPoly(const BigInt& value);  // NOLINT

  static LaurentPoly monomial(const BigInt& coeff, int degree);
  /// t^power
  static LaurentPoly t(int power = 1);
  static LaurentPoly from_coeffs(int low_degree, std::vector<BigInt> coeffs);
  /// Parses "t^2 - t + 1", "2t^-1", "1-3*t+ t^2" and similar.
  static LaurentPoly parse(std::string_view text);

  bool is_zero() const { return coeffs_.empty(); }
  int low_degree() const { return low_; }
  int high_degree() const { return low_ + static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<BigInt>& coeffs() const { return coeffs_; }
  BigInt coeff(int degree) const;
  std::size_t term_count() const;

  /// Sum of absolute values of the coefficients.
  BigInt l1_norm() const;
  bool has_nonnegative_coeffs() const;

  LaurentPoly shifted(int k) const;          // this * t^k
  LaurentPoly inverted_variable() const;     // t -> t^-1
  /// Exact evaluation; requires t = +-1 or no negative powers.
  BigInt evaluate(const BigInt& t) const;

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& other);
  LaurentPoly& operator-=(const LaurentPoly& other);
  LaurentPoly& operator*=(const LaurentPoly& other);

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.low_ == b.low_ && a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

  /// Descending degree, explicit signs, caret exponents: "t^2 - t + 1".
  std::string to_string() const;

  /// Adds coeff * t^degree in place.
  void add_term(const BigInt& coeff, int degree);

 private:
  void trim();

  int low_ = 0;
  std::vector<BigInt> coeffs_;
};

std::ostream& operator<<(std::ostream& os, const LaurentPoly& p);

/// Multiplies by the unit +-t^k that puts the lowest degree at 0 with a
/// positive lowest coefficient. Zero maps to zero.
LaurentPoly normalize_unit(const LaurentPoly& p);

/// Equality up to multiplication by +-t^k.
bool equal_up_to_unit(const LaurentPoly& a, const LaurentPoly& b);

/// Quotient a / b when it exists in Z[t, t^-1], otherwise nullopt.
std::optional<LaurentPoly> exact_divide(const LaurentPoly& a, const LaurentPoly& b);

/// True when the nonzero coefficients strictly alternate in sign with no
/// internal gaps.
bool has_alternating_coeffs(const LaurentPoly& p);

}  // namespace knotdimer
