#include "knotdimer/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <sstream>

#include "knotdimer/error.hpp"

namespace knotdimer {

LaurentPoly::LaurentPoly(long value) {
  if (value != 0) coeffs_.emplace_back(value);
}

LaurentPoly::LaurentPoly(const BigInt& value) {
  if (value != 0) coeffs_.push_back(value);
}

LaurentPoly LaurentPoly::monomial(const BigInt& coeff, int degree) {
  LaurentPoly p;
  if (coeff != 0) {
    p.low_ = degree;
    p.coeffs_.push_back(coeff);
  }
  return p;
}

LaurentPoly LaurentPoly::t(int power) { return monomial(1, power); }

LaurentPoly LaurentPoly::from_coeffs(int low_degree, std::vector<BigInt> coeffs) {
  LaurentPoly p;
  p.low_ = low_degree;
  p.coeffs_ = std::move(coeffs);
  p.trim();
  return p;
}

void LaurentPoly::trim() {
  std::size_t first = 0;
  while (first < coeffs_.size() && coeffs_[first] == 0) ++first;
  if (first == coeffs_.size()) {
    coeffs_.clear();
    low_ = 0;
    return;
  }
  std::size_t last = coeffs_.size();
  while (coeffs_[last - 1] == 0) --last;
  if (first > 0 || last < coeffs_.size()) {
    coeffs_ = std::vector<BigInt>(coeffs_.begin() + static_cast<long>(first),
                                  coeffs_.begin() + static_cast<long>(last));
    low_ += static_cast<int>(first);
  }
}

BigInt LaurentPoly::coeff(int degree) const {
  if (is_zero() || degree < low_ || degree > high_degree()) return 0;
  return coeffs_[static_cast<std::size_t>(degree - low_)];
}

std::size_t LaurentPoly::term_count() const {
  return static_cast<std::size_t>(
      std::count_if(coeffs_.begin(), coeffs_.end(), [](const BigInt& c) { return c != 0; }));
}

BigInt LaurentPoly::l1_norm() const {
  BigInt sum = 0;
  for (const auto& c : coeffs_) sum += abs(c);
  return sum;
}

bool LaurentPoly::has_nonnegative_coeffs() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const BigInt& c) { return c >= 0; });
}

LaurentPoly LaurentPoly::shifted(int k) const {
  LaurentPoly p = *this;
  if (!p.is_zero()) p.low_ += k;
  return p;
}

LaurentPoly LaurentPoly::inverted_variable() const {
  if (is_zero()) return {};
  LaurentPoly p;
  p.low_ = -high_degree();
  p.coeffs_.assign(coeffs_.rbegin(), coeffs_.rend());
  return p;
}

BigInt LaurentPoly::evaluate(const BigInt& t) const {
  if (is_zero()) return 0;
  if (low_ < 0 && t != 1 && t != -1) {
    throw std::domain_error("LaurentPoly::evaluate: negative powers need t = +-1");
  }
  // Horner from the top, then multiply by t^low.
  BigInt acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  int shift = low_;
  if (shift < 0) shift = -shift;  // t^-k == t^k for t = +-1
  for (int i = 0; i < shift; ++i) acc *= t;
  return acc;
}

void LaurentPoly::add_term(const BigInt& coeff, int degree) {
  if (coeff == 0) return;
  if (is_zero()) {
    low_ = degree;
    coeffs_.assign(1, coeff);
    return;
  }
  if (degree < low_) {
    coeffs_.insert(coeffs_.begin(), static_cast<std::size_t>(low_ - degree), BigInt(0));
    low_ = degree;
  } else if (degree > high_degree()) {
    coeffs_.resize(static_cast<std::size_t>(degree - low_ + 1), BigInt(0));
  }
  coeffs_[static_cast<std::size_t>(degree - low_)] += coeff;
  trim();
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly p = *this;
  for (auto& c : p.coeffs_) c = -c;
  return p;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& other) {
  if (other.is_zero()) return *this;
  if (is_zero()) return *this = other;
  const int lo = std::min(low_, other.low_);
  const int hi = std::max(high_degree(), other.high_degree());
  if (lo < low_) {
    coeffs_.insert(coeffs_.begin(), static_cast<std::size_t>(low_ - lo), BigInt(0));
    low_ = lo;
  }
  coeffs_.resize(static_cast<std::size_t>(hi - lo + 1), BigInt(0));
  const auto offset = static_cast<std::size_t>(other.low_ - low_);
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[offset + i] += other.coeffs_[i];
  trim();
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& other) { return *this += -other; }

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  LaurentPoly p;
  p.low_ = a.low_ + b.low_;
  p.coeffs_.assign(a.coeffs_.size() + b.coeffs_.size() - 1, BigInt(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      mpz_addmul(p.coeffs_[i + j].get_mpz_t(), a.coeffs_[i].get_mpz_t(), b.coeffs_[j].get_mpz_t());
    }
  }
  p.trim();
  return p;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& other) { return *this = *this * other; }

std::string LaurentPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int d = high_degree(); d >= low_; --d) {
    const BigInt& c = coeffs_[static_cast<std::size_t>(d - low_)];
    if (c == 0) continue;
    const bool negative = c < 0;
    if (first) {
      if (negative) os << '-';
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    const BigInt mag = abs(c);
    if (d == 0) {
      os << mag.get_str();
      continue;
    }
    if (mag != 1) os << mag.get_str();
    os << 't';
    if (d != 1) os << '^' << d;
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const LaurentPoly& p) { return os << p.to_string(); }

namespace {

[[noreturn]] void parse_fail(std::string_view text, const std::string& why) {
  throw Error(ErrorKind::MalformedInput,
              "cannot parse polynomial '" + std::string(text) + "': " + why);
}

}  // namespace

LaurentPoly LaurentPoly::parse(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  if (s.empty()) parse_fail(text, "empty");
  LaurentPoly result;
  std::size_t i = 0;
  bool first = true;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (!first) {
      parse_fail(text, "expected '+' or '-' between terms");
    }
    first = false;
    std::string digits;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits.push_back(s[i++]);
    BigInt coeff = digits.empty() ? BigInt(1) : BigInt(digits);
    int degree = 0;
    if (i < s.size() && s[i] == '*') {
      if (digits.empty()) parse_fail(text, "'*' without coefficient");
      ++i;
      if (i >= s.size() || s[i] != 't') parse_fail(text, "expected 't' after '*'");
    }
    if (i < s.size() && s[i] == 't') {
      ++i;
      degree = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        const bool paren = i < s.size() && s[i] == '(';
        if (paren) ++i;
        int esign = 1;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
          esign = s[i] == '-' ? -1 : 1;
          ++i;
        }
        std::string exp;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) exp.push_back(s[i++]);
        if (exp.empty()) parse_fail(text, "missing exponent");
        if (paren) {
          if (i >= s.size() || s[i] != ')') parse_fail(text, "unclosed '('");
          ++i;
        }
        degree = esign * std::stoi(exp);
      }
    } else if (digits.empty()) {
      parse_fail(text, "empty term");
    }
    result.add_term(sign * coeff, degree);
  }
  return result;
}

LaurentPoly normalize_unit(const LaurentPoly& p) {
  if (p.is_zero()) return p;
  LaurentPoly q = p.shifted(-p.low_degree());
  if (q.coeffs().front() < 0) q = -q;
  return q;
}

bool equal_up_to_unit(const LaurentPoly& a, const LaurentPoly& b) {
  return normalize_unit(a) == normalize_unit(b);
}

std::optional<LaurentPoly> exact_divide(const LaurentPoly& a, const LaurentPoly& b) {
  if (b.is_zero()) return std::nullopt;
  if (a.is_zero()) return LaurentPoly{};
  // Long division from the top degree; Laurent shifts cancel out.
  std::vector<BigInt> rem = a.coeffs();
  const std::vector<BigInt>& div = b.coeffs();
  if (rem.size() < div.size()) return std::nullopt;
  const std::size_t qlen = rem.size() - div.size() + 1;
  std::vector<BigInt> quot(qlen);
  const BigInt& lead = div.back();
  for (std::size_t k = qlen; k-- > 0;) {
    BigInt& top = rem[k + div.size() - 1];
    if (top == 0) continue;
    if (!mpz_divisible_p(top.get_mpz_t(), lead.get_mpz_t())) return std::nullopt;
    BigInt q;
    mpz_divexact(q.get_mpz_t(), top.get_mpz_t(), lead.get_mpz_t());
    for (std::size_t j = 0; j < div.size(); ++j) {
      mpz_submul(rem[k + j].get_mpz_t(), q.get_mpz_t(), div[j].get_mpz_t());
    }
    quot[k] = std::move(q);
  }
  for (const auto& r : rem) {
    if (r != 0) return std::nullopt;
  }
  return LaurentPoly::from_coeffs(a.low_degree() - b.low_degree(), std::move(quot));
}

bool has_alternating_coeffs(const LaurentPoly& p) {
  const auto& c = p.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) return false;
    if (i > 0 && sgn(c[i]) == sgn(c[i - 1])) return false;
  }
  return true;
}

}  // namespace knotdimer
