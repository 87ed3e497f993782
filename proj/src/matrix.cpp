#include "knotdimer/matrix.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <unordered_map>

#include "knotdimer/error.hpp"

namespace knotdimer {

LPMatrix zero_matrix(Eigen::Index rows, Eigen::Index cols) {
  LPMatrix m(rows, cols);
  m.fill(LaurentPoly());
  return m;
}

LPMatrix to_lp(const IntMatrix& m) {
  LPMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = LaurentPoly(static_cast<long>(m(i, j)));
  return out;
}

LPMatrix times_t(const IntMatrix& m) {
  LPMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out(i, j) = LaurentPoly::monomial(BigInt(static_cast<long>(m(i, j))), 1);
  return out;
}

bool equal(const LPMatrix& a, const LPMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

std::size_t nonzero_count(const LPMatrix& m) {
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) ++count;
  return count;
}

namespace {

void require_square(const LPMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::NotSquare, std::string(what) + " of a " + std::to_string(m.rows()) + "x" +
                                          std::to_string(m.cols()) + " matrix");
  }
}

std::vector<SparseRow> sparse_rows(const LPMatrix& m) {
  std::vector<SparseRow> rows(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) rows[static_cast<std::size_t>(i)].emplace_back(static_cast<int>(j), m(i, j));
  return rows;
}

// ---- sweep kernel --------------------------------------------------------

template <std::size_t W>
struct KeyHash {
  std::size_t operator()(const std::array<std::uint64_t, W>& k) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto w : k) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

template <std::size_t W>
int count_above(const std::array<std::uint64_t, W>& key, int c) {
  int count = 0;
  const std::size_t word = static_cast<std::size_t>(c) / 64;
  const int bit = c % 64;
  if (bit < 63) count += std::popcount(key[word] >> (bit + 1));
  for (std::size_t w = word + 1; w < W; ++w) count += std::popcount(key[w]);
  return count;
}

struct SweepPlan {
  std::vector<int> order;                    // row processed at each step
  std::vector<std::vector<int>> closes;      // columns whose last row is this step
  std::vector<std::vector<int>> closed_above;  // per step, per entry: closed columns > col
};

std::vector<std::vector<int>> distinct_columns(const std::vector<SparseRow>& rows) {
  std::vector<std::vector<int>> out;
  for (const auto& row : rows) {
    std::vector<int> cs;
    for (const auto& [c, v] : row) cs.push_back(c);
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    out.push_back(std::move(cs));
  }
  return out;
}

// Rough DP size: sum over steps of 2^(open columns).
double order_cost(const std::vector<std::vector<int>>& cols_of, int cols, const std::vector<int>& order) {
  std::vector<int> remaining(static_cast<std::size_t>(cols), 0);
  for (const auto& cs : cols_of)
    for (int c : cs) ++remaining[static_cast<std::size_t>(c)];
  std::vector<char> opened(static_cast<std::size_t>(cols), 0);
  int open = 0;
  double cost = 0.0;
  for (int r : order) {
    for (int c : cols_of[static_cast<std::size_t>(r)]) {
      if (!opened[static_cast<std::size_t>(c)]) {
        opened[static_cast<std::size_t>(c)] = 1;
        ++open;
      }
      if (--remaining[static_cast<std::size_t>(c)] == 0) --open;
    }
    cost += std::ldexp(1.0, std::min(open, 1000));
  }
  return cost;
}

// Repeatedly takes the row that opens the fewest new columns, with a bonus
// for each column it closes.
std::vector<int> greedy_order(const std::vector<std::vector<int>>& cols_of, int cols, long close_bonus) {
  const int n = static_cast<int>(cols_of.size());
  std::vector<int> remaining(static_cast<std::size_t>(cols), 0);
  for (const auto& cs : cols_of)
    for (int c : cs) ++remaining[static_cast<std::size_t>(c)];
  std::vector<char> opened(static_cast<std::size_t>(cols), 0), done(static_cast<std::size_t>(n), 0);
  std::vector<int> order;
  for (int step = 0; step < n; ++step) {
    int best = -1;
    long best_score = 0;
    for (int r = 0; r < n; ++r) {
      if (done[static_cast<std::size_t>(r)]) continue;
      long score = 0;
      for (int c : cols_of[static_cast<std::size_t>(r)]) {
        if (!opened[static_cast<std::size_t>(c)]) ++score;
        if (remaining[static_cast<std::size_t>(c)] == 1) score -= close_bonus;
      }
      if (best < 0 || score < best_score) {
        best = r;
        best_score = score;
      }
    }
    done[static_cast<std::size_t>(best)] = 1;
    order.push_back(best);
    for (int c : cols_of[static_cast<std::size_t>(best)]) {
      opened[static_cast<std::size_t>(c)] = 1;
      --remaining[static_cast<std::size_t>(c)];
    }
  }
  return order;
}

// Breadth-first over rows sharing a column.
std::vector<int> bfs_order(const std::vector<std::vector<int>>& cols_of, const std::vector<std::vector<int>>& rows_of, int start) {
  const int n = static_cast<int>(cols_of.size());
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> order;
  for (int s = start, k = 0; k < n; s = (s + 1) % n, ++k) {
    if (seen[static_cast<std::size_t>(s)]) continue;
    seen[static_cast<std::size_t>(s)] = 1;
    order.push_back(s);
    for (std::size_t i = order.size() - 1; i < order.size(); ++i) {
      for (int c : cols_of[static_cast<std::size_t>(order[i])]) {
        for (int r : rows_of[static_cast<std::size_t>(c)]) {
          if (seen[static_cast<std::size_t>(r)]) continue;
          seen[static_cast<std::size_t>(r)] = 1;
          order.push_back(r);
        }
      }
    }
  }
  return order;
}

SweepPlan plan_sweep(const std::vector<SparseRow>& rows, int cols) {
  const int n = static_cast<int>(rows.size());
  const auto cols_of = distinct_columns(rows);
  std::vector<std::vector<int>> rows_of(static_cast<std::size_t>(cols));
  for (int r = 0; r < n; ++r)
    for (int c : cols_of[static_cast<std::size_t>(r)]) rows_of[static_cast<std::size_t>(c)].push_back(r);

  std::vector<int> order = greedy_order(cols_of, cols, 2);
  double best_cost = order_cost(cols_of, cols, order);
  auto consider = [&](std::vector<int> candidate) {
    const double cost = order_cost(cols_of, cols, candidate);
    if (cost < best_cost) {
      best_cost = cost;
      order = std::move(candidate);
    }
  };
  consider(greedy_order(cols_of, cols, 1));
  const int starts = std::min(n, 32);
  for (int k = 0; k < starts; ++k) consider(bfs_order(cols_of, rows_of, k * n / starts));

  std::vector<int> remaining(static_cast<std::size_t>(cols), 0);
  for (const auto& cs : cols_of)
    for (int c : cs) ++remaining[static_cast<std::size_t>(c)];
  SweepPlan plan;
  plan.order = order;
  std::vector<char> closed(static_cast<std::size_t>(cols), 0);
  for (int r : order) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    std::vector<int> above;
    for (const auto& [c, v] : row) {
      int count = 0;
      for (int d = c + 1; d < cols; ++d) count += closed[static_cast<std::size_t>(d)];
      above.push_back(count);
    }
    plan.closed_above.push_back(std::move(above));
    std::vector<int> closing;
    for (int c : cols_of[static_cast<std::size_t>(r)]) {
      if (--remaining[static_cast<std::size_t>(c)] == 0) {
        closing.push_back(c);
        closed[static_cast<std::size_t>(c)] = 1;
      }
    }
    plan.closes.push_back(std::move(closing));
  }
  return plan;
}

int permutation_parity(const std::vector<int>& order) {
  int inv = 0;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j)
      if (order[i] > order[j]) ++inv;
  return inv % 2;
}

template <std::size_t W>
LaurentPoly sweep_impl(const std::vector<SparseRow>& rows, const SweepPlan& plan, bool signed_sum) {
  using Key = std::array<std::uint64_t, W>;
  std::unordered_map<Key, LaurentPoly, KeyHash<W>> states, next;
  states.emplace(Key{}, LaurentPoly(1));
  const std::size_t n = rows.size();
  for (std::size_t step = 0; step < n; ++step) {
    next.clear();
    const auto& row = rows[static_cast<std::size_t>(plan.order[step])];
    const auto& closing = plan.closes[step];
    for (const auto& [key, value] : states) {
      for (std::size_t e = 0; e < row.size(); ++e) {
        const int c = row[e].first;
        const std::size_t word = static_cast<std::size_t>(c) / 64;
        const std::uint64_t mask = std::uint64_t{1} << (c % 64);
        if (key[word] & mask) continue;
        Key nk = key;
        nk[word] |= mask;
        bool ok = true;
        for (int d : closing) {
          const std::size_t dw = static_cast<std::size_t>(d) / 64;
          const std::uint64_t dm = std::uint64_t{1} << (d % 64);
          if (!(nk[dw] & dm)) {
            ok = false;
            break;
          }
          nk[dw] &= ~dm;
        }
        if (!ok) continue;
        LaurentPoly term = value * row[e].second;
        if (signed_sum && (count_above<W>(key, c) + plan.closed_above[step][e]) % 2 == 1) term = -term;
        auto it = next.find(nk);
        if (it == next.end()) {
          next.emplace(nk, std::move(term));
        } else {
          it->second += term;
        }
      }
    }
    std::swap(states, next);
    if (states.empty()) return {};
  }
  LaurentPoly total;
  for (const auto& [key, value] : states) total += value;
  if (signed_sum && permutation_parity(plan.order) == 1) total = -total;
  return total;
}

// Same sweep on fixed-width int64 coefficient arrays. Entries are shifted
// so each row's lowest degree is 0; any overflow gives up.
template <std::size_t W>
std::optional<LaurentPoly> sweep_small(const std::vector<SparseRow>& rows, const SweepPlan& plan, bool signed_sum) {
  using Key = std::array<std::uint64_t, W>;
  struct Entry {
    int col;
    std::vector<std::int64_t> coeffs;
  };
  const std::size_t n = rows.size();
  std::vector<std::vector<Entry>> small(n);
  long shift = 0;
  std::size_t length = 1;
  for (std::size_t r = 0; r < n; ++r) {
    int low = rows[r].front().second.low_degree(), high = rows[r].front().second.high_degree();
    for (const auto& [c, v] : rows[r]) {
      low = std::min(low, v.low_degree());
      high = std::max(high, v.high_degree());
    }
    shift += low;
    length += static_cast<std::size_t>(high - low);
    for (const auto& [c, v] : rows[r]) {
      Entry e{c, std::vector<std::int64_t>(static_cast<std::size_t>(v.high_degree() - low + 1), 0)};
      for (int d = v.low_degree(); d <= v.high_degree(); ++d) {
        const BigInt& x = v.coeff(d);
        if (!x.fits_slong_p()) return std::nullopt;
        e.coeffs[static_cast<std::size_t>(d - low)] = x.get_si();
      }
      small[r].push_back(std::move(e));
    }
  }
  if (length > 4096) return std::nullopt;

  std::unordered_map<Key, std::uint32_t, KeyHash<W>> states, next;
  std::vector<std::int64_t> arena(length, 0), next_arena;
  arena[0] = 1;
  states.emplace(Key{}, 0);
  for (std::size_t step = 0; step < n; ++step) {
    next.clear();
    next_arena.clear();
    const auto& row = small[static_cast<std::size_t>(plan.order[step])];
    const auto& closing = plan.closes[step];
    for (const auto& [key, slot] : states) {
      const std::int64_t* src = arena.data() + static_cast<std::size_t>(slot) * length;
      std::size_t top = length;
      while (top > 0 && src[top - 1] == 0) --top;
      if (top == 0) continue;
      for (std::size_t e = 0; e < row.size(); ++e) {
        const int c = row[e].col;
        const std::size_t word = static_cast<std::size_t>(c) / 64;
        const std::uint64_t mask = std::uint64_t{1} << (c % 64);
        if (key[word] & mask) continue;
        Key nk = key;
        nk[word] |= mask;
        bool ok = true;
        for (int d : closing) {
          const std::size_t dw = static_cast<std::size_t>(d) / 64;
          const std::uint64_t dm = std::uint64_t{1} << (d % 64);
          if (!(nk[dw] & dm)) {
            ok = false;
            break;
          }
          nk[dw] &= ~dm;
        }
        if (!ok) continue;
        const bool negate = signed_sum && (count_above<W>(key, c) + plan.closed_above[step][e]) % 2 == 1;
        auto it = next.find(nk);
        if (it == next.end()) {
          it = next.emplace(nk, static_cast<std::uint32_t>(next_arena.size() / length)).first;
          next_arena.resize(next_arena.size() + length, 0);
          src = arena.data() + static_cast<std::size_t>(slot) * length;
        }
        std::int64_t* dst = next_arena.data() + static_cast<std::size_t>(it->second) * length;
        const auto& w = row[e].coeffs;
        for (std::size_t s = 0; s < w.size(); ++s) {
          if (w[s] == 0) continue;
          const std::int64_t ws = negate ? -w[s] : w[s];
          for (std::size_t d = 0; d < top; ++d) {
            if (src[d] == 0) continue;
            if (d + s >= length) return std::nullopt;
            std::int64_t prod;
            if (__builtin_mul_overflow(src[d], ws, &prod) || __builtin_add_overflow(dst[d + s], prod, &dst[d + s]))
              return std::nullopt;
          }
        }
      }
    }
    std::swap(states, next);
    std::swap(arena, next_arena);
    if (states.empty()) return LaurentPoly{};
  }
  std::vector<BigInt> total(length, 0);
  for (const auto& [key, slot] : states)
    for (std::size_t d = 0; d < length; ++d) total[d] += BigInt(static_cast<long>(arena[static_cast<std::size_t>(slot) * length + d]));
  LaurentPoly out = LaurentPoly::from_coeffs(static_cast<int>(shift), std::move(total));
  if (signed_sum && permutation_parity(plan.order) == 1) out = -out;
  return out;
}

template <std::size_t W>
LaurentPoly sweep_dispatch(const std::vector<SparseRow>& rows, const SweepPlan& plan, bool signed_sum) {
  if (auto fast = sweep_small<W>(rows, plan, signed_sum)) return *fast;
  return sweep_impl<W>(rows, plan, signed_sum);
}

}  // namespace

LaurentPoly sweep_sum(const std::vector<SparseRow>& rows, int cols, bool signed_sum) {
  const int n = static_cast<int>(rows.size());
  if (n != cols) return {};
  if (n == 0) return LaurentPoly(1);
  for (const auto& row : rows)
    if (row.empty()) return {};
  const SweepPlan plan = plan_sweep(rows, cols);
  for (int c = 0; c < cols; ++c) {
    bool present = false;
    for (const auto& closing : plan.closes)
      if (std::find(closing.begin(), closing.end(), c) != closing.end()) present = true;
    if (!present) return {};
  }
  if (cols <= 64) return sweep_dispatch<1>(rows, plan, signed_sum);
  if (cols <= 128) return sweep_dispatch<2>(rows, plan, signed_sum);
  if (cols <= 256) return sweep_dispatch<4>(rows, plan, signed_sum);
  if (cols <= 512) return sweep_dispatch<8>(rows, plan, signed_sum);
  if (cols <= 1024) return sweep_dispatch<16>(rows, plan, signed_sum);
  if (cols <= 4096) return sweep_dispatch<64>(rows, plan, signed_sum);
  throw std::length_error("sweep_sum: more than 4096 columns");
}

// ---- determinants --------------------------------------------------------

LaurentPoly det_cofactor(const LPMatrix& m) {
  require_square(m, "determinant");
  return sweep_sum(sparse_rows(m), static_cast<int>(m.cols()), true);
}

LaurentPoly det_leibniz(const LPMatrix& m) {
  require_square(m, "determinant");
  const auto n = static_cast<std::size_t>(m.rows());
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  LaurentPoly total;
  do {
    LaurentPoly term(1);
    for (std::size_t i = 0; i < n && !term.is_zero(); ++i) term *= m(static_cast<Eigen::Index>(i), p[i]);
    if (term.is_zero()) continue;
    total += permutation_parity(p) ? -term : term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

LaurentPoly det_bareiss(const LPMatrix& m) {
  require_square(m, "determinant");
  const Eigen::Index n = m.rows();
  if (n == 0) return LaurentPoly(1);
  LPMatrix a = m;
  bool negate = false;
  LaurentPoly prev(1);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (a(k, k).is_zero()) {
      Eigen::Index pivot = -1;
      for (Eigen::Index i = k + 1; i < n; ++i) {
        if (!a(i, k).is_zero()) {
          pivot = i;
          break;
        }
      }
      if (pivot < 0) return {};
      a.row(k).swap(a.row(pivot));
      negate = !negate;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j < n; ++j) {
        LaurentPoly num = a(k, k) * a(i, j) - a(i, k) * a(k, j);
        auto q = exact_divide(num, prev);
        if (!q) throw std::logic_error("det_bareiss: inexact division");
        a(i, j) = std::move(*q);
      }
      a(i, k) = LaurentPoly();
    }
    prev = a(k, k);
  }
  return negate ? -a(n - 1, n - 1) : a(n - 1, n - 1);
}

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

u64 reduce(const BigInt& c, u64 p) {
  BigInt r;
  mpz_fdiv_r_ui(r.get_mpz_t(), c.get_mpz_t(), p);
  return r.get_ui();
}

// Determinant of a dense matrix mod p, destroying it.
u64 det_dense_mod(std::vector<u64>& a, std::size_t n, u64 p) {
  u64 det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    while (pivot < n && a[pivot * n + k] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[pivot * n + j]);
      det = det == 0 ? 0 : p - det;
    }
    const u64 pv = a[k * n + k];
    det = mulmod(det, pv, p);
    const u64 inv = invmod(pv, p);
    for (std::size_t i = k + 1; i < n; ++i) {
      u64 f = a[i * n + k];
      if (f == 0) continue;
      f = mulmod(f, inv, p);
      const u64 nf = p - f;
      for (std::size_t j = k + 1; j < n; ++j) {
        const u64 akj = a[k * n + j];
        if (akj == 0) continue;
        a[i * n + j] = static_cast<u64>((static_cast<u128>(akj) * nf + a[i * n + j]) % p);
      }
      a[i * n + k] = 0;
    }
  }
  return det;
}

// Primes just below 2^62, found once.
const std::vector<u64>& big_primes(std::size_t count) {
  static std::vector<u64> primes;
  static u64 cursor = (u64{1} << 62) - 1;
  while (primes.size() < count) {
    BigInt c(std::to_string(cursor));
    if (mpz_probab_prime_p(c.get_mpz_t(), 30) > 0) primes.push_back(cursor);
    cursor -= 2;
  }
  return primes;
}

// Evaluation-ready entry: nonnegative-degree coefficients mod p.
struct ModEntry {
  std::size_t row, col;
  std::vector<std::pair<int, BigInt>> terms;  // (degree, coefficient)
};

}  // namespace

std::uint64_t det_mod_at(const LPMatrix& m, std::uint64_t p, std::uint64_t t0) {
  require_square(m, "determinant");
  const auto n = static_cast<std::size_t>(m.rows());
  const u64 tinv = invmod(t0 % p, p);
  std::vector<u64> a(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const LaurentPoly& e = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (e.is_zero()) continue;
      u64 acc = 0;
      for (std::size_t k = e.coeffs().size(); k-- > 0;) acc = (mulmod(acc, t0, p) + reduce(e.coeffs()[k], p)) % p;
      const int low = e.low_degree();
      acc = mulmod(acc, low >= 0 ? powmod(t0, static_cast<u64>(low), p) : powmod(tinv, static_cast<u64>(-low), p), p);
      a[i * n + j] = acc;
    }
  }
  return det_dense_mod(a, n, p);
}

LaurentPoly det_modular(const LPMatrix& m) {
  require_square(m, "determinant");
  const auto n = static_cast<std::size_t>(m.rows());
  if (n == 0) return LaurentPoly(1);
  // Clear negative and common powers row by row; det picks up t^shift.
  long shift = 0;
  std::vector<ModEntry> entries;
  std::vector<int> row_max(n, 0), col_max(n, -1);
  double log2_bound = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    int low = 0;
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) {
      const LaurentPoly& e = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (e.is_zero()) continue;
      low = any ? std::min(low, e.low_degree()) : e.low_degree();
      any = true;
    }
    if (!any) return {};
    shift += low;
    double sq = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const LaurentPoly& e = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (e.is_zero()) continue;
      ModEntry me{i, j, {}};
      for (std::size_t k = 0; k < e.coeffs().size(); ++k)
        if (e.coeffs()[k] != 0) me.terms.emplace_back(e.low_degree() - low + static_cast<int>(k), e.coeffs()[k]);
      const int hi = e.high_degree() - low;
      row_max[i] = std::max(row_max[i], hi);
      col_max[j] = std::max(col_max[j], hi);
      const double norm = e.l1_norm().get_d();
      sq += norm * norm;
      entries.push_back(std::move(me));
    }
    log2_bound += 0.5 * std::log2(sq);
  }
  long row_sum = 0, col_sum = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (col_max[k] < 0) return {};
    row_sum += row_max[k];
    col_sum += col_max[k];
  }
  const auto degree = static_cast<std::size_t>(std::min(row_sum, col_sum));
  const std::size_t points = degree + 1;
  const std::size_t prime_count = static_cast<std::size_t>(std::ceil((log2_bound + 2.0) / 61.0)) + 1;
  const auto& primes = big_primes(prime_count);

  std::vector<BigInt> coeffs(points, BigInt(0));
  BigInt modulus = 1;
  std::vector<u64> a(n * n);
  for (std::size_t pi = 0; pi < prime_count; ++pi) {
    const u64 p = primes[pi];
    std::vector<u64> xs(points), ys(points);
    for (std::size_t s = 0; s < points; ++s) {
      const u64 x = s + 1;
      xs[s] = x;
      std::fill(a.begin(), a.end(), 0);
      for (const auto& e : entries) {
        u64 acc = 0;
        for (const auto& [deg, c] : e.terms) acc = (acc + mulmod(reduce(c, p), powmod(x, static_cast<u64>(deg), p), p)) % p;
        a[e.row * n + e.col] = acc;
      }
      ys[s] = det_dense_mod(a, n, p);
    }
    // Newton divided differences, then expand to monomial coefficients.
    std::vector<u64> dd = ys;
    for (std::size_t level = 1; level < points; ++level) {
      for (std::size_t k = points - 1; k >= level; --k) {
        const u64 num = (dd[k] + p - dd[k - 1]) % p;
        const u64 den = (xs[k] + p - xs[k - level]) % p;
        dd[k] = mulmod(num, invmod(den, p), p);
        if (k == level) break;
      }
    }
    std::vector<u64> poly(points, 0);
    for (std::size_t k = points; k-- > 0;) {
      // poly = poly * (t - x_k) + dd[k]
      std::vector<u64> next(points, 0);
      for (std::size_t d = 0; d + 1 < points; ++d) {
        next[d + 1] = (next[d + 1] + poly[d]) % p;
      }
      for (std::size_t d = 0; d < points; ++d) next[d] = (next[d] + p - mulmod(poly[d], xs[k], p)) % p;
      next[0] = (next[0] + dd[k]) % p;
      poly = std::move(next);
    }
    // CRT merge into coeffs (mod modulus).
    const BigInt pz(std::to_string(p));
    BigInt inv;
    mpz_invert(inv.get_mpz_t(), BigInt(modulus % pz).get_mpz_t(), pz.get_mpz_t());
    for (std::size_t d = 0; d < points; ++d) {
      BigInt r(std::to_string(poly[d]));
      BigInt diff = r - coeffs[d];
      BigInt k = diff * inv;
      mpz_fdiv_r(k.get_mpz_t(), k.get_mpz_t(), pz.get_mpz_t());
      coeffs[d] += modulus * k;
    }
    modulus *= pz;
  }
  const BigInt half = modulus / 2;
  for (auto& c : coeffs)
    if (c > half) c -= modulus;
  return LaurentPoly::from_coeffs(0, std::move(coeffs)).shifted(static_cast<int>(shift));
}

LaurentPoly det(const LPMatrix& m) {
  require_square(m, "determinant");
  if (m.rows() <= 8) return det_cofactor(m);
  if (m.rows() <= 16) return det_bareiss(m);
  return det_modular(m);
}

// ---- permanents ----------------------------------------------------------

LaurentPoly perm_ryser(const LPMatrix& m) {
  require_square(m, "permanent");
  const auto n = static_cast<std::size_t>(m.rows());
  if (n == 0) return LaurentPoly(1);
  if (n > 30) throw std::length_error("perm_ryser: dimension above 30");
  std::vector<LaurentPoly> sums(n);
  LaurentPoly total;
  std::uint64_t gray = 0;
  for (std::uint64_t k = 1; k < (std::uint64_t{1} << n); ++k) {
    const int j = std::countr_zero(k);
    const std::uint64_t bit = std::uint64_t{1} << j;
    const bool adding = !(gray & bit);
    gray ^= bit;
    for (std::size_t i = 0; i < n; ++i) {
      const LaurentPoly& e = m(static_cast<Eigen::Index>(i), j);
      if (e.is_zero()) continue;
      if (adding) {
        sums[i] += e;
      } else {
        sums[i] -= e;
      }
    }
    LaurentPoly prod(1);
    for (std::size_t i = 0; i < n && !prod.is_zero(); ++i) prod *= sums[i];
    if (prod.is_zero()) continue;
    if ((n - static_cast<std::size_t>(std::popcount(gray))) % 2 == 1) {
      total -= prod;
    } else {
      total += prod;
    }
  }
  return total;
}

LaurentPoly permanent_sum(const std::vector<SparseRow>& input, int cols) {
  const int n = static_cast<int>(input.size());
  if (n != cols) return {};
  // Entries by row and by column, zeros dropped.
  std::vector<std::map<int, LaurentPoly>> by_row(static_cast<std::size_t>(n)), by_col(static_cast<std::size_t>(cols));
  for (int r = 0; r < n; ++r)
    for (const auto& [c, v] : input[static_cast<std::size_t>(r)]) by_row[static_cast<std::size_t>(r)][c] += v;
  for (int r = 0; r < n; ++r) {
    auto& row = by_row[static_cast<std::size_t>(r)];
    std::erase_if(row, [](const auto& kv) { return kv.second.is_zero(); });
    for (const auto& [c, v] : row) by_col[static_cast<std::size_t>(c)][r] = v;
  }
  std::vector<char> row_alive(static_cast<std::size_t>(n), 1), col_alive(static_cast<std::size_t>(cols), 1);

  // Removes line i of `lines` and its entries from the crossing lines.
  auto drop = [](std::vector<std::map<int, LaurentPoly>>& lines, std::vector<std::map<int, LaurentPoly>>& cross,
                 std::vector<char>& alive, int i) {
    for (const auto& [k, v] : lines[static_cast<std::size_t>(i)]) cross[static_cast<std::size_t>(k)].erase(i);
    lines[static_cast<std::size_t>(i)].clear();
    alive[static_cast<std::size_t>(i)] = 0;
  };
  // A line with one entry is forced. A line with two entries x, y (weights
  // wx, wy) merges its partners by linearity: wx * (line y) + wy * (line x).
  LaurentPoly factor(1);
  auto reduce = [&](std::vector<std::map<int, LaurentPoly>>& lines, std::vector<std::map<int, LaurentPoly>>& cross,
                    std::vector<char>& alive, std::vector<char>& cross_alive) {
    bool changed = false;
    for (int i = 0; i < static_cast<int>(lines.size()); ++i) {
      if (!alive[static_cast<std::size_t>(i)]) continue;
      const auto& line = lines[static_cast<std::size_t>(i)];
      if (line.size() == 1) {
        const auto [k, w] = *line.begin();
        factor *= w;
        drop(lines, cross, alive, i);
        drop(cross, lines, cross_alive, k);
        changed = true;
      } else if (line.size() == 2) {
        const auto [x, wx] = *line.begin();
        const auto [y, wy] = *std::next(line.begin());
        drop(lines, cross, alive, i);
        auto lx = cross[static_cast<std::size_t>(x)];
        auto ly = cross[static_cast<std::size_t>(y)];
        drop(cross, lines, cross_alive, x);
        drop(cross, lines, cross_alive, y);
        std::map<int, LaurentPoly> merged;
        for (const auto& [k, v] : ly) merged[k] += wx * v;
        for (const auto& [k, v] : lx) merged[k] += wy * v;
        std::erase_if(merged, [](const auto& kv) { return kv.second.is_zero(); });
        for (const auto& [k, v] : merged) lines[static_cast<std::size_t>(k)][x] = v;
        cross[static_cast<std::size_t>(x)] = std::move(merged);
        cross_alive[static_cast<std::size_t>(x)] = 1;
        changed = true;
      }
    }
    return changed;
  };
  for (;;) {
    for (int r = 0; r < n; ++r)
      if (row_alive[static_cast<std::size_t>(r)] && by_row[static_cast<std::size_t>(r)].empty()) return {};
    for (int c = 0; c < cols; ++c)
      if (col_alive[static_cast<std::size_t>(c)] && by_col[static_cast<std::size_t>(c)].empty()) return {};
    const bool a = reduce(by_row, by_col, row_alive, col_alive);
    const bool b = reduce(by_col, by_row, col_alive, row_alive);
    if (!a && !b) break;
  }
  std::vector<int> col_id(static_cast<std::size_t>(cols), -1);
  int kept = 0;
  for (int c = 0; c < cols; ++c)
    if (col_alive[static_cast<std::size_t>(c)]) col_id[static_cast<std::size_t>(c)] = kept++;
  std::vector<SparseRow> rows;
  for (int r = 0; r < n; ++r) {
    if (!row_alive[static_cast<std::size_t>(r)]) continue;
    SparseRow row;
    for (const auto& [c, v] : by_row[static_cast<std::size_t>(r)]) row.emplace_back(col_id[static_cast<std::size_t>(c)], v);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return factor;
  return factor * sweep_sum(rows, kept, false);
}

LaurentPoly perm_sparse(const LPMatrix& m) {
  require_square(m, "permanent");
  return permanent_sum(sparse_rows(m), static_cast<int>(m.cols()));
}

LaurentPoly perm(const LPMatrix& m) {
  require_square(m, "permanent");
  const auto n = static_cast<std::size_t>(m.rows());
  if (n <= 14 && 2 * nonzero_count(m) > n * n) return perm_ryser(m);
  return perm_sparse(m);
}

}  // namespace knotdimer
