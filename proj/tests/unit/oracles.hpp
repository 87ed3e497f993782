#pragma once

// Slow, obviously-correct reference computations used by the unit tests.

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "knotdimer/laurent.hpp"
#include "knotdimer/matrix.hpp"
#include "knotdimer/plane_graph.hpp"

namespace oracle {

using knotdimer::LaurentPoly;
using knotdimer::LPMatrix;

inline int permutation_sign(const std::vector<int>& p) {
  int inversions = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) inversions += p[i] > p[j];
  return inversions % 2 ? -1 : 1;
}

// Sum over all permutations; n <= 8 or so.
inline LaurentPoly leibniz(const LPMatrix& m, bool signed_sum) {
  const int n = static_cast<int>(m.rows());
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  LaurentPoly total;
  do {
    LaurentPoly term(1);
    for (int i = 0; i < n && !term.is_zero(); ++i) term *= m(i, p[static_cast<std::size_t>(i)]);
    if (signed_sum && permutation_sign(p) < 0) term = -term;
    total += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

// Exact determinant of an integer-valued matrix by rational elimination.
inline mpz_class rational_det(const LPMatrix& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<std::vector<mpq_class>> a(static_cast<std::size_t>(n), std::vector<mpq_class>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const LaurentPoly& e = m(i, j);
      a[i][j] = e.is_zero() ? mpq_class(0) : mpq_class(e.coeff(0));
    }
  mpq_class d = 1;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (a[r][c] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (int r = c + 1; r < n; ++r) {
      if (a[r][c] == 0) continue;
      const mpq_class f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return d.get_num();
}

// Sum over perfect matchings by recursion on first-colour vertices.
inline LaurentPoly matching_sum(const knotdimer::PlaneBipartiteGraph& g, std::size_t* count = nullptr) {
  if (g.n1 != g.n2) return LaurentPoly();
  std::vector<std::vector<int>> inc(static_cast<std::size_t>(g.n1));
  for (std::size_t e = 0; e < g.edges.size(); ++e) inc[static_cast<std::size_t>(g.edges[e].u)].push_back(static_cast<int>(e));
  std::vector<char> used(static_cast<std::size_t>(g.n2), 0);
  LaurentPoly total;
  std::size_t n = 0;
  auto rec = [&](auto&& self, int u, const LaurentPoly& acc) -> void {
    if (u == g.n1) {
      total += acc;
      ++n;
      return;
    }
    for (int e : inc[static_cast<std::size_t>(u)]) {
      const auto& edge = g.edges[static_cast<std::size_t>(e)];
      if (used[static_cast<std::size_t>(edge.v)]) continue;
      used[static_cast<std::size_t>(edge.v)] = 1;
      self(self, u + 1, acc * edge.weight);
      used[static_cast<std::size_t>(edge.v)] = 0;
    }
  };
  rec(rec, 0, LaurentPoly(1));
  if (count) *count = n;
  return total;
}

inline LPMatrix random_int_matrix(std::mt19937& rng, int rows, int cols, int lo, int hi, double density = 1.0) {
  std::uniform_int_distribution<int> val(lo, hi);
  std::uniform_real_distribution<double> keep(0.0, 1.0);
  LPMatrix m = knotdimer::zero_matrix(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (keep(rng) < density) m(i, j) = LaurentPoly(static_cast<long>(val(rng)));
  return m;
}

// Random Laurent entries with small degrees.
inline LPMatrix random_poly_matrix(std::mt19937& rng, int n, double density) {
  std::uniform_int_distribution<int> coeff(-3, 3), deg(-2, 2), terms(1, 3);
  std::uniform_real_distribution<double> keep(0.0, 1.0);
  LPMatrix m = knotdimer::zero_matrix(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (keep(rng) >= density) continue;
      LaurentPoly p;
      for (int k = terms(rng); k > 0; --k) p.add_term(coeff(rng), deg(rng));
      m(i, j) = p;
    }
  return m;
}

// Reference Alexander polynomials: "<name> <polynomial>" per line.
inline std::map<std::string, LaurentPoly> reference_table(const std::string& path) {
  std::map<std::string, LaurentPoly> out;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string name, poly;
    ls >> name >> poly;
    out[name] = LaurentPoly::parse(poly);
  }
  return out;
}

// m x n grid; vertex (i, j) is first colour when i + j is even.
// Rotation at each vertex: east, north, west, south.
inline knotdimer::PlaneBipartiteGraph grid_graph(int rows, int cols) {
  std::vector<std::array<int, 2>> black, white;
  std::map<std::pair<int, int>, int> index;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      auto& list = (i + j) % 2 == 0 ? black : white;
      index[{i, j}] = static_cast<int>(list.size());
      list.push_back({i, j});
    }
  knotdimer::PlaneBipartiteGraph g(static_cast<int>(black.size()), static_cast<int>(white.size()));
  g.edges.clear();
  std::map<std::pair<std::pair<int, int>, std::pair<int, int>>, int> edge_of;
  for (auto [i, j] : black) {
    const int dirs[4][2] = {{0, 1}, {-1, 0}, {0, -1}, {1, 0}};
    for (auto& d : dirs) {
      const int a = i + d[0], b = j + d[1];
      if (a < 0 || b < 0 || a >= rows || b >= cols) continue;
      edge_of[{{i, j}, {a, b}}] = static_cast<int>(g.edges.size());
      g.edges.push_back({index[{i, j}], index[{a, b}], LaurentPoly(1)});
    }
  }
  g.rot1.assign(black.size(), {});
  g.rot2.assign(white.size(), {});
  const int dirs[4][2] = {{0, 1}, {-1, 0}, {0, -1}, {1, 0}};
  for (auto [i, j] : black)
    for (auto& d : dirs) {
      auto it = edge_of.find({{i, j}, {i + d[0], j + d[1]}});
      if (it != edge_of.end()) g.rot1[static_cast<std::size_t>(index[{i, j}])].push_back(it->second);
    }
  for (auto [i, j] : white)
    for (auto& d : dirs) {
      auto it = edge_of.find({{i + d[0], j + d[1]}, {i, j}});
      if (it != edge_of.end()) g.rot2[static_cast<std::size_t>(index[{i, j}])].push_back(it->second);
    }
  return g;
}

}  // namespace oracle
