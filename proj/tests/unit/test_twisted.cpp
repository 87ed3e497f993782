#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "knotdimer/alexander.hpp"
#include "knotdimer/drawn_graph.hpp"
#include "knotdimer/error.hpp"
#include "knotdimer/representation.hpp"
#include "knotdimer/twisted.hpp"
#include "oracles.hpp"

using namespace knotdimer;

namespace {

IntMatrix int_matrix(int n, std::initializer_list<long long> v) {
  IntMatrix m(n, n);
  auto it = v.begin();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = *it++;
  return m;
}

const LaurentPoly kTrefoilTwisted = LaurentPoly::parse("-t^6 + t^5 + t^4 - 2t^3 + t^2 + t - 1");

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error");
  return ErrorKind::MalformedInput;
}

mpz_class abs_det(const LPMatrix& m) { return abs(oracle::rational_det(m)); }

// Product of random elementary matrices: determinant +-1.
IntMatrix random_unimodular(std::mt19937& rng, int n) {
  IntMatrix m = IntMatrix::Identity(n, n);
  if (n == 1) return m;
  std::uniform_int_distribution<int> idx(0, n - 1), val(-2, 2);
  for (int k = 0; k < 3 * n; ++k) {
    const int i = idx(rng), j = idx(rng);
    if (i == j) continue;
    m.row(i) += val(rng) * m.row(j);
  }
  return m;
}

// The 3-coloring block matrix as printed for the trefoil, block by block.
LPMatrix printed_trefoil_matrix() {
  const char* rows[9] = {
      "0 -t 0 1 0 0 0 0 0 -1 0 0",   "-t 0 0 0 1 0 0 0 0 0 -1 0",   "0 0 -t 0 0 1 0 0 0 0 0 -1",
      "0 0 0 1 0 0 -1 0 0 -t 0 0",   "0 0 0 0 1 0 0 -1 0 0 0 -t",   "0 0 0 0 0 1 0 0 -1 0 -t 0",
      "-1 0 0 1 0 0 0 0 -t 0 0 0",   "0 -1 0 0 1 0 0 -t 0 0 0 0",   "0 0 -1 0 0 1 -t 0 0 0 0 0",
  };
  LPMatrix m = zero_matrix(9, 12);
  for (int i = 0; i < 9; ++i) {
    std::istringstream in(rows[i]);
    std::string tok;
    for (int j = 0; j < 12 && in >> tok; ++j) m(i, j) = LaurentPoly::parse(tok);
  }
  return m;
}

LPMatrix block(const LPMatrix& m, int i, int j) { return m.block(3 * i, 3 * j, 3, 3); }

bool equal_up_to_sign(const LPMatrix& a, const LPMatrix& b) {
  LPMatrix nb = b;
  for (Eigen::Index i = 0; i < nb.rows(); ++i)
    for (Eigen::Index j = 0; j < nb.cols(); ++j) nb(i, j) = -nb(i, j);
  return equal(a, b) || equal(a, nb);
}

}  // namespace

// ---------------------------------------------------------------- representations

TEST_CASE("reflections mod 3 are the three transpositions") {
  CHECK(reflection_matrix(3, 0) == int_matrix(3, {0, 1, 0, 1, 0, 0, 0, 0, 1}));
  CHECK(reflection_matrix(3, 1) == int_matrix(3, {1, 0, 0, 0, 0, 1, 0, 1, 0}));
  CHECK(reflection_matrix(3, 2) == int_matrix(3, {0, 0, 1, 0, 1, 0, 1, 0, 0}));
  for (int p : {3, 5, 7})
    for (int c = 0; c < p; ++c) {
      const IntMatrix r = reflection_matrix(p, c);
      CHECK(r * r == IntMatrix::Identity(p, p));
    }
}

TEST_CASE("coloring search") {
  CHECK(find_colorings(builtin_knot("trefoil"), 3).size() == 2);
  CHECK(find_colorings(builtin_knot("figure8"), 3).empty());
  CHECK(find_colorings(builtin_knot("figure8"), 5).size() == 4);
  for (const auto& name : builtin_names()) {
    const KnotDiagram d = builtin_knot(name);
    for (int p : {3, 5})
      for (const auto& c : find_colorings(d, p)) {
        CAPTURE(name);
        CHECK(verify_representation(d, builtin_coloring_rep(d, p, c)));
      }
  }
}

TEST_CASE("coloring errors") {
  const KnotDiagram d = builtin_knot("trefoil");
  CHECK(kind_of([&] { builtin_coloring_rep(d, 4, {0, 1, 2}); }) == ErrorKind::InvalidColoring);
  CHECK(kind_of([&] { builtin_coloring_rep(d, 3, {0, 0, 0}); }) == ErrorKind::InvalidColoring);
  CHECK(kind_of([&] { builtin_coloring_rep(d, 3, {0, 1}); }) == ErrorKind::InvalidColoring);
  CHECK(kind_of([&] { builtin_coloring_rep(d, 3, {0, 1, 1}); }) == ErrorKind::InvalidColoring);
}

TEST_CASE("unimodular inverse") {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 5;
    const IntMatrix m = random_unimodular(rng, n);
    CHECK(m * unimodular_inverse(m) == IntMatrix::Identity(n, n));
  }
  CHECK_THROWS_AS(unimodular_inverse(int_matrix(2, {2, 0, 0, 1})), Error);
}

TEST_CASE("representation file round trip and errors") {
  const KnotDiagram d = builtin_knot("trefoil");
  const Representation rho = builtin_coloring_rep(d, 3, {0, 1, 2});
  const std::string text = format_representation(rho);
  CHECK(text.rfind("dim 3\narc 0\n0 1 0\n", 0) == 0);
  const Representation back = parse_representation(text, 3);
  CHECK(back.dim == 3);
  for (int a = 0; a < 3; ++a) CHECK(back.images[static_cast<std::size_t>(a)] == rho.images[static_cast<std::size_t>(a)]);
  CHECK(parse_representation("# comment\ndim 1\narc 0\n1\narc 1\n-1\n", 2).images[1](0, 0) == -1);

  auto bad = [](const std::string& t, int arcs) {
    return kind_of([&] { parse_representation(t, arcs); }) == ErrorKind::InvalidRepresentation;
  };
  CHECK(bad("", 1));
  CHECK(bad("dimension 1\narc 0\n1\n", 1));
  CHECK(bad("dim 1\narc 0\n1\n", 2));                // missing arc
  CHECK(bad("dim 1\narc 0\n1\narc 0\n1\n", 1));      // duplicate
  CHECK(bad("dim 2\narc 0\n1 0\n0 2\n", 1));         // det 2
  CHECK(bad("dim 2\narc 0\n1 0 0\n0 1\n", 1));       // row width
  CHECK(bad("dim 2\narc 0\n1 x\n0 1\n", 1));         // not an integer
  CHECK(bad("dim 1\narc 5\n1\n", 1));                // id out of range
}

TEST_CASE("relations are enforced") {
  const KnotDiagram d = builtin_knot("trefoil");
  Representation rho = builtin_coloring_rep(d, 3, {0, 1, 2});
  std::swap(rho.images[0], rho.images[1]);
  rho.images[2] = reflection_matrix(3, 0);
  CHECK_FALSE(verify_representation(d, rho));
  CHECK(kind_of([&] { twisted_det(d, rho); }) == ErrorKind::InvalidRepresentation);
  CHECK(kind_of([&] { twisted_dimer(d, rho); }) == ErrorKind::InvalidRepresentation);
}

// ---------------------------------------------------------------- block matrix

TEST_CASE("printed trefoil matrix") {
  const LPMatrix printed = printed_trefoil_matrix();
  // its own determinant after dropping the last block column
  CHECK(equal_up_to_unit(oracle::leibniz(printed.leftCols(9), true), kTrefoilTwisted));

  // ours matches block by block up to signs, block row and column order and
  // which arc carries which colour, once the other triangle is unbounded
  const KnotDiagram base = builtin_knot("trefoil");
  int other = -1;
  for (int f = 0; f < static_cast<int>(base.faces().size()); ++f)
    if (f != base.unbounded_face() && base.faces()[static_cast<std::size_t>(f)].boundary.size() == 3) other = f;
  REQUIRE(other >= 0);
  const KnotDiagram d = base.with_unbounded_face(other);
  bool matched = false;
  std::vector<int> colours{0, 1, 2};
  do {
    const BlockMatrix ours = twisted_block_matrix(d, builtin_coloring_rep(d, 3, colours));
    REQUIRE(ours.matrix.rows() == 9);
    REQUIRE(ours.matrix.cols() == 12);
    std::vector<int> rp{0, 1, 2}, cp{0, 1, 2, 3};
    do {
      do {
        bool all = true;
        for (int i = 0; i < 3 && all; ++i)
          for (int j = 0; j < 4 && all; ++j) all = equal_up_to_sign(block(ours.matrix, rp[i], cp[j]), block(printed, i, j));
        matched = matched || all;
      } while (!matched && std::next_permutation(cp.begin(), cp.end()));
    } while (!matched && std::next_permutation(rp.begin(), rp.end()));
  } while (!matched && std::next_permutation(colours.begin(), colours.end()));
  CHECK(matched);
}

TEST_CASE("twisted trefoil value") {
  const KnotDiagram d = builtin_knot("trefoil");
  const Representation rho = builtin_coloring_rep(d, 3, {0, 1, 2});
  CHECK(equal_up_to_unit(twisted_det(d, rho), kTrefoilTwisted));
  TwistedReport rep;
  CHECK(equal_up_to_unit(twisted_dimer(d, rho, std::nullopt, &rep), kTrefoilTwisted));
  CHECK(rep.drawn_crossings == 0);
  CHECK(rep.planar.n1 == 9);
}

TEST_CASE("block matrix leaves exactly the right rows normalized") {
  const KnotDiagram d = builtin_knot("5_2");
  const Representation rho = builtin_coloring_rep(d, 7, find_colorings(d, 7).front());
  const BlockMatrix m = sign_normalize(twisted_block_matrix(d, rho), d, checkerboard_coloring(d));
  CHECK(m.normalized);
  for (Eigen::Index i = 0; i < m.matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < m.matrix.cols(); ++j) CHECK(m.matrix(i, j).has_nonnegative_coeffs());
  CHECK(delete_block_column(m, d, default_deleted_face(d)).cols() == m.matrix.rows());
}

TEST_CASE("trivial representation gives the Alexander polynomial") {
  for (const auto& name : builtin_names()) {
    const KnotDiagram d = builtin_knot(name);
    CAPTURE(name);
    const Representation triv = trivial_rep(d);
    CHECK(twisted_det(d, triv) == alexander_det(d));
    CHECK(twisted_dimer(d, triv) == alexander_dimer(d));
  }
}

TEST_CASE("trivial representation of size n gives the n-th power") {
  const KnotDiagram d = builtin_knot("figure8");
  Representation rho;
  rho.dim = 2;
  rho.images.assign(d.arcs().size(), IntMatrix::Identity(2, 2));
  const LaurentPoly a = alexander_det(d);
  CHECK(twisted_det(d, rho) == normalize_unit(a * a));
  CHECK(twisted_dimer(d, rho) == normalize_unit(a * a));
}

TEST_CASE("twisted determinant and dimer agree on colorings") {
  for (auto [name, p] : std::vector<std::pair<const char*, int>>{
           {"trefoil", 3}, {"figure8", 5}, {"5_1", 5}, {"5_2", 7}, {"6_1", 3}, {"7_4", 3}, {"8_10", 3}}) {
    const KnotDiagram d = builtin_knot(name);
    const Representation rho = builtin_coloring_rep(d, p, find_colorings(d, p).front());
    CAPTURE(name);
    TwistedReport rep;
    const LaurentPoly z = twisted_dimer(d, rho, std::nullopt, &rep);
    CHECK(z == twisted_det(d, rho));
    graph_faces(rep.planar);  // throws unless plane
    CHECK(equal_up_to_unit(det(weight_matrix(rep.planar)), z));
  }
}

TEST_CASE("gadget layout also agrees") {
  for (auto [name, p] : std::vector<std::pair<const char*, int>>{{"trefoil", 3}, {"figure8", 5}, {"5_1", 5}}) {
    const KnotDiagram d = builtin_knot(name);
    const Representation rho = builtin_coloring_rep(d, p, find_colorings(d, p).front());
    TwistedReport rep;
    CHECK(twisted_dimer(d, rho, std::nullopt, &rep, TwistedLayout::Gadgets) == twisted_det(d, rho));
  }
}

TEST_CASE("SL(2,Z) representation of the trefoil") {
  const KnotDiagram d = builtin_knot("trefoil");
  const IntMatrix a = int_matrix(2, {1, 1, 0, 1});
  const IntMatrix b = int_matrix(2, {1, 0, -1, 1});
  REQUIRE(a * b * a == b * a * b);
  const IntMatrix ai = unimodular_inverse(a), bi = unimodular_inverse(b);
  const std::vector<IntMatrix> pool{a, b, a * b * ai, b * a * bi, ai * b * a, bi * a * b};
  std::optional<Representation> found;
  for (std::size_t i = 0; i < pool.size() && !found; ++i)
    for (std::size_t j = 0; j < pool.size() && !found; ++j)
      for (std::size_t k = 0; k < pool.size() && !found; ++k) {
        Representation rho;
        rho.dim = 2;
        rho.images = {pool[i], pool[j], pool[k]};
        if (pool[i] == pool[j] && pool[j] == pool[k]) continue;
        if (verify_representation(d, rho)) found = rho;
      }
  REQUIRE(found.has_value());
  const LaurentPoly tdet = twisted_det(d, *found);
  CHECK_FALSE(tdet.is_zero());
  CHECK(twisted_dimer(d, *found) == tdet);
  const IntMatrix p = int_matrix(2, {2, 1, 1, 1});
  CHECK(twisted_det(d, conjugate(*found, p)) == tdet);
  CHECK(twisted_dimer(d, conjugate(*found, p)) == tdet);
}

TEST_CASE("conjugation and deleted face do not matter") {
  std::mt19937 rng(12);
  const KnotDiagram d = builtin_knot("figure8");
  const Representation rho = builtin_coloring_rep(d, 5, find_colorings(d, 5).front());
  const LaurentPoly tdet = twisted_det(d, rho);
  for (int trial = 0; trial < 3; ++trial) {
    const Representation c = conjugate(rho, random_unimodular(rng, 5));
    CHECK(verify_representation(d, c));
    CHECK(twisted_det(d, c) == tdet);
  }
  // dense conjugators make every gadget dense; a sparse one keeps the dimer run small
  IntMatrix shear = IntMatrix::Identity(5, 5);
  shear(0, 4) = 1;
  shear(2, 1) = -1;
  CHECK(twisted_dimer(d, conjugate(rho, shear)) == tdet);
  for (int f : faces_adjacent_to_unbounded(d)) {
    CHECK(twisted_det(d, rho, f) == tdet);
    CHECK(twisted_dimer(d, rho, f) == tdet);
  }
}

TEST_CASE("twisted graph encodes the normalized block matrix") {
  for (auto [name, p] : std::vector<std::pair<const char*, int>>{{"trefoil", 3}, {"figure8", 5}, {"6_1", 3}, {"8_5", 3}}) {
    const KnotDiagram d = builtin_knot(name);
    const Representation rho = builtin_coloring_rep(d, p, find_colorings(d, p).front());
    const BlockMatrix m = sign_normalize(twisted_block_matrix(d, rho), d, checkerboard_coloring(d));
    const LPMatrix expect = delete_block_column(m, d, default_deleted_face(d));
    for (auto layout : {TwistedLayout::Sheets, TwistedLayout::Gadgets}) {
      const DrawnGraph g = build_twisted_graph(d, rho, std::nullopt, layout);
      g.validate();
      CHECK(equal(weight_matrix(g), expect));
    }
  }
}

TEST_CASE("sheets need no crossings for the trefoil and figure-eight") {
  for (auto [name, p] : std::vector<std::pair<const char*, int>>{{"trefoil", 3}, {"figure8", 5}}) {
    const KnotDiagram d = builtin_knot(name);
    const Representation rho = builtin_coloring_rep(d, p, find_colorings(d, p).front());
    CHECK(build_twisted_graph(d, rho).live_crossing_count() == 0);
  }
}

TEST_CASE("matrix gadget") {
  LPMatrix m = zero_matrix(2, 2);
  m(0, 1) = LaurentPoly::t();
  m(1, 0) = LaurentPoly(3);
  const auto edges = encode_matrix_gadget(m);
  REQUIRE(edges.size() == 2);
  CHECK(edges[0].row == 0);
  CHECK(edges[0].col == 1);
  CHECK(edges[1].weight == LaurentPoly(3));
}

// ---------------------------------------------------------------- rewrites

TEST_CASE("straight-line gadget drawings") {
  std::mt19937 rng(21);
  for (int n = 1; n <= 6; ++n) {
    LPMatrix dense = zero_matrix(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dense(i, j) = LaurentPoly(1 + i + j);
    const DrawnGraph g = gadget_drawing(dense);
    g.validate();
    CHECK(g.live_crossing_count() == n * n * (n - 1) * (n - 1) / 4);
    CHECK(equal(weight_matrix(g), dense));
  }
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 5;
    const LPMatrix m = oracle::random_int_matrix(rng, n, n, -5, 5, 0.6);
    int expect = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            if (i < k && !m(i, j).is_zero() && !m(k, l).is_zero() && (i - k) * (j - l) < 0) ++expect;
    CHECK(gadget_drawing(m).live_crossing_count() == expect);
  }
}

TEST_CASE("tripling stencils keep |det|") {
  std::mt19937 rng(100);
  int done = 0;
  while (done < 100) {
    const int n = 2 + done % 5;
    const LPMatrix m = oracle::random_int_matrix(rng, n, n, -5, 5);
    DrawnGraph g = gadget_drawing(m);
    std::vector<int> live;
    for (std::size_t e = 0; e < g.edges.size(); ++e)
      if (g.edges[e].alive) live.push_back(static_cast<int>(e));
    if (live.empty()) continue;
    const int e = live[std::uniform_int_distribution<std::size_t>(0, live.size() - 1)(rng)];
    const std::size_t k = g.edges[static_cast<std::size_t>(e)].crossings.size();
    const std::size_t first = std::uniform_int_distribution<std::size_t>(0, k)(rng);
    const std::size_t middle = std::uniform_int_distribution<std::size_t>(0, k - first)(rng);
    const mpz_class before = abs_det(weight_matrix(g));
    const auto parts = triple_edge_in_place(g, e, first, middle);
    CHECK(parts.size() == 3);
    g.validate();
    CHECK(abs_det(weight_matrix(g)) == before);
    CHECK(before == abs_det(m));
    ++done;
  }
}

TEST_CASE("pure tripling leaves its input alone") {
  LPMatrix m = zero_matrix(2, 2);
  m(0, 0) = LaurentPoly(2);
  m(0, 1) = LaurentPoly(3);
  m(1, 0) = LaurentPoly(5);
  m(1, 1) = LaurentPoly(7);
  const DrawnGraph g = gadget_drawing(m);
  const DrawnGraph h = triple_edge(g, 1);
  CHECK(g.live_edge_count() == 4);
  CHECK(h.live_edge_count() == 6);
  CHECK(h.n1 == 3);
  CHECK(abs_det(weight_matrix(h)) == 1);
}

TEST_CASE("butterfly stencils keep |det|") {
  std::mt19937 rng(200);
  int done = 0;
  while (done < 100) {
    const int n = 2 + done % 5;
    const LPMatrix m = oracle::random_int_matrix(rng, n, n, -5, 5);
    DrawnGraph g = gadget_drawing(m);
    if (g.crossings.empty()) continue;
    const int x = std::uniform_int_distribution<int>(0, static_cast<int>(g.crossings.size()) - 1)(rng);
    // isolate crossing x on the middle segment of both of its edges
    for (int side = 0; side < 2; ++side) {
      const int e = side == 0 ? g.crossings[static_cast<std::size_t>(x)].e : g.crossings[static_cast<std::size_t>(x)].f;
      const auto& list = g.edges[static_cast<std::size_t>(e)].crossings;
      const std::size_t at = static_cast<std::size_t>(std::find(list.begin(), list.end(), x) - list.begin());
      triple_edge_in_place(g, e, at, 1);
    }
    const mpz_class before = abs_det(weight_matrix(g));
    const int crossings_before = g.live_crossing_count();
    insert_butterfly_in_place(g, x);
    g.validate();
    CHECK(g.live_crossing_count() == crossings_before - 1);
    CHECK(abs_det(weight_matrix(g)) == before);
    CHECK(before == abs_det(m));
    ++done;
  }
}

TEST_CASE("butterfly preconditions") {
  LPMatrix m = zero_matrix(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = LaurentPoly(1);
  const DrawnGraph g = gadget_drawing(m);
  // the (0,2) edge crosses several others
  int busy = -1;
  for (std::size_t c = 0; c < g.crossings.size(); ++c)
    if (g.edges[static_cast<std::size_t>(g.crossings[c].e)].crossings.size() > 1) busy = static_cast<int>(c);
  REQUIRE(busy >= 0);
  CHECK(kind_of([&] { insert_butterfly(g, busy); }) == ErrorKind::NotSingleCrossing);
  CHECK(kind_of([&] { to_plane_graph(g); }) == ErrorKind::NotSingleCrossing);
}

TEST_CASE("planarize random drawings") {
  std::mt19937 rng(300);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 4;
    const LPMatrix m = trial % 2 ? oracle::random_int_matrix(rng, n, n, -5, 5, 0.7) : oracle::random_poly_matrix(rng, n, 0.7);
    const DrawnGraph g = gadget_drawing(m);
    PlanarizeReport report;
    const PlaneBipartiteGraph p = planarize(g, &report);
    CHECK(report.butterflies == g.live_crossing_count());
    CHECK(report.checks == report.triplings + report.butterflies);
    graph_faces(p);  // throws unless plane
    const LaurentPoly dm = det(m);
    const LaurentPoly dp = det(weight_matrix(p));
    CHECK((dp == dm || dp == -dm));
    const LaurentPoly z = partition_function(apply_signs(p, kasteleyn_weighting_by_component(p)));
    CHECK((z == dm || z == -dm));
  }
}

TEST_CASE("plane graphs survive the drawn-graph round trip") {
  const PlaneBipartiteGraph g = oracle::grid_graph(3, 4);
  const PlaneBipartiteGraph h = to_plane_graph(from_plane_graph(g));
  CHECK(equal(weight_matrix(h), weight_matrix(g)));
  CHECK(graph_faces(h).size() == graph_faces(g).size());
}

TEST_CASE("DOT export of drawn graphs") {
  const KnotDiagram d = builtin_knot("trefoil");
  const DrawnGraph g = build_twisted_graph(d, builtin_coloring_rep(d, 3, {0, 1, 2}));
  const std::string dot = to_dot(g);
  int nodes = 0;
  std::istringstream in(dot);
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(' ');
    if (b == std::string::npos || line.find("--") != std::string::npos) continue;
    if ((line[b] == 'r' || line[b] == 'c') && std::isdigit(static_cast<unsigned char>(line[b + 1]))) ++nodes;
  }
  CHECK(nodes == 18);
}
