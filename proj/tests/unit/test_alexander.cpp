#include <doctest.h>

#include "knotdimer/alexander.hpp"
#include "knotdimer/error.hpp"
#include "oracles.hpp"

using namespace knotdimer;

namespace {

// Mirror image: the over- and under-strands trade places.
KnotDiagram mirror(const KnotDiagram& d) {
  const int labels = d.edge_count();
  std::string pd;
  for (const auto& c : d.crossings()) {
    const auto [a, b, x, e] = c.slots;
    const bool e_into_b = e % labels + 1 == b;
    char buf[64];
    if (e_into_b)
      std::snprintf(buf, sizeof buf, "X(%d,%d,%d,%d) ", e, a, b, x);
    else
      std::snprintf(buf, sizeof buf, "X(%d,%d,%d,%d) ", b, x, e, a);
    pd += buf;
  }
  return parse_pd(pd);
}

LaurentPoly leibniz_alexander(const KnotDiagram& d) {
  const FoxMatrix m = sign_normalize(fox_matrix(d), d, checkerboard_coloring(d));
  return normalize_unit(oracle::leibniz(delete_face_column(m, d, default_deleted_face(d)), true));
}

std::string data_path(const char* file) { return std::string(KNOTDIMER_TEST_DATA) + "/" + file; }

}  // namespace

TEST_CASE("trefoil by every route") {
  const KnotDiagram d = builtin_knot("trefoil");
  const LaurentPoly expect = LaurentPoly::parse("t^2 - t + 1");
  CHECK(alexander_det(d) == expect);
  CHECK(alexander_dimer(d) == expect);
  std::size_t states = 0;
  CHECK(kauffman_state_sum(d, std::nullopt, &states) == expect);
  CHECK(states == 3);
  CHECK(alexander_state_count(d) == 3);
}

TEST_CASE("trefoil Fox matrix") {
  const KnotDiagram d = builtin_knot("trefoil");
  const FoxMatrix m = fox_matrix(d);
  CHECK(m.matrix.rows() == 3);
  CHECK(m.matrix.cols() == 4);
  // every row: t and -t on the left, -1 and +1 on the right (unbounded column dropped)
  const FoxMatrix n = sign_normalize(m, d, checkerboard_coloring(d));
  CHECK(n.normalized);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) CHECK(n.matrix(i, j).has_nonnegative_coeffs());
}

TEST_CASE("table agrees with the reference polynomials") {
  const auto ref = oracle::reference_table(data_path("alexander_reference.txt"));
  REQUIRE(ref.size() == 35);  // every prime knot through eight crossings
  for (const auto& [name, poly] : ref) {
    CAPTURE(name);
    CHECK(equal_up_to_unit(alexander_det(builtin_knot(name)), poly));
  }
}

TEST_CASE("determinant and dimer routes against brute force") {
  for (const auto& name : builtin_names()) {
    const KnotDiagram d = builtin_knot(name);
    if (d.is_unknot()) continue;
    CAPTURE(name);
    const LaurentPoly delta = alexander_det(d);
    CHECK(leibniz_alexander(d) == delta);
    // matchings enumerated by hand on the Kauffman-signed graph
    const AlexanderGraph ag = build_alexander_graph(d);
    const auto signs = kauffman_weighting(ag);
    CHECK(verify_kasteleyn(ag.graph, signs));
    std::size_t count = 0;
    CHECK(normalize_unit(oracle::matching_sum(apply_signs(ag.graph, signs), &count)) == delta);
    CHECK(count == alexander_state_count(d));
    std::size_t states = 0;
    CHECK(kauffman_state_sum(d, std::nullopt, &states) == delta);
    CHECK(states == count);
  }
}

TEST_CASE("deleted face independence") {
  for (const auto& name : builtin_names()) {
    const KnotDiagram d = builtin_knot(name);
    if (d.is_unknot()) continue;
    CAPTURE(name);
    const LaurentPoly delta = alexander_det(d);
    for (int f : faces_adjacent_to_unbounded(d)) {
      CAPTURE(f);
      CHECK(alexander_det(d, f) == delta);
      CHECK(alexander_dimer(d, f) == delta);
      CHECK(kauffman_state_sum(d, f) == delta);
    }
  }
}

TEST_CASE("bad deleted faces") {
  const KnotDiagram d = builtin_knot("4_1");
  CHECK_THROWS_AS(alexander_det(d, d.unbounded_face()), Error);
  try {
    alexander_det(d, d.unbounded_face());
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::FaceUnbounded);
  }
  const auto adjacent = faces_adjacent_to_unbounded(d);
  for (int f = 0; f < static_cast<int>(d.faces().size()); ++f) {
    if (f == d.unbounded_face() || std::find(adjacent.begin(), adjacent.end(), f) != adjacent.end()) continue;
    try {
      alexander_dimer(d, f);
      FAIL("face " << f << " accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::FaceNotAdjacent);
    }
  }
}

TEST_CASE("any face may be the unbounded one") {
  for (const char* name : {"3_1", "5_2", "6_3", "7_7", "8_17"}) {
    const KnotDiagram d = builtin_knot(name);
    const LaurentPoly delta = alexander_det(d);
    for (int f = 0; f < static_cast<int>(d.faces().size()); ++f) {
      const KnotDiagram e = d.with_unbounded_face(f);
      CHECK(alexander_det(e) == delta);
      CHECK(alexander_dimer(e) == delta);
    }
  }
}

TEST_CASE("symmetry, mirror and reversal") {
  for (const auto& name : builtin_names()) {
    const KnotDiagram d = builtin_knot(name);
    if (d.is_unknot()) continue;
    CAPTURE(name);
    const LaurentPoly delta = alexander_det(d);
    CHECK(equal_up_to_unit(delta.inverted_variable(), delta));
    CHECK(alexander_det(mirror(d)) == delta);
    CHECK(alexander_det(d.reversed()) == delta);
    CHECK(abs(delta.evaluate(1)) == 1);
  }
}

TEST_CASE("knot determinants") {
  CHECK(abs(alexander_det(builtin_knot("trefoil")).evaluate(-1)) == 3);
  CHECK(abs(alexander_det(builtin_knot("figure8")).evaluate(-1)) == 5);
  CHECK(abs(alexander_det(builtin_knot("5_1")).evaluate(-1)) == 5);
  CHECK(abs(alexander_det(builtin_knot("8_18")).evaluate(-1)) == 45);
}

TEST_CASE("alternating diagrams give alternating coefficients") {
  for (const auto& name : builtin_names()) {
    const KnotDiagram d = builtin_knot(name);
    if (!is_alternating(d)) continue;
    CAPTURE(name);
    CHECK(has_alternating_coeffs(alexander_det(d)));
  }
  // 8_19 is the (3,4) torus knot; its coefficients do not alternate
  CHECK_FALSE(has_alternating_coeffs(alexander_det(builtin_knot("8_19"))));
}

TEST_CASE("unknot diagrams") {
  CHECK(alexander_det(KnotDiagram::unknot()) == LaurentPoly(1));
  CHECK(alexander_dimer(KnotDiagram::unknot()) == LaurentPoly(1));
  CHECK(kauffman_state_sum(KnotDiagram::unknot()) == LaurentPoly(1));
  const KnotDiagram kink = parse_pd("X(1,2,2,1)");
  CHECK(alexander_det(kink) == LaurentPoly(1));
  CHECK(alexander_dimer(kink) == LaurentPoly(1));
  CHECK(kauffman_state_sum(kink) == LaurentPoly(1));
}

TEST_CASE("trefoil Alexander graph shape") {
  const AlexanderGraph ag = build_alexander_graph(builtin_knot("trefoil"));
  CHECK(ag.graph.n1 == 3);
  CHECK(ag.graph.n2 == 3);
  CHECK(ag.graph.edge_count() == 7);
  CHECK(enumerate_matchings(ag.graph).size() == 3);
}
