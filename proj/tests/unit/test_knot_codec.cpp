#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "knotdimer/error.hpp"
#include "knotdimer/knot_diagram.hpp"

using namespace knotdimer;

namespace {

ErrorKind kind_of(const std::string& pd) {
  try {
    parse_pd(pd);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error for " << pd);
  return ErrorKind::MalformedInput;
}

const char* kTrefoil = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";

}  // namespace

TEST_CASE("input errors carry the right kind") {
  CHECK(kind_of("") == ErrorKind::EmptyDiagram);
  CHECK(kind_of("X(1,4,2,5") == ErrorKind::MalformedInput);
  CHECK(kind_of("Y(1,2,3,4)") == ErrorKind::MalformedInput);
  CHECK(kind_of("X(1,4,2,5)") == ErrorKind::BadLabeling);
  CHECK(kind_of("X(0,4,2,5) X(3,6,4,1) X(5,2,6,3)") == ErrorKind::MalformedInput);
  CHECK(kind_of("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3) X(7,8,8,7)") == ErrorKind::BadLabeling);
  // a virtual knot: labels are fine but no planar surface carries it
  CHECK(kind_of("X(1,3,2,4) X(2,1,3,4)") == ErrorKind::NonPlanar);
}

TEST_CASE("trefoil combinatorics") {
  const KnotDiagram d = parse_pd(kTrefoil);
  CHECK(d.crossing_count() == 3);
  CHECK(d.faces().size() == 5);
  CHECK(d.arcs().size() == 3);
  CHECK(wirtinger_relations(d).size() == 3);
  CHECK(is_alternating(d));
  int unbounded = 0;
  for (const auto& f : d.faces()) unbounded += f.is_unbounded;
  CHECK(unbounded == 1);
  // all three crossings share a sign
  const int s = d.crossing(0).sign;
  CHECK(s != 0);
  for (const auto& c : d.crossings()) CHECK(c.sign == s);
}

TEST_CASE("builtin diagrams satisfy the Euler relation and checkerboard") {
  for (const auto& name : builtin_names()) {
    const KnotDiagram d = builtin_knot(name);
    CAPTURE(name);
    if (d.is_unknot()) {
      CHECK(d.faces().size() == 1);
      continue;
    }
    const int c = d.crossing_count();
    CHECK(static_cast<int>(d.faces().size()) == c + 2);
    std::size_t corners = 0;
    for (const auto& f : d.faces()) corners += f.boundary.size();
    CHECK(corners == static_cast<std::size_t>(4 * c));
    CHECK(static_cast<int>(d.arcs().size()) == c);
    // every corner belongs to the face that lists it
    for (std::size_t f = 0; f < d.faces().size(); ++f)
      for (const auto& k : d.faces()[f].boundary) CHECK(d.face_at(k.crossing, k.quadrant) == static_cast<int>(f));
    // neighbouring quadrants lie in differently coloured faces
    const auto colours = checkerboard_coloring(d);
    CHECK(colours[static_cast<std::size_t>(d.unbounded_face())] == FaceColor::White);
    for (int x = 0; x < c; ++x)
      for (int q = 0; q < 4; ++q)
        CHECK(colours[static_cast<std::size_t>(d.face_at(x, q))] != colours[static_cast<std::size_t>(d.face_at(x, (q + 1) % 4))]);
    // each edge label belongs to exactly one arc
    std::set<int> labels;
    for (const auto& a : d.arcs())
      for (int l : a.edges) CHECK(labels.insert(l).second);
    CHECK(static_cast<int>(labels.size()) == 2 * c);
    // round trip through the text form
    CHECK(parse_pd(d.to_pd()).to_pd() == d.to_pd());
    CHECK(d.reversed().reversed().to_pd() == d.to_pd());
  }
}

TEST_CASE("unbounded face defaults to the longest boundary") {
  const KnotDiagram d = builtin_knot("8_17");
  std::size_t longest = 0;
  for (const auto& f : d.faces()) longest = std::max(longest, f.boundary.size());
  CHECK(d.faces()[static_cast<std::size_t>(d.unbounded_face())].boundary.size() == longest);
  const KnotDiagram e = d.with_unbounded_face(0);
  CHECK(e.unbounded_face() == 0);
}

TEST_CASE("table names and aliases") {
  const auto names = builtin_names();
  CHECK(names.size() >= 36);
  CHECK(builtin_knot("trefoil").to_pd() == builtin_knot("3_1").to_pd());
  CHECK(builtin_knot("figure8").to_pd() == builtin_knot("4_1").to_pd());
  CHECK(builtin_knot("unknot").is_unknot());
  CHECK_THROWS_AS(builtin_knot("9_42"), Error);
}

TEST_CASE("non-alternating table diagrams") {
  for (const char* name : {"8_19", "8_20", "8_21"}) CHECK_FALSE(is_alternating(builtin_knot(name)));
  CHECK(is_alternating(builtin_knot("8_18")));
}

TEST_CASE("KNOTDIMER_TABLE overrides the table") {
  const auto path = std::filesystem::temp_directory_path() / "knotdimer_test_table.pd";
  {
    std::ofstream out(path);
    out << "# test table\nonly " << kTrefoil << "\n";
  }
  setenv("KNOTDIMER_TABLE", path.c_str(), 1);
  const auto names = builtin_names();
  const bool trefoil_ok = builtin_knot("only").crossing_count() == 3;
  unsetenv("KNOTDIMER_TABLE");
  std::filesystem::remove(path);
  CHECK(names == std::vector<std::string>{"only"});
  CHECK(trefoil_ok);
  CHECK(builtin_names().size() >= 36);
}

TEST_CASE("kinks parse") {
  const KnotDiagram d = parse_pd("X(1,2,2,1)");
  CHECK(d.crossing_count() == 1);
  CHECK(d.faces().size() == 3);
}
