#include "knotdimer/knot_diagram.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>

#include "knotdimer/error.hpp"

#ifndef KNOTDIMER_TABLE_DEFAULT
#define KNOTDIMER_TABLE_DEFAULT "data/knots.pd"
#endif

namespace knotdimer {

namespace {

struct Slot {
  int crossing;
  int slot;
};

// The two (crossing, slot) occurrences of every label, indexed by label.
std::vector<std::array<Slot, 2>> label_occurrences(const std::vector<Crossing>& cs) {
  const int labels = 2 * static_cast<int>(cs.size());
  std::vector<std::array<Slot, 2>> occ(static_cast<std::size_t>(labels + 1), {Slot{-1, -1}, Slot{-1, -1}});
  std::vector<int> count(static_cast<std::size_t>(labels + 1), 0);
  for (int x = 0; x < static_cast<int>(cs.size()); ++x) {
    for (int s = 0; s < 4; ++s) {
      const int label = cs[static_cast<std::size_t>(x)].slots[static_cast<std::size_t>(s)];
      if (label < 1 || label > labels) {
        throw Error(ErrorKind::BadLabeling, "label " + std::to_string(label) + " outside 1.." + std::to_string(labels));
      }
      int& k = count[static_cast<std::size_t>(label)];
      if (k == 2) throw Error(ErrorKind::BadLabeling, "label " + std::to_string(label) + " appears more than twice");
      occ[static_cast<std::size_t>(label)][static_cast<std::size_t>(k++)] = Slot{x, s};
    }
  }
  for (int label = 1; label <= labels; ++label) {
    if (count[static_cast<std::size_t>(label)] != 2) {
      throw Error(ErrorKind::BadLabeling, "label " + std::to_string(label) + " appears " +
                                              std::to_string(count[static_cast<std::size_t>(label)]) + " times");
    }
  }
  return occ;
}

Slot other_end(const std::vector<std::array<Slot, 2>>& occ, const std::vector<Crossing>& cs, int x, int s) {
  const int label = cs[static_cast<std::size_t>(x)].slots[static_cast<std::size_t>(s)];
  const auto& pair = occ[static_cast<std::size_t>(label)];
  return (pair[0].crossing == x && pair[0].slot == s) ? pair[1] : pair[0];
}

void orient(std::vector<Crossing>& cs) {
  const int labels = 2 * static_cast<int>(cs.size());
  auto next = [labels](int label) { return label % labels + 1; };
  std::vector<int> incoming(static_cast<std::size_t>(labels + 1), 0);
  std::vector<int> ambiguous;
  for (int x = 0; x < static_cast<int>(cs.size()); ++x) {
    auto& c = cs[static_cast<std::size_t>(x)];
    if (c.slots[2] != next(c.slots[0])) {
      throw Error(ErrorKind::BadLabeling, "crossing " + std::to_string(x) + ": under-strand labels " +
                                              std::to_string(c.slots[0]) + ", " + std::to_string(c.slots[2]) +
                                              " are not consecutive");
    }
    ++incoming[static_cast<std::size_t>(c.slots[0])];
    const bool three_to_one = c.slots[1] == next(c.slots[3]);
    const bool one_to_three = c.slots[3] == next(c.slots[1]);
    if (!three_to_one && !one_to_three) {
      throw Error(ErrorKind::BadLabeling, "crossing " + std::to_string(x) + ": over-strand labels " +
                                              std::to_string(c.slots[1]) + ", " + std::to_string(c.slots[3]) +
                                              " are not consecutive");
    }
    if (three_to_one && one_to_three) {
      ambiguous.push_back(x);
      continue;
    }
    c.over_in = three_to_one ? 3 : 1;
    ++incoming[static_cast<std::size_t>(c.slots[static_cast<std::size_t>(c.over_in)])];
  }
  // Two-label runs read the same either way; pick the direction whose
  // incoming label has not ended anywhere yet.
  for (int x : ambiguous) {
    auto& c = cs[static_cast<std::size_t>(x)];
    c.over_in = incoming[static_cast<std::size_t>(c.slots[3])] == 0 ? 3 : 1;
    ++incoming[static_cast<std::size_t>(c.slots[static_cast<std::size_t>(c.over_in)])];
  }
  for (int label = 1; label <= labels; ++label) {
    if (incoming[static_cast<std::size_t>(label)] != 1)
      throw Error(ErrorKind::BadLabeling, "edge " + std::to_string(label) + " does not end at exactly one crossing");
  }
  for (auto& c : cs) c.sign = c.over_in == 3 ? 1 : -1;
}

}  // namespace

KnotDiagram KnotDiagram::unknot() {
  KnotDiagram d;
  Face f;
  f.is_unbounded = true;
  d.faces_.push_back(f);
  d.unbounded_ = 0;
  return d;
}

KnotDiagram KnotDiagram::from_crossings(std::vector<Crossing> crossings) {
  if (crossings.empty()) throw Error(ErrorKind::EmptyDiagram, "no crossings");
  const auto occ = label_occurrences(crossings);
  orient(crossings);
  KnotDiagram d;
  d.crossings_ = std::move(crossings);
  const auto& cs = d.crossings_;
  const int n = static_cast<int>(cs.size());

  // Faces: arriving through slot t of a crossing gives the corner t there,
  // then leave through slot t+1.
  d.face_at_.assign(static_cast<std::size_t>(n), {-1, -1, -1, -1});
  for (int x = 0; x < n; ++x) {
    for (int q = 0; q < 4; ++q) {
      if (d.face_at_[static_cast<std::size_t>(x)][static_cast<std::size_t>(q)] >= 0) continue;
      Face face;
      const int id = static_cast<int>(d.faces_.size());
      int cx = x, cq = q;
      while (d.face_at_[static_cast<std::size_t>(cx)][static_cast<std::size_t>(cq)] < 0) {
        d.face_at_[static_cast<std::size_t>(cx)][static_cast<std::size_t>(cq)] = id;
        face.boundary.push_back({cx, cq});
        const Slot to = other_end(occ, cs, cx, (cq + 1) % 4);
        cx = to.crossing;
        cq = to.slot;
      }
      if (cx != x || cq != q) throw Error(ErrorKind::NonPlanar, "face walk did not close");
      d.faces_.push_back(std::move(face));
    }
  }
  if (static_cast<int>(d.faces_.size()) != n + 2) {
    throw Error(ErrorKind::NonPlanar, "C - E + F = " + std::to_string(n - 2 * n + static_cast<int>(d.faces_.size())) +
                                          ", expected 2");
  }
  int best = 0;
  for (int f = 1; f < static_cast<int>(d.faces_.size()); ++f)
    if (d.faces_[static_cast<std::size_t>(f)].boundary.size() > d.faces_[static_cast<std::size_t>(best)].boundary.size()) best = f;
  d.unbounded_ = best;
  d.faces_[static_cast<std::size_t>(best)].is_unbounded = true;

  // Arcs start at every outgoing under-edge.
  const int labels = 2 * n;
  std::vector<char> starts(static_cast<std::size_t>(labels + 1), 0);
  for (const auto& c : cs) starts[static_cast<std::size_t>(c.slots[2])] = 1;
  d.arc_of_edge_.assign(static_cast<std::size_t>(labels + 1), -1);
  for (int s = 1; s <= labels; ++s) {
    if (!starts[static_cast<std::size_t>(s)]) continue;
    Arc arc;
    int label = s;
    do {
      d.arc_of_edge_[static_cast<std::size_t>(label)] = static_cast<int>(d.arcs_.size());
      arc.edges.push_back(label);
      label = label % labels + 1;
    } while (!starts[static_cast<std::size_t>(label)]);
    d.arcs_.push_back(std::move(arc));
  }
  return d;
}

int KnotDiagram::face_at(int crossing, int quadrant) const {
  return face_at_[static_cast<std::size_t>(crossing)][static_cast<std::size_t>(((quadrant % 4) + 4) % 4)];
}

KnotDiagram KnotDiagram::with_unbounded_face(int face) const {
  if (face < 0 || face >= static_cast<int>(faces_.size()))
    throw Error(ErrorKind::MalformedInput, "face " + std::to_string(face) + " does not exist");
  KnotDiagram d = *this;
  d.faces_[static_cast<std::size_t>(d.unbounded_)].is_unbounded = false;
  d.unbounded_ = face;
  d.faces_[static_cast<std::size_t>(face)].is_unbounded = true;
  return d;
}

int KnotDiagram::arc_of_edge(int label) const { return arc_of_edge_.at(static_cast<std::size_t>(label)); }

KnotDiagram KnotDiagram::reversed() const {
  if (is_unknot()) return *this;
  const int labels = edge_count();
  auto relabel = [labels](int l) { return labels + 1 - l; };
  std::vector<Crossing> cs;
  for (const auto& c : crossings_) {
    Crossing r;
    r.slots = {relabel(c.slots[2]), relabel(c.slots[3]), relabel(c.slots[0]), relabel(c.slots[1])};
    cs.push_back(r);
  }
  return from_crossings(std::move(cs));
}

std::string KnotDiagram::to_pd() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < crossings_.size(); ++i) {
    const auto& s = crossings_[i].slots;
    if (i) os << ' ';
    os << "X(" << s[0] << ',' << s[1] << ',' << s[2] << ',' << s[3] << ')';
  }
  return os.str();
}

KnotDiagram parse_pd(std::string_view text) {
  std::vector<Crossing> cs;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto fail = [&](const std::string& why) {
    throw Error(ErrorKind::MalformedInput, why + " at offset " + std::to_string(i));
  };
  auto expect = [&](char ch) {
    skip();
    if (i >= text.size() || text[i] != ch) fail(std::string("expected '") + ch + "'");
    ++i;
  };
  while (true) {
    skip();
    if (i >= text.size()) break;
    if (text[i] != 'X') fail("expected 'X'");
    ++i;
    expect('(');
    Crossing c;
    for (int k = 0; k < 4; ++k) {
      if (k) expect(',');
      skip();
      std::size_t start = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (start == i) fail("expected a positive integer label");
      if (i - start > 6) fail("label too large");
      c.slots[static_cast<std::size_t>(k)] = std::stoi(std::string(text.substr(start, i - start)));
      if (c.slots[static_cast<std::size_t>(k)] == 0) fail("labels start at 1");
    }
    expect(')');
    cs.push_back(c);
  }
  if (cs.empty()) throw Error(ErrorKind::EmptyDiagram, "no crossings (use the builtin 'unknot')");
  return KnotDiagram::from_crossings(std::move(cs));
}

std::vector<Face> compute_faces(const KnotDiagram& d) { return d.faces(); }

std::vector<Arc> compute_arcs(const KnotDiagram& d) { return d.arcs(); }

std::vector<WirtingerRelation> wirtinger_relations(const KnotDiagram& d) {
  std::vector<WirtingerRelation> out;
  for (int x = 0; x < d.crossing_count(); ++x) {
    const auto& c = d.crossing(x);
    out.push_back({x, d.arc_of_edge(c.slots[1]), d.arc_of_edge(c.slots[0]), d.arc_of_edge(c.slots[2]), c.sign});
  }
  return out;
}

QuadrantRoles quadrant_roles(const KnotDiagram& d, int crossing) {
  if (d.crossing(crossing).sign > 0) return {1, 2, 0, 3};
  return {3, 0, 2, 1};
}

int out_out_quadrant(const KnotDiagram& d, int crossing) {
  // Outgoing under is slot 2; outgoing over is slot 1 (positive) or 3.
  return d.crossing(crossing).sign > 0 ? 1 : 2;
}

std::vector<FaceColor> checkerboard_coloring(const KnotDiagram& d) {
  const auto nf = d.faces().size();
  std::vector<FaceColor> color(nf, FaceColor::White);
  if (d.is_unknot()) return color;
  // Faces on the two sides of the edge at slot s are the corners s-1 and s.
  std::vector<std::vector<int>> adj(nf);
  for (int x = 0; x < d.crossing_count(); ++x) {
    for (int s = 0; s < 4; ++s) {
      const int a = d.face_at(x, s), b = d.face_at(x, s + 3);
      adj[static_cast<std::size_t>(a)].push_back(b);
      adj[static_cast<std::size_t>(b)].push_back(a);
    }
  }
  std::vector<char> seen(nf, 0);
  std::deque<int> queue{d.unbounded_face()};
  seen[static_cast<std::size_t>(d.unbounded_face())] = 1;
  while (!queue.empty()) {
    const int f = queue.front();
    queue.pop_front();
    for (int g : adj[static_cast<std::size_t>(f)]) {
      const FaceColor want = color[static_cast<std::size_t>(f)] == FaceColor::White ? FaceColor::Black : FaceColor::White;
      if (seen[static_cast<std::size_t>(g)]) {
        if (color[static_cast<std::size_t>(g)] != want) throw std::logic_error("face graph is not bipartite");
        continue;
      }
      seen[static_cast<std::size_t>(g)] = 1;
      color[static_cast<std::size_t>(g)] = want;
      queue.push_back(g);
    }
  }
  return color;
}

bool faces_share_edge(const KnotDiagram& d, int f, int g) {
  for (int x = 0; x < d.crossing_count(); ++x) {
    for (int s = 0; s < 4; ++s) {
      const int a = d.face_at(x, s), b = d.face_at(x, s + 3);
      if ((a == f && b == g) || (a == g && b == f)) return true;
    }
  }
  return false;
}

std::vector<int> faces_adjacent_to_unbounded(const KnotDiagram& d) {
  std::vector<int> out;
  for (int f = 0; f < static_cast<int>(d.faces().size()); ++f)
    if (f != d.unbounded_face() && faces_share_edge(d, f, d.unbounded_face())) out.push_back(f);
  return out;
}

bool is_alternating(const KnotDiagram& d) {
  const int labels = d.edge_count();
  if (labels == 0) return true;
  // ends_under[l]: edge l runs into its crossing as the under-strand
  std::vector<char> ends_under(static_cast<std::size_t>(labels + 1), 0);
  for (const auto& c : d.crossings()) ends_under[static_cast<std::size_t>(c.slots[0])] = 1;
  for (int l = 1; l <= labels; ++l)
    if (ends_under[static_cast<std::size_t>(l)] == ends_under[static_cast<std::size_t>(l % labels + 1)]) return false;
  return true;
}

std::string builtin_table_path() {
  if (const char* env = std::getenv("KNOTDIMER_TABLE"); env && *env) return env;
  return KNOTDIMER_TABLE_DEFAULT;
}

namespace {

std::vector<std::pair<std::string, std::string>> load_table() {
  const std::string path = builtin_table_path();
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::UnknownKnot, "cannot open knot table " + path);
  std::vector<std::pair<std::string, std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line.substr(first));
    std::string name;
    ls >> name;
    std::string rest;
    std::getline(ls, rest);
    const auto b = rest.find_first_not_of(" \t");
    const auto e = rest.find_last_not_of(" \t\r");
    rows.emplace_back(name, b == std::string::npos ? "" : rest.substr(b, e - b + 1));
  }
  return rows;
}

}  // namespace

std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& [name, pd] : load_table()) names.push_back(name);
  return names;
}

std::optional<std::string> builtin_pd(const std::string& name) {
  for (const auto& [n, pd] : load_table())
    if (n == name) return pd;
  return std::nullopt;
}

KnotDiagram builtin_knot(const std::string& name) {
  const auto pd = builtin_pd(name);
  if (!pd) throw Error(ErrorKind::UnknownKnot, "'" + name + "' is not in " + builtin_table_path());
  if (pd->empty()) return KnotDiagram::unknot();
  return parse_pd(*pd);
}

}  // namespace knotdimer
