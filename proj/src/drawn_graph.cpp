#include "knotdimer/drawn_graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>
#include <sstream>

#include "knotdimer/error.hpp"

namespace knotdimer {

namespace {

// Darts 2s and 2s+1 are the two directions of segment s. rot lists the
// darts leaving each node counterclockwise.
struct DartMap {
  std::vector<int> tail;
  std::vector<std::vector<int>> rot;
};

int find_root(std::vector<int>& parent, int v) {
  while (parent[static_cast<std::size_t>(v)] != v) {
    parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
    v = parent[static_cast<std::size_t>(v)];
  }
  return v;
}

void unite(std::vector<int>& parent, int a, int b) {
  a = find_root(parent, a);
  b = find_root(parent, b);
  if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
}

void euler_check(const DartMap& m) {
  const std::size_t darts = m.tail.size();
  const std::size_t nodes = m.rot.size();
  std::vector<int> pos(darts, -1);
  for (std::size_t v = 0; v < nodes; ++v) {
    for (std::size_t k = 0; k < m.rot[v].size(); ++k) {
      const int d = m.rot[v][k];
      if (d < 0 || static_cast<std::size_t>(d) >= darts || m.tail[static_cast<std::size_t>(d)] != static_cast<int>(v) ||
          pos[static_cast<std::size_t>(d)] >= 0)
        throw Error(ErrorKind::MalformedInput, "rotation at node " + std::to_string(v) + " is inconsistent");
      pos[static_cast<std::size_t>(d)] = static_cast<int>(k);
    }
  }
  for (std::size_t d = 0; d < darts; ++d)
    if (pos[d] < 0) throw Error(ErrorKind::MalformedInput, "dart " + std::to_string(d) + " missing from its rotation");

  std::vector<int> parent(nodes);
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t d = 0; d < darts; d += 2) unite(parent, m.tail[d], m.tail[d + 1]);
  std::vector<long> v_count(nodes, 0), e_count(nodes, 0), f_count(nodes, 0);
  for (std::size_t v = 0; v < nodes; ++v) ++v_count[static_cast<std::size_t>(find_root(parent, static_cast<int>(v)))];
  for (std::size_t d = 0; d < darts; d += 2) ++e_count[static_cast<std::size_t>(find_root(parent, m.tail[d]))];
  std::vector<char> seen(darts, 0);
  for (std::size_t start = 0; start < darts; ++start) {
    if (seen[start]) continue;
    std::size_t d = start;
    do {
      seen[d] = 1;
      const std::size_t twin = d ^ 1U;
      const auto& r = m.rot[static_cast<std::size_t>(m.tail[twin])];
      d = static_cast<std::size_t>(r[(static_cast<std::size_t>(pos[twin]) + 1) % r.size()]);
    } while (d != start);
    ++f_count[static_cast<std::size_t>(find_root(parent, m.tail[start]))];
  }
  for (std::size_t c = 0; c < nodes; ++c) {
    if (e_count[c] == 0) continue;
    if (v_count[c] - e_count[c] + f_count[c] != 2) {
      throw Error(ErrorKind::NotPlanarEmbedding, "component at node " + std::to_string(c) + ": V - E + F = " +
                                                     std::to_string(v_count[c] - e_count[c] + f_count[c]));
    }
  }
}

// Promotes crossing points to nodes: first colour at 0..n1-1, second at
// n1.., crossing k at n1+n2+k.
DartMap drawn_map(const DrawnGraph& g) {
  DartMap m;
  m.rot.resize(static_cast<std::size_t>(g.n1 + g.n2) + g.crossings.size());
  std::vector<int> base(g.edges.size(), -1);
  int segments = 0;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto& edge = g.edges[e];
    if (!edge.alive) continue;
    base[e] = segments;
    int prev = edge.r;
    for (int x : edge.crossings) {
      const int node = g.n1 + g.n2 + x;
      m.tail.push_back(prev);
      m.tail.push_back(node);
      prev = node;
    }
    m.tail.push_back(prev);
    m.tail.push_back(g.n1 + edge.c);
    segments += static_cast<int>(edge.crossings.size()) + 1;
  }
  for (int r = 0; r < g.n1; ++r)
    for (int e : g.rot1[static_cast<std::size_t>(r)]) m.rot[static_cast<std::size_t>(r)].push_back(2 * base[static_cast<std::size_t>(e)]);
  for (int c = 0; c < g.n2; ++c) {
    for (int e : g.rot2[static_cast<std::size_t>(c)]) {
      const int last = base[static_cast<std::size_t>(e)] + static_cast<int>(g.edges[static_cast<std::size_t>(e)].crossings.size());
      m.rot[static_cast<std::size_t>(g.n1 + c)].push_back(2 * last + 1);
    }
  }
  auto half = [&](int e, int x, bool toward_r) {
    const auto& list = g.edges[static_cast<std::size_t>(e)].crossings;
    const int i = static_cast<int>(std::find(list.begin(), list.end(), x) - list.begin());
    const int b = base[static_cast<std::size_t>(e)];
    return toward_r ? 2 * (b + i) + 1 : 2 * (b + i + 1);
  };
  for (std::size_t x = 0; x < g.crossings.size(); ++x) {
    const auto& cr = g.crossings[x];
    if (!cr.alive) continue;
    const int xi = static_cast<int>(x);
    m.rot[static_cast<std::size_t>(g.n1 + g.n2) + x] = {half(cr.e, xi, true), half(cr.f, xi, cr.r_sides_adjacent),
                                                         half(cr.e, xi, false), half(cr.f, xi, !cr.r_sides_adjacent)};
  }
  return m;
}

void replace_in(std::vector<int>& list, int old_id, const std::vector<int>& with) {
  const auto it = std::find(list.begin(), list.end(), old_id);
  if (it == list.end()) throw Error(ErrorKind::MalformedInput, "edge " + std::to_string(old_id) + " missing from a rotation");
  const auto at = list.erase(it);
  list.insert(at, with.begin(), with.end());
}

void retarget_crossing(DrawnGraph& g, int x, int old_edge, int new_edge, bool flip) {
  auto& cr = g.crossings[static_cast<std::size_t>(x)];
  if (cr.e == old_edge)
    cr.e = new_edge;
  else
    cr.f = new_edge;
  if (flip) cr.r_sides_adjacent = !cr.r_sides_adjacent;
}

constexpr std::uint64_t kFingerprintPrime = 4611686018427387847ULL;  // largest prime below 2^62

// |det| comparison at random points modulo a large prime. A sign flip is
// allowed but must be the same at every point.
class DetFingerprint {
 public:
  explicit DetFingerprint(const LPMatrix& m) {
    std::mt19937_64 rng(0x6b6e6f74ULL);
    for (int k = 0; k < 2; ++k) {
      const std::uint64_t t = 2 + rng() % (kFingerprintPrime - 3);
      points_.push_back(t);
      reference_.push_back(det_mod_at(m, kFingerprintPrime, t));
    }
  }

  void check(const LPMatrix& m, const std::string& what) const {
    bool same = true;
    bool negated = true;
    for (std::size_t k = 0; k < points_.size(); ++k) {
      const std::uint64_t v = det_mod_at(m, kFingerprintPrime, points_[k]);
      same = same && v == reference_[k];
      negated = negated && v == (kFingerprintPrime - reference_[k]) % kFingerprintPrime;
    }
    if (!same && !negated) throw Error(ErrorKind::RewriteCheckFailed, what + " changed |det| of the weight matrix");
  }

 private:
  std::vector<std::uint64_t> points_;
  std::vector<std::uint64_t> reference_;
};

}  // namespace

int DrawnGraph::add_vertex1() { return add_vertex1(Slot{-1, 0}); }
int DrawnGraph::add_vertex2() { return add_vertex2(Slot{-1, 0}); }

int DrawnGraph::add_vertex1(Slot s) {
  rot1.emplace_back();
  slot1.push_back(s);
  return n1++;
}

int DrawnGraph::add_vertex2(Slot s) {
  rot2.emplace_back();
  slot2.push_back(s);
  return n2++;
}

int DrawnGraph::add_edge(int r, int c, LaurentPoly weight) {
  if (r < 0 || r >= n1 || c < 0 || c >= n2) throw Error(ErrorKind::MalformedInput, "edge endpoint out of range");
  const int id = static_cast<int>(edges.size());
  edges.push_back({r, c, std::move(weight), {}, true});
  rot1[static_cast<std::size_t>(r)].push_back(id);
  rot2[static_cast<std::size_t>(c)].push_back(id);
  return id;
}

int DrawnGraph::live_edge_count() const {
  return static_cast<int>(std::count_if(edges.begin(), edges.end(), [](const Edge& e) { return e.alive; }));
}

int DrawnGraph::live_crossing_count() const {
  return static_cast<int>(std::count_if(crossings.begin(), crossings.end(), [](const Crossing& c) { return c.alive; }));
}

void DrawnGraph::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorKind::MalformedInput, why); };
  if (static_cast<int>(rot1.size()) != n1 || static_cast<int>(rot2.size()) != n2) fail("rotation table size mismatch");
  std::vector<int> deg1(static_cast<std::size_t>(n1), 0), deg2(static_cast<std::size_t>(n2), 0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& edge = edges[e];
    if (!edge.alive) continue;
    if (edge.r < 0 || edge.r >= n1 || edge.c < 0 || edge.c >= n2) fail("edge " + std::to_string(e) + " endpoint out of range");
    ++deg1[static_cast<std::size_t>(edge.r)];
    ++deg2[static_cast<std::size_t>(edge.c)];
    for (int x : edge.crossings) {
      if (x < 0 || static_cast<std::size_t>(x) >= crossings.size() || !crossings[static_cast<std::size_t>(x)].alive)
        fail("edge " + std::to_string(e) + " lists a dead crossing");
      const auto& cr = crossings[static_cast<std::size_t>(x)];
      if (cr.e != static_cast<int>(e) && cr.f != static_cast<int>(e)) fail("crossing " + std::to_string(x) + " does not name edge " + std::to_string(e));
    }
    std::vector<int> sorted = edge.crossings;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) fail("edge " + std::to_string(e) + " repeats a crossing");
  }
  for (std::size_t x = 0; x < crossings.size(); ++x) {
    const auto& cr = crossings[x];
    if (!cr.alive) continue;
    for (int e : {cr.e, cr.f}) {
      if (e < 0 || static_cast<std::size_t>(e) >= edges.size() || !edges[static_cast<std::size_t>(e)].alive)
        fail("crossing " + std::to_string(x) + " names a dead edge");
      const auto& list = edges[static_cast<std::size_t>(e)].crossings;
      if (std::count(list.begin(), list.end(), static_cast<int>(x)) != 1)
        fail("crossing " + std::to_string(x) + " missing from edge " + std::to_string(e));
    }
    if (cr.e == cr.f) fail("crossing " + std::to_string(x) + " joins an edge to itself");
  }
  auto check_rot = [&](const std::vector<std::vector<int>>& rot, const std::vector<int>& deg, bool first) {
    for (std::size_t v = 0; v < rot.size(); ++v) {
      if (static_cast<int>(rot[v].size()) != deg[v]) fail("rotation size mismatch at vertex " + std::to_string(v));
      for (int e : rot[v]) {
        if (e < 0 || static_cast<std::size_t>(e) >= edges.size() || !edges[static_cast<std::size_t>(e)].alive ||
            (first ? edges[static_cast<std::size_t>(e)].r : edges[static_cast<std::size_t>(e)].c) != static_cast<int>(v))
          fail("rotation at vertex " + std::to_string(v) + " names a foreign edge");
      }
      std::vector<int> sorted = rot[v];
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) fail("rotation repeats an edge");
    }
  };
  check_rot(rot1, deg1, true);
  check_rot(rot2, deg2, false);
  euler_check(drawn_map(*this));
}

LPMatrix weight_matrix(const DrawnGraph& g) {
  LPMatrix m = zero_matrix(g.n1, g.n2);
  for (const auto& e : g.edges)
    if (e.alive) m(e.r, e.c) += e.weight;
  return m;
}

DrawnGraph from_plane_graph(const PlaneBipartiteGraph& g) {
  DrawnGraph d;
  for (int i = 0; i < g.n1; ++i) d.add_vertex1();
  for (int j = 0; j < g.n2; ++j) d.add_vertex2();
  for (const auto& e : g.edges) d.edges.push_back({e.u, e.v, e.weight, {}, true});
  d.rot1 = g.rot1;
  d.rot2 = g.rot2;
  return d;
}

PlaneBipartiteGraph to_plane_graph(const DrawnGraph& g) {
  if (g.live_crossing_count() > 0)
    throw Error(ErrorKind::NotSingleCrossing, std::to_string(g.live_crossing_count()) + " crossings remain");
  PlaneBipartiteGraph out(g.n1, g.n2);
  std::vector<int> id(g.edges.size(), -1);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (!g.edges[e].alive) continue;
    id[e] = static_cast<int>(out.edges.size());
    out.edges.push_back({g.edges[e].r, g.edges[e].c, g.edges[e].weight});
  }
  for (int r = 0; r < g.n1; ++r) {
    auto& rot = out.rot1[static_cast<std::size_t>(r)];
    rot.clear();
    for (int e : g.rot1[static_cast<std::size_t>(r)]) rot.push_back(id[static_cast<std::size_t>(e)]);
  }
  for (int c = 0; c < g.n2; ++c) {
    auto& rot = out.rot2[static_cast<std::size_t>(c)];
    rot.clear();
    for (int e : g.rot2[static_cast<std::size_t>(c)]) rot.push_back(id[static_cast<std::size_t>(e)]);
  }
  return out;
}

std::vector<int> triple_edge_in_place(DrawnGraph& g, int e, std::size_t first, std::size_t middle) {
  if (e < 0 || static_cast<std::size_t>(e) >= g.edges.size() || !g.edges[static_cast<std::size_t>(e)].alive)
    throw Error(ErrorKind::MalformedInput, "no live edge " + std::to_string(e));
  const DrawnGraph::Edge old = g.edges[static_cast<std::size_t>(e)];
  const std::size_t k = old.crossings.size();
  first = std::min(first, k);
  middle = std::min(middle, k - first);
  const int c_new = g.add_vertex2();
  const int r_new = g.add_vertex1();
  g.edges[static_cast<std::size_t>(e)].alive = false;
  const int s1 = static_cast<int>(g.edges.size());
  const int s2 = s1 + 1;
  const int s3 = s1 + 2;
  g.edges.push_back({old.r, c_new, LaurentPoly(1), {}, true});
  g.edges.push_back({r_new, c_new, LaurentPoly(-1), {}, true});
  g.edges.push_back({r_new, old.c, old.weight, {}, true});
  // The middle segment runs against the original direction.
  for (std::size_t i = 0; i < k; ++i) {
    const int x = old.crossings[i];
    if (i < first) {
      g.edges[static_cast<std::size_t>(s1)].crossings.push_back(x);
      retarget_crossing(g, x, e, s1, false);
    } else if (i < first + middle) {
      g.edges[static_cast<std::size_t>(s2)].crossings.insert(g.edges[static_cast<std::size_t>(s2)].crossings.begin(), x);
      retarget_crossing(g, x, e, s2, true);
    } else {
      g.edges[static_cast<std::size_t>(s3)].crossings.push_back(x);
      retarget_crossing(g, x, e, s3, false);
    }
  }
  replace_in(g.rot1[static_cast<std::size_t>(old.r)], e, {s1});
  replace_in(g.rot2[static_cast<std::size_t>(old.c)], e, {s3});
  g.rot2[static_cast<std::size_t>(c_new)] = {s1, s2};
  g.rot1[static_cast<std::size_t>(r_new)] = {s2, s3};
  return {s1, s2, s3};
}

DrawnGraph triple_edge(const DrawnGraph& g, int e) {
  DrawnGraph out = g;
  if (e < 0 || static_cast<std::size_t>(e) >= g.edges.size()) throw Error(ErrorKind::MalformedInput, "no edge " + std::to_string(e));
  const std::size_t k = g.edges[static_cast<std::size_t>(e)].crossings.size();
  if (k <= 1)
    triple_edge_in_place(out, e, 0, k);
  else
    triple_edge_in_place(out, e, 1, 1);
  return out;
}

void insert_butterfly_in_place(DrawnGraph& g, int x) {
  if (x < 0 || static_cast<std::size_t>(x) >= g.crossings.size() || !g.crossings[static_cast<std::size_t>(x)].alive)
    throw Error(ErrorKind::NotSingleCrossing, "no live crossing " + std::to_string(x));
  const DrawnGraph::Crossing cr = g.crossings[static_cast<std::size_t>(x)];
  const DrawnGraph::Edge e = g.edges[static_cast<std::size_t>(cr.e)];
  const DrawnGraph::Edge f = g.edges[static_cast<std::size_t>(cr.f)];
  if (e.crossings != std::vector<int>{x} || f.crossings != std::vector<int>{x})
    throw Error(ErrorKind::NotSingleCrossing, "crossing " + std::to_string(x) + ": an edge carries other crossings");
  if (e.r == f.r || e.c == f.c)
    throw Error(ErrorKind::NotSingleCrossing, "crossing " + std::to_string(x) + ": edges share an endpoint");

  const int r1 = e.r, c2 = e.c, r2 = f.r, c1 = f.c;
  const LaurentPoly& a = e.weight;
  const LaurentPoly& b = f.weight;
  const int r0 = g.add_vertex1();
  const int c0 = g.add_vertex2();
  g.edges[static_cast<std::size_t>(cr.e)].alive = false;
  g.edges[static_cast<std::size_t>(cr.f)].alive = false;
  g.crossings[static_cast<std::size_t>(x)].alive = false;
  auto make = [&](int r, int c, LaurentPoly w) {
    if (w.is_zero()) return -1;
    g.edges.push_back({r, c, std::move(w), {}, true});
    return static_cast<int>(g.edges.size()) - 1;
  };
  const int r0c0 = make(r0, c0, LaurentPoly(-1));
  const int r0c1 = make(r0, c1, LaurentPoly(-1));
  const int r0c2 = make(r0, c2, a);
  const int r1c0 = make(r1, c0, LaurentPoly(1));
  const int r1c1 = make(r1, c1, LaurentPoly(1));
  const int r2c0 = make(r2, c0, -b);
  const int r2c2 = make(r2, c2, a * b);

  // Cyclic orders for the layout where, counterclockwise around the old
  // crossing, one meets e toward r1, f toward c1, e toward c2, f toward r2
  // (e runs west to east, f north to south):
  /*
               r2
             /    \
           c0      \
         /    \     \
      r1        r0 -- c2
         \     /
            c1
  */
  // The other handedness is the mirror image: every list reversed.
  const bool mirror = cr.r_sides_adjacent;
  auto seq = [mirror](std::vector<int> v) {
    if (mirror) std::reverse(v.begin(), v.end());
    v.erase(std::remove(v.begin(), v.end(), -1), v.end());
    return v;
  };
  replace_in(g.rot1[static_cast<std::size_t>(r1)], cr.e, seq({r1c1, r1c0}));
  replace_in(g.rot2[static_cast<std::size_t>(c1)], cr.f, seq({r0c1, r1c1}));
  replace_in(g.rot2[static_cast<std::size_t>(c2)], cr.e, seq({r2c2, r0c2}));
  replace_in(g.rot1[static_cast<std::size_t>(r2)], cr.f, seq({r2c0, r2c2}));
  g.rot2[static_cast<std::size_t>(c0)] = seq({r2c0, r1c0, r0c0});
  g.rot1[static_cast<std::size_t>(r0)] = seq({r0c0, r0c1, r0c2});
}

DrawnGraph insert_butterfly(const DrawnGraph& g, int x) {
  DrawnGraph out = g;
  insert_butterfly_in_place(out, x);
  return out;
}

PlaneBipartiteGraph planarize(const DrawnGraph& g, PlanarizeReport* report) {
  DrawnGraph h = g;
  h.validate();
  PlanarizeReport rep;
  const bool square = h.n1 == h.n2;
  const LPMatrix original = weight_matrix(h);
  std::optional<DetFingerprint> fingerprint;
  if (square) fingerprint.emplace(original);
  auto after = [&](const std::string& what) {
    h.validate();
    if (fingerprint) {
      fingerprint->check(weight_matrix(h), what);
      ++rep.checks;
    }
  };

  // Split edges until each carries at most one crossing. Appended segments
  // are revisited by the same loop.
  for (std::size_t e = 0; e < h.edges.size(); ++e) {
    if (!h.edges[e].alive || h.edges[e].crossings.size() < 2) continue;
    triple_edge_in_place(h, static_cast<int>(e), 1, 1);
    ++rep.triplings;
    after("tripling edge " + std::to_string(e));
  }
  // A butterfly needs four distinct endpoints; moving the crossing onto the
  // middle segment of a tripled edge gives fresh ones.
  for (std::size_t x = 0; x < h.crossings.size(); ++x) {
    const auto& cr = h.crossings[x];
    if (!cr.alive) continue;
    const auto& e = h.edges[static_cast<std::size_t>(cr.e)];
    const auto& f = h.edges[static_cast<std::size_t>(cr.f)];
    if (e.r != f.r && e.c != f.c) continue;
    const int target = cr.e;
    triple_edge_in_place(h, target, 0, 1);
    ++rep.triplings;
    after("tripling edge " + std::to_string(target));
  }
  for (std::size_t x = 0; x < h.crossings.size(); ++x) {
    if (!h.crossings[x].alive) continue;
    insert_butterfly_in_place(h, static_cast<int>(x));
    ++rep.butterflies;
    after("butterfly at crossing " + std::to_string(x));
  }
  if (square && (rep.triplings > 0 || rep.butterflies > 0)) {
    const LaurentPoly before = det(original);
    const LaurentPoly now = det(weight_matrix(h));
    if (!(now == before || now == -before))
      throw Error(ErrorKind::RewriteCheckFailed, "determinant " + now.to_string() + " differs from " + before.to_string());
  }
  if (report) *report = rep;
  return to_plane_graph(h);
}

DrawnGraph gadget_drawing(const LPMatrix& m) {
  DrawnGraph g;
  const int n1 = static_cast<int>(m.rows());
  const int n2 = static_cast<int>(m.cols());
  for (int i = 0; i < n1; ++i) g.add_vertex1({0, i});
  for (int j = 0; j < n2; ++j) g.add_vertex2({0, j});
  // Slight jitter keeps three segments from meeting in one point.
  std::mt19937_64 rng(0x676164ULL);
  std::uniform_real_distribution<double> jitter(-0.05, 0.05);
  std::vector<double> bottom(static_cast<std::size_t>(n1)), top(static_cast<std::size_t>(n2));
  for (int i = 0; i < n1; ++i) bottom[static_cast<std::size_t>(i)] = i + jitter(rng);
  for (int j = 0; j < n2; ++j) top[static_cast<std::size_t>(j)] = j + jitter(rng);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      if (!m(i, j).is_zero()) g.edges.push_back({i, j, m(i, j), {}, true});

  struct Pt {
    double x, y;
  };
  auto from = [&](const DrawnGraph::Edge& e) { return Pt{bottom[static_cast<std::size_t>(e.r)], 0.0}; };
  auto to = [&](const DrawnGraph::Edge& e) { return Pt{top[static_cast<std::size_t>(e.c)], 1.0}; };
  std::vector<std::vector<std::pair<double, int>>> along(g.edges.size());
  for (std::size_t a = 0; a < g.edges.size(); ++a) {
    for (std::size_t b = a + 1; b < g.edges.size(); ++b) {
      const auto& ea = g.edges[a];
      const auto& eb = g.edges[b];
      if (ea.r == eb.r || ea.c == eb.c) continue;
      if ((ea.r - eb.r) * (ea.c - eb.c) >= 0) continue;
      const Pt p = from(ea), q = to(ea), u = from(eb), v = to(eb);
      // Segments p + s(q - p) and u + w(v - u); both span y in [0, 1].
      const double dx = q.x - p.x - (v.x - u.x);
      const double s = (u.x - p.x) / dx;
      const int x = static_cast<int>(g.crossings.size());
      const Pt down_a{p.x - q.x, -1.0}, down_b{u.x - v.x, -1.0};
      const bool adjacent = down_a.x * down_b.y - down_a.y * down_b.x > 0;
      g.crossings.push_back({static_cast<int>(a), static_cast<int>(b), adjacent, true});
      along[a].emplace_back(s, x);
      along[b].emplace_back(s, x);
    }
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    std::sort(along[e].begin(), along[e].end());
    for (const auto& [s, x] : along[e]) g.edges[e].crossings.push_back(x);
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    g.rot1[static_cast<std::size_t>(g.edges[e].r)].push_back(static_cast<int>(e));
    g.rot2[static_cast<std::size_t>(g.edges[e].c)].push_back(static_cast<int>(e));
  }
  // Upward edges at the bottom row: counterclockwise is right to left.
  for (auto& rot : g.rot1)
    std::sort(rot.begin(), rot.end(), [&](int a, int b) { return g.edges[static_cast<std::size_t>(a)].c > g.edges[static_cast<std::size_t>(b)].c; });
  for (auto& rot : g.rot2)
    std::sort(rot.begin(), rot.end(), [&](int a, int b) { return g.edges[static_cast<std::size_t>(a)].r < g.edges[static_cast<std::size_t>(b)].r; });
  return g;
}

namespace {

// Growing plane map for route_edges. Nodes: first colour, second colour,
// then crossing points. Segment darts 2s / 2s+1.
class Router {
 public:
  Router(int n1, int n2) : n1_(n1), rot_(static_cast<std::size_t>(n1 + n2)), parent_(static_cast<std::size_t>(n1 + n2)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  void insert(int edge, int r, int c, const std::vector<int>& target_r, const std::vector<int>& target_c) {
    if (static_cast<std::size_t>(edge) >= chain_.size()) chain_.resize(static_cast<std::size_t>(edge) + 1);
    const int u = r;
    const int w = n1_ + c;
    int anchor_u = preferred_anchor(u, edge, target_r);
    int anchor_w = preferred_anchor(w, edge, target_c);
    if (anchor_u < 0 || anchor_w < 0 || find_root(parent_, u) != find_root(parent_, w)) {
      connect(edge, u, anchor_u, w, anchor_w, {});
      return;
    }
    trace();
    if (corner_face(u, anchor_u) == corner_face(w, anchor_w)) {
      connect(edge, u, anchor_u, w, anchor_w, {});
      return;
    }
    // Breadth-first search in the dual, from every face at u.
    std::vector<int> dist(static_cast<std::size_t>(faces_), -1), via(static_cast<std::size_t>(faces_), -1);
    std::deque<int> queue;
    auto seed = [&](int f) {
      if (dist[static_cast<std::size_t>(f)] >= 0) return;
      dist[static_cast<std::size_t>(f)] = 0;
      queue.push_back(f);
    };
    seed(corner_face(u, anchor_u));
    for (int a : rot_[static_cast<std::size_t>(u)]) seed(corner_face(u, a));
    std::vector<std::vector<int>> boundary(static_cast<std::size_t>(faces_));
    for (std::size_t d = 0; d < tail_.size(); ++d) boundary[static_cast<std::size_t>(face_[d])].push_back(static_cast<int>(d));
    while (!queue.empty()) {
      const int f = queue.front();
      queue.pop_front();
      for (int d : boundary[static_cast<std::size_t>(f)]) {
        const int g = face_[static_cast<std::size_t>(d ^ 1)];
        if (dist[static_cast<std::size_t>(g)] >= 0) continue;
        dist[static_cast<std::size_t>(g)] = dist[static_cast<std::size_t>(f)] + 1;
        via[static_cast<std::size_t>(g)] = d;
        queue.push_back(g);
      }
    }
    int best = corner_face(w, anchor_w);
    for (int a : rot_[static_cast<std::size_t>(w)]) {
      const int f = corner_face(w, a);
      if (dist[static_cast<std::size_t>(f)] < dist[static_cast<std::size_t>(best)]) best = f;
    }
    std::vector<int> crossed;
    for (int f = best; dist[static_cast<std::size_t>(f)] > 0; f = face_[static_cast<std::size_t>(via[static_cast<std::size_t>(f)])])
      crossed.push_back(via[static_cast<std::size_t>(f)]);
    std::reverse(crossed.begin(), crossed.end());
    const int start = crossed.empty() ? best : face_[static_cast<std::size_t>(crossed.front())];
    anchor_u = anchor_in_face(u, anchor_u, start);
    anchor_w = anchor_in_face(w, anchor_w, best);
    connect(edge, u, anchor_u, w, anchor_w, crossed);
  }

  DrawnGraph result(int n1, int n2, const std::vector<RoutedEdge>& edges) const {
    DrawnGraph g;
    for (int i = 0; i < n1; ++i) g.add_vertex1();
    for (int j = 0; j < n2; ++j) g.add_vertex2();
    const int first_crossing = n1 + n2;
    g.crossings.resize(rot_.size() - static_cast<std::size_t>(first_crossing));
    for (std::size_t e = 0; e < edges.size(); ++e) {
      DrawnGraph::Edge out{edges[e].r, edges[e].c, edges[e].weight, {}, true};
      const auto& ch = chain_[e];
      for (std::size_t i = 0; i + 1 < ch.size(); ++i) out.crossings.push_back(tail_[static_cast<std::size_t>(ch[i] ^ 1)] - first_crossing);
      g.edges.push_back(std::move(out));
    }
    for (std::size_t node = static_cast<std::size_t>(first_crossing); node < rot_.size(); ++node) {
      const auto& rot = rot_[node];
      std::size_t j = 0;
      while (toward_c_[static_cast<std::size_t>(rot[j])]) ++j;
      auto& cr = g.crossings[node - static_cast<std::size_t>(first_crossing)];
      cr.e = owner_[static_cast<std::size_t>(rot[j])];
      cr.f = owner_[static_cast<std::size_t>(rot[(j + 1) % 4])];
      cr.r_sides_adjacent = !toward_c_[static_cast<std::size_t>(rot[(j + 1) % 4])];
    }
    for (int r = 0; r < n1; ++r)
      for (int d : rot_[static_cast<std::size_t>(r)]) g.rot1[static_cast<std::size_t>(r)].push_back(owner_[static_cast<std::size_t>(d)]);
    for (int c = 0; c < n2; ++c)
      for (int d : rot_[static_cast<std::size_t>(n1 + c)]) g.rot2[static_cast<std::size_t>(c)].push_back(owner_[static_cast<std::size_t>(d)]);
    return g;
  }

 private:
  // Dart after which the new edge goes, following the target order; -1 at
  // a vertex with no edges yet.
  int preferred_anchor(int v, int edge, const std::vector<int>& target) const {
    const auto& rot = rot_[static_cast<std::size_t>(v)];
    if (rot.empty()) return -1;
    const auto self = std::find(target.begin(), target.end(), edge);
    if (self != target.end()) {
      const std::size_t k = static_cast<std::size_t>(self - target.begin());
      for (std::size_t step = 1; step < target.size(); ++step) {
        const int prev = target[(k + target.size() - step) % target.size()];
        for (int d : rot)
          if (owner_[static_cast<std::size_t>(d)] == prev) return d;
      }
    }
    return rot.back();
  }

  int successor(int v, int d) const {
    const auto& rot = rot_[static_cast<std::size_t>(v)];
    const auto it = std::find(rot.begin(), rot.end(), d);
    return rot[static_cast<std::size_t>((it - rot.begin() + 1)) % rot.size()];
  }

  // The corner after dart a at v belongs to the face of the next dart.
  int corner_face(int v, int a) const { return face_[static_cast<std::size_t>(successor(v, a))]; }

  int anchor_in_face(int v, int preferred, int f) const {
    if (corner_face(v, preferred) == f) return preferred;
    for (int a : rot_[static_cast<std::size_t>(v)])
      if (corner_face(v, a) == f) return a;
    throw Error(ErrorKind::NotPlanarEmbedding, "routing lost its face");
  }

  void trace() {
    const std::size_t darts = tail_.size();
    std::vector<int> pos(darts, 0);
    for (const auto& rot : rot_)
      for (std::size_t k = 0; k < rot.size(); ++k) pos[static_cast<std::size_t>(rot[k])] = static_cast<int>(k);
    face_.assign(darts, -1);
    faces_ = 0;
    for (std::size_t start = 0; start < darts; ++start) {
      if (face_[start] >= 0) continue;
      std::size_t d = start;
      do {
        face_[d] = faces_;
        const std::size_t twin = d ^ 1U;
        const auto& rot = rot_[static_cast<std::size_t>(tail_[twin])];
        d = static_cast<std::size_t>(rot[(static_cast<std::size_t>(pos[twin]) + 1) % rot.size()]);
      } while (d != start);
      ++faces_;
    }
  }

  int new_node() {
    rot_.emplace_back();
    parent_.push_back(static_cast<int>(parent_.size()));
    return static_cast<int>(rot_.size()) - 1;
  }

  int new_segment(int a, int b, int owner, bool to_c) {
    const int d = static_cast<int>(tail_.size());
    tail_.push_back(a);
    tail_.push_back(b);
    owner_.push_back(owner);
    owner_.push_back(owner);
    toward_c_.push_back(to_c);
    toward_c_.push_back(!to_c);
    unite(parent_, a, b);
    return d;
  }

  static void insert_after(std::vector<int>& rot, int anchor, int d) {
    if (anchor < 0) {
      rot.push_back(d);
      return;
    }
    rot.insert(std::find(rot.begin(), rot.end(), anchor) + 1, d);
  }

  void connect(int edge, int u, int anchor_u, int w, int anchor_w, const std::vector<int>& crossed) {
    // Split every crossed segment A -d-> B into A -d-> X -g-> B.
    std::vector<int> points, halves;
    for (int d : crossed) {
      const int x = new_node();
      const int b = tail_[static_cast<std::size_t>(d ^ 1)];
      const int g = new_segment(x, b, owner_[static_cast<std::size_t>(d)], toward_c_[static_cast<std::size_t>(d)]);
      tail_[static_cast<std::size_t>(d ^ 1)] = x;
      auto& rb = rot_[static_cast<std::size_t>(b)];
      *std::find(rb.begin(), rb.end(), d ^ 1) = g ^ 1;
      if (anchor_u == (d ^ 1)) anchor_u = g ^ 1;
      if (anchor_w == (d ^ 1)) anchor_w = g ^ 1;
      unite(parent_, x, b);
      auto& ch = chain_[static_cast<std::size_t>(owner_[static_cast<std::size_t>(d)])];
      for (std::size_t i = 0; i < ch.size(); ++i) {
        if (ch[i] == d) {
          ch.insert(ch.begin() + static_cast<std::ptrdiff_t>(i) + 1, g);
          break;
        }
        if (ch[i] == (d ^ 1)) {
          ch.insert(ch.begin() + static_cast<std::ptrdiff_t>(i), g ^ 1);
          break;
        }
      }
      points.push_back(x);
      halves.push_back(g);
    }
    std::vector<int> segs;
    int prev = u;
    for (int x : points) {
      segs.push_back(new_segment(prev, x, edge, true));
      prev = x;
    }
    segs.push_back(new_segment(prev, w, edge, true));
    insert_after(rot_[static_cast<std::size_t>(u)], anchor_u, segs.front());
    insert_after(rot_[static_cast<std::size_t>(w)], anchor_w, segs.back() ^ 1);
    // The crossed dart has the face we leave on its right, so counterclockwise
    // from the far end: far half, onward segment, near half, incoming segment.
    for (std::size_t i = 0; i < points.size(); ++i) {
      rot_[static_cast<std::size_t>(points[i])] = {halves[i], segs[i + 1], crossed[i] ^ 1, segs[i] ^ 1};
    }
    chain_[static_cast<std::size_t>(edge)] = segs;
  }

  int n1_;
  std::vector<std::vector<int>> rot_;
  std::vector<int> parent_;
  std::vector<int> tail_;
  std::vector<int> owner_;
  std::vector<char> toward_c_;
  std::vector<std::vector<int>> chain_;
  std::vector<int> face_;
  int faces_ = 0;
};

}  // namespace

DrawnGraph route_edges(int n1, int n2, const std::vector<RoutedEdge>& edges, const std::vector<std::vector<int>>& target1,
                       const std::vector<std::vector<int>>& target2, const std::vector<int>& order) {
  Router router(n1, n2);
  std::vector<char> placed(edges.size(), 0);
  for (int e : order) {
    if (e < 0 || static_cast<std::size_t>(e) >= edges.size() || placed[static_cast<std::size_t>(e)])
      throw Error(ErrorKind::MalformedInput, "insertion order is not a permutation of the edges");
    placed[static_cast<std::size_t>(e)] = 1;
    const auto& edge = edges[static_cast<std::size_t>(e)];
    router.insert(e, edge.r, edge.c, target1[static_cast<std::size_t>(edge.r)], target2[static_cast<std::size_t>(edge.c)]);
  }
  if (std::count(placed.begin(), placed.end(), 0) > 0)
    throw Error(ErrorKind::MalformedInput, "insertion order is not a permutation of the edges");
  DrawnGraph g = router.result(n1, n2, edges);
  g.validate();
  return g;
}

std::string to_dot(const DrawnGraph& g, const std::string& name) {
  std::ostringstream os;
  os << "graph " << name << " {\n  node [shape=circle, width=0.3, fontsize=9];\n";
  for (int i = 0; i < g.n1; ++i) os << "  r" << i << " [style=filled, fillcolor=black, fontcolor=white];\n";
  for (int j = 0; j < g.n2; ++j) os << "  c" << j << ";\n";
  for (std::size_t x = 0; x < g.crossings.size(); ++x)
    if (g.crossings[x].alive) os << "  x" << x << " [shape=point, label=\"\"];\n";
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto& edge = g.edges[e];
    if (!edge.alive) continue;
    std::vector<std::string> stops{"r" + std::to_string(edge.r)};
    for (int x : edge.crossings) stops.push_back("x" + std::to_string(x));
    stops.push_back("c" + std::to_string(edge.c));
    for (std::size_t i = 0; i + 1 < stops.size(); ++i) {
      os << "  " << stops[i] << " -- " << stops[i + 1];
      if (i == 0) os << " [label=\"" << edge.weight.to_string() << "\"]";
      os << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace knotdimer
