#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace knotdimer {

/// One PD crossing. Slots hold edge labels counterclockwise starting at the
/// incoming under-edge; slot 2 is the outgoing under-edge.
struct Crossing {
  std::array<int, 4> slots{};
  int sign = 0;      // +1 when the over-strand runs slot 3 -> slot 1
  int over_in = 0;   // slot of the incoming over-edge (1 or 3)
};

/// A corner is the quadrant between slots q and q+1 at a crossing.
struct Corner {
  int crossing;
  int quadrant;
  friend bool operator==(const Corner&, const Corner&) = default;
};

struct Face {
  std::vector<Corner> boundary;  // cyclic, in traversal order
  bool is_unbounded = false;
};

struct Arc {
  std::vector<int> edges;  // diagram-edge labels in knot order
};

struct WirtingerRelation {
  int crossing;
  int over_arc;
  int in_arc;
  int out_arc;
  int sign;
};

/// Roles of the four quadrants of a crossing relative to the over-strand.
struct QuadrantRoles {
  int left_out;   // left of the over-strand, next to its outgoing end
  int left_in;
  int right_out;
  int right_in;
  bool is_left(int q) const { return q == left_out || q == left_in; }
};

enum class FaceColor { White, Black };

/// Validated planar knot diagram. Faces and arcs are computed once at
/// construction; the unbounded face defaults to the longest boundary.
class KnotDiagram {
 public:
  /// The 0-crossing unknot: one white face, no arcs.
  static KnotDiagram unknot();
  static KnotDiagram from_crossings(std::vector<Crossing> crossings);

  int crossing_count() const { return static_cast<int>(crossings_.size()); }
  int edge_count() const { return 2 * crossing_count(); }
  bool is_unknot() const { return crossings_.empty(); }
  const std::vector<Crossing>& crossings() const { return crossings_; }
  const Crossing& crossing(int i) const { return crossings_[static_cast<std::size_t>(i)]; }

  const std::vector<Face>& faces() const { return faces_; }
  int unbounded_face() const { return unbounded_; }
  /// Face containing corner (crossing, quadrant).
  int face_at(int crossing, int quadrant) const;
  /// Same diagram with a different unbounded face.
  KnotDiagram with_unbounded_face(int face) const;

  const std::vector<Arc>& arcs() const { return arcs_; }
  /// Arc carrying the given edge label.
  int arc_of_edge(int label) const;

  /// Same diagram with the orientation reversed (labels renumbered).
  KnotDiagram reversed() const;
  /// PD text, "X(a,b,c,d) ...".
  std::string to_pd() const;

 private:
  std::vector<Crossing> crossings_;
  std::vector<Face> faces_;
  std::vector<std::array<int, 4>> face_at_;
  int unbounded_ = 0;
  std::vector<Arc> arcs_;
  std::vector<int> arc_of_edge_;  // indexed by label
};

/// Parses "X(a,b,c,d) X(...)". Throws MalformedInput, BadLabeling,
/// NonPlanar or EmptyDiagram.
KnotDiagram parse_pd(std::string_view text);

std::vector<Face> compute_faces(const KnotDiagram& d);
std::vector<Arc> compute_arcs(const KnotDiagram& d);
std::vector<WirtingerRelation> wirtinger_relations(const KnotDiagram& d);
QuadrantRoles quadrant_roles(const KnotDiagram& d, int crossing);
/// Quadrant between the two outgoing strands of a crossing.
int out_out_quadrant(const KnotDiagram& d, int crossing);
/// Proper 2-colouring of faces with the unbounded face white.
std::vector<FaceColor> checkerboard_coloring(const KnotDiagram& d);
/// Bounded faces sharing a diagram edge with the unbounded face, ascending.
std::vector<int> faces_adjacent_to_unbounded(const KnotDiagram& d);
/// True if faces f and g share a diagram edge.
bool faces_share_edge(const KnotDiagram& d, int f, int g);
/// Over and under passages alternate along the knot. The unknot counts.
bool is_alternating(const KnotDiagram& d);

/// Path of the builtin table: $KNOTDIMER_TABLE if set, else the shipped file.
std::string builtin_table_path();
/// Names in the table, in file order.
std::vector<std::string> builtin_names();
/// Throws UnknownKnot.
KnotDiagram builtin_knot(const std::string& name);
/// Raw table entry (empty string for the unknot); nullopt if absent.
std::optional<std::string> builtin_pd(const std::string& name);

}  // namespace knotdimer
