#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rp3kh {

using ArcId = int;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  int line;
  int col;
  ParseError(int line_, int col_, const std::string& what_)
      : Error("line " + std::to_string(line_) + ", col " + std::to_string(col_) + ": " + what_),
        line(line_),
        col(col_) {}
};

// Direction of an arc relative to its stored orientation.  The stored
// orientation runs from the arc's first leg occurrence to its second, in
// (crossing, slot) scan order.
enum class ArcDir : int8_t { Unset = 0, Forward = 1, Reversed = -1 };

struct Arc {
  ArcId id = 0;
  int weight = 0;  // mod-2 intersection count with the cross-cap line
  ArcDir dir = ArcDir::Unset;

  bool operator==(const Arc&) const = default;
};

// Legs counterclockwise from the under-strand leg: (legs[0], legs[2]) is the
// under-strand, (legs[1], legs[3]) the over-strand.
struct Crossing {
  std::array<ArcId, 4> legs{};

  bool operator==(const Crossing&) const = default;
};

struct FreeLoop {
  int weight = 0;

  bool operator==(const FreeLoop&) const = default;
};

enum class MarkKind : uint8_t { None, Arc, Loop };

struct Mark {
  MarkKind kind = MarkKind::None;
  int value = 0;  // arc id, or free-loop index

  bool operator==(const Mark&) const = default;
};

struct Violation {
  std::string kind;
  std::string detail;
};

struct Diagram {
  std::vector<Crossing> crossings;
  std::vector<Arc> arcs;  // sorted by id, unique
  std::vector<FreeLoop> loops;
  Mark mark;

  int ncrossings() const { return static_cast<int>(crossings.size()); }
  bool oriented() const;
  int arc_index(ArcId id) const;  // -1 if absent
  const Arc& arc(ArcId id) const;

  bool operator==(const Diagram&) const = default;
};

// One leg occurrence of an arc.
struct LegRef {
  int crossing = -1;
  int slot = -1;

  bool operator==(const LegRef&) const = default;
};

// Both leg occurrences of each arc, parallel to d.arcs, in scan order.
// Requires every arc to appear exactly twice.
std::vector<std::array<LegRef, 2>> arc_occurrences(const Diagram& d);

Diagram parse_rpd(const std::string& text);

// Byte-stable for a fixed Diagram: crossings in stored order, weight-1 arcs
// and orientations sorted by arc id.
std::string serialize(const Diagram& d);

// Structural invariants plus, when check_realizability is set, the necessary
// realizability conditions read off the resolution cube (essential-circle
// census and the class restriction on 1-to-1 bifurcations).
std::vector<Violation> validate(const Diagram& d, bool check_realizability = true,
                                int max_crossings = 24);

// Total mod-2 weight of the diagram: 0 = null-homologous.
int link_class(const Diagram& d);

// Over/under swapped at every crossing, legs re-rooted so an under leg leads.
Diagram mirror(const Diagram& d);

// (n+, n-).  Requires a full consistent orientation.
std::pair<int, int> crossing_signs(const Diagram& d);

Diagram disjoint_union(const Diagram& a, const Diagram& b);

// Closed components of the underlying curve; each entry lists arc indices in
// traversal order.  Free loops are not included (one component each).
std::vector<std::vector<int>> components(const Diagram& d);

// Copy with a coherent orientation, deterministic: each component starts at
// its minimal arc id, traversed toward that arc's second leg occurrence.
Diagram auto_orient(const Diagram& d);

}  // namespace rp3kh
