#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rp3kh/diagram.hpp"

namespace rp3kh {

using Vertex = uint32_t;

struct Circle {
  bool essential = false;
  bool is_loop = false;
  int key = 0;                // min arc id, or loop index for loop circles
  std::vector<ArcId> arcs;    // sorted; empty for loop circles

  bool operator==(const Circle&) const = default;
};

struct Resolution {
  Vertex vertex = 0;
  std::vector<Circle> circles;  // arc circles by min arc id, then loop circles

  int essential_count() const {
    int n = 0;
    for (const auto& c : circles) n += c.essential ? 1 : 0;
    return n;
  }
};

enum class EdgeKind : uint8_t { Merge, Split, OneToOne };

struct CubeEdge {
  Vertex from = 0, to = 0;
  int crossing = -1;
  EdgeKind kind = EdgeKind::Merge;
  // Circle indices into the endpoint resolutions.
  // Merge: u_c[0], u_c[1] -> v_c[0].  Split: u_c[0] -> v_c[0], v_c[1].
  // OneToOne: u_c[0] -> v_c[0].
  std::array<int, 2> u_c{-1, -1};
  std::array<int, 2> v_c{-1, -1};
  bool essential_involved = false;
  // corr[i] = circle index at `to` of untouched circle i at `from`; -1 for
  // circles participating in the bifurcation.
  std::vector<int> corr;
};

struct EdgeCensus {
  long long merge = 0, split = 0, one_to_one = 0, essential_involved = 0;
  long long total() const { return merge + split + one_to_one; }
};

struct ResolutionCube {
  int n = 0;
  int cls = 0;
  std::vector<Resolution> resolutions;  // indexed by vertex value, size 2^n
  std::vector<CubeEdge> edges;          // from ascending, then crossing ascending

  const Resolution& at(Vertex v) const { return resolutions[v]; }
};

struct CubeOptions {
  int max_crossings = 24;
  bool check_realizability = true;
  int threads = 1;
};

// Smoothing convention, fixed project-wide: at a crossing with legs
// (a, b, c, d) counterclockwise from the under leg, choice 0 joins a-d and
// b-c (slots (0,3) and (1,2)); choice 1 joins a-b and c-d.
Resolution resolve(const Diagram& d, Vertex v);

// All 2^N resolutions plus classified edges.  Throws on the realizability
// violations (essential-circle census, 1-to-1 bifurcation in class 1) and
// when N exceeds the cap.
ResolutionCube build_cube(const Diagram& d, const CubeOptions& opt = {});

EdgeCensus edge_kind_census(const ResolutionCube& c);

// Index of the circle carrying the marked point, or -1 when unmarked.
int marked_circle(const Resolution& r, const Diagram& d);

}  // namespace rp3kh
