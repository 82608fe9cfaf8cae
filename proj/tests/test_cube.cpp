#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "rp3kh/cube.hpp"
#include "testutil.hpp"

using namespace rp3kh;

TEST_SUITE_BEGIN("cube");

TEST_CASE("resolve the one-crossing class-0 diagram") {
  Diagram d = parse_rpd("X 1 2 1 2\nW 1 1\nW 2 1\n");
  Resolution r0 = resolve(d, 0);
  REQUIRE(r0.circles.size() == 1);
  CHECK_FALSE(r0.circles[0].essential);  // weights 1+1 = 0 mod 2
  Resolution r1 = resolve(d, 1);
  REQUIRE(r1.circles.size() == 1);
  CHECK_FALSE(r1.circles[0].essential);
}

TEST_CASE("resolve the projective kink") {
  Diagram d = parse_rpd("X 1 1 2 2\nW 1 1\n");
  // one smoothing gives the lone essential circle, the other adds a trivial one
  Resolution r0 = resolve(d, 0);
  Resolution r1 = resolve(d, 1);
  REQUIRE(r0.circles.size() == 1);
  CHECK(r0.circles[0].essential);
  REQUIRE(r1.circles.size() == 2);
  CHECK(r1.essential_count() == 1);
}

TEST_CASE("free loops resolve to their own circles") {
  Diagram d = parse_rpd("L w=1\n");
  ResolutionCube cube = build_cube(d);
  CHECK(cube.resolutions.size() == 1);
  CHECK(cube.edges.empty());
  REQUIRE(cube.at(0).circles.size() == 1);
  CHECK(cube.at(0).circles[0].essential);
}

TEST_CASE("trefoil cube") {
  Diagram d = testutil::load_corpus("trefoil");
  ResolutionCube cube = build_cube(d);
  CHECK(cube.resolutions.size() == 8);
  CHECK(cube.edges.size() == 12);
  EdgeCensus census = edge_kind_census(cube);
  CHECK(census.one_to_one == 0);
  CHECK(census.merge + census.split == 12);
  // circle counts per cube weight under the fixed smoothing convention
  std::map<int, std::set<size_t>> counts;
  for (Vertex v = 0; v < 8; ++v)
    counts[__builtin_popcount(v)].insert(cube.at(v).circles.size());
  CHECK(counts[0] == std::set<size_t>{2});
  CHECK(counts[1] == std::set<size_t>{1});
  CHECK(counts[2] == std::set<size_t>{2});
  CHECK(counts[3] == std::set<size_t>{3});
}

TEST_CASE("one-crossing class-0 cube has the 1-to-1 edge") {
  Diagram d = parse_rpd("X 1 2 1 2\nW 1 1\nW 2 1\n");
  ResolutionCube cube = build_cube(d);
  CHECK(cube.resolutions.size() == 2);
  REQUIRE(cube.edges.size() == 1);
  CHECK(cube.edges[0].kind == EdgeKind::OneToOne);
  EdgeCensus census = edge_kind_census(cube);
  CHECK(census.one_to_one == 1);
}

TEST_CASE("class-1 diagrams have no 1-to-1 edges") {
  for (const char* name : {"unknot_proj_kink", "proj_braid_knot", "trefoil_union_uprime"}) {
    ResolutionCube cube = build_cube(testutil::load_corpus(name));
    CHECK(edge_kind_census(cube).one_to_one == 0);
  }
}

TEST_CASE("edge count and per-edge circle deltas") {
  for (const char* name : {"trefoil", "knot_2_1", "figure_eight", "proj_braid_knot"}) {
    Diagram d = testutil::load_corpus(name);
    ResolutionCube cube = build_cube(d);
    const int n = cube.n;
    CHECK(cube.edges.size() == static_cast<size_t>(n) << (n - 1));
    for (const auto& e : cube.edges) {
      long long delta = static_cast<long long>(cube.at(e.to).circles.size()) -
                        static_cast<long long>(cube.at(e.from).circles.size());
      switch (e.kind) {
        case EdgeKind::Merge: CHECK(delta == -1); break;
        case EdgeKind::Split: CHECK(delta == 1); break;
        case EdgeKind::OneToOne: CHECK(delta == 0); break;
      }
    }
  }
}

TEST_CASE("essential count is constant across resolutions") {
  for (const char* name : {"trefoil", "knot_2_1", "unknot_proj_kink", "proj_braid_knot",
                           "trefoil_union_uprime", "one_crossing_class0"}) {
    Diagram d = testutil::load_corpus(name);
    ResolutionCube cube = build_cube(d);
    for (const auto& r : cube.resolutions) CHECK(r.essential_count() == cube.cls);
  }
}

TEST_CASE("circle correspondence is a bijection on untouched circles") {
  Diagram d = testutil::load_corpus("proj_braid_knot");
  ResolutionCube cube = build_cube(d);
  for (const auto& e : cube.edges) {
    std::set<int> image;
    int untouched = 0;
    for (size_t i = 0; i < e.corr.size(); ++i) {
      if (e.corr[i] < 0) continue;
      ++untouched;
      image.insert(e.corr[i]);
      CHECK(cube.at(e.from).circles[i].arcs == cube.at(e.to).circles[e.corr[i]].arcs);
    }
    CHECK(static_cast<int>(image.size()) == untouched);
    int touched_u = (e.kind == EdgeKind::Merge) ? 2 : 1;
    CHECK(untouched + touched_u == static_cast<int>(cube.at(e.from).circles.size()));
  }
}

TEST_CASE("cube shape is invariant under arc relabeling") {
  std::mt19937_64 rng(17);
  for (const char* name : {"trefoil", "knot_2_1", "proj_braid_knot"}) {
    Diagram d = testutil::load_corpus(name);
    for (auto& a : d.arcs) a.dir = ArcDir::Unset;
    d.mark = {};
    ResolutionCube cube = build_cube(d);
    std::vector<ArcId> ids;
    for (const auto& a : d.arcs) ids.push_back(a.id);
    std::vector<ArcId> perm = ids;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::map<ArcId, ArcId> m;
    for (size_t i = 0; i < ids.size(); ++i) m[ids[i]] = perm[i];
    Diagram r = d;
    for (auto& c : r.crossings)
      for (auto& l : c.legs) l = m[l];
    for (auto& a : r.arcs) a.id = m[a.id];
    std::sort(r.arcs.begin(), r.arcs.end(), [](auto& x, auto& y) { return x.id < y.id; });
    ResolutionCube cube2 = build_cube(r);
    for (Vertex v = 0; v < (Vertex{1} << cube.n); ++v) {
      std::multiset<std::pair<size_t, bool>> a, b;
      for (const auto& c : cube.at(v).circles) a.insert({c.arcs.size(), c.essential});
      for (const auto& c : cube2.at(v).circles) b.insert({c.arcs.size(), c.essential});
      CHECK(a == b);
    }
    auto ca = edge_kind_census(cube), cb = edge_kind_census(cube2);
    CHECK(ca.merge == cb.merge);
    CHECK(ca.split == cb.split);
    CHECK(ca.one_to_one == cb.one_to_one);
  }
}

TEST_CASE("build_cube rejects census violations") {
  CHECK_THROWS_AS(build_cube(parse_rpd("L w=1\nL w=1\n")), Error);
  CHECK_THROWS_AS(build_cube(parse_rpd("X 1 4 2 5\nX 3 6 4 1\nX 5 2 6 3\nW 1 1\nW 2 1\n")),
                  Error);
}

TEST_CASE("build_cube enforces the crossing cap") {
  Diagram d = testutil::torus2(6);
  CubeOptions opt;
  opt.max_crossings = 5;
  CHECK_THROWS_AS(build_cube(d, opt), Error);
  opt.max_crossings = 6;
  CHECK_NOTHROW(build_cube(d, opt));
}

TEST_CASE("threaded cube construction matches sequential") {
  Diagram d = testutil::torus2(8);
  ResolutionCube a = build_cube(d, {24, true, 1});
  ResolutionCube b = build_cube(d, {24, true, 2});
  REQUIRE(a.resolutions.size() == b.resolutions.size());
  for (size_t v = 0; v < a.resolutions.size(); ++v)
    CHECK(a.resolutions[v].circles == b.resolutions[v].circles);
}

TEST_CASE("marked circle lookup") {
  Diagram d = parse_rpd("X 1 1 2 2\nW 1 1\nM 2\n");
  Resolution r1 = resolve(d, 1);
  int mc = marked_circle(r1, d);
  REQUIRE(mc >= 0);
  CHECK_FALSE(r1.circles[mc].essential);
  Diagram loop = parse_rpd("L w=1\nM L0\n");
  Resolution rl = resolve(loop, 0);
  CHECK(marked_circle(rl, loop) == 0);
}

TEST_SUITE_END();
