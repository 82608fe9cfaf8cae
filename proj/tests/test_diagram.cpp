#include <doctest.h>

#include <map>
#include <random>

#include "rp3kh/cube.hpp"
#include "rp3kh/diagram.hpp"
#include "testutil.hpp"

using namespace rp3kh;

TEST_SUITE_BEGIN("diagram");

TEST_CASE("parse free loop") {
  Diagram d = parse_rpd("L w=1\n");
  CHECK(d.ncrossings() == 0);
  REQUIRE(d.loops.size() == 1);
  CHECK(d.loops[0].weight == 1);
}

TEST_CASE("parse one crossing with weights") {
  Diagram d = parse_rpd("X 1 2 1 2 \n W 1 1 \n W 2 1");
  CHECK(d.ncrossings() == 1);
  REQUIRE(d.arcs.size() == 2);
  CHECK(d.arc(1).weight == 1);
  CHECK(d.arc(2).weight == 1);
}

TEST_CASE("parse trefoil pd code") {
  Diagram d = parse_rpd("X 1 4 2 5 \n X 3 6 4 1 \n X 5 2 6 3");
  CHECK(d.ncrossings() == 3);
  CHECK(d.arcs.size() == 6);
  for (const auto& a : d.arcs) CHECK(a.weight == 0);
}

TEST_CASE("parse errors carry line and column") {
  CHECK_THROWS_AS(parse_rpd("X 1 2 1\n"), ParseError);
  try {
    parse_rpd("L w=0\nX 1 2 1 oops\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.col == 9);
  }
  // duplicate weight declaration
  CHECK_THROWS_AS(parse_rpd("X 1 2 1 2\nW 1 0\nW 1 1\n"), ParseError);
  // arc appearing once
  CHECK_THROWS_AS(parse_rpd("X 1 2 3 4\nX 1 2 3 5\n"), ParseError);
  // weight on an arc absent from every crossing
  CHECK_THROWS_AS(parse_rpd("X 1 2 1 2\nW 7 1\n"), ParseError);
  // undeclared marked arc
  CHECK_THROWS_AS(parse_rpd("X 1 2 1 2\nM 9\n"), ParseError);
  CHECK_THROWS_AS(parse_rpd("L w=0\nM L3\n"), ParseError);
  CHECK_THROWS_AS(parse_rpd("Y 1 2 3 4\n"), ParseError);
  CHECK_THROWS_AS(parse_rpd("L w=2\n"), ParseError);
}

TEST_CASE("round trip on random diagrams") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    Diagram d = testutil::random_diagram(rng, 3);
    if (rng() & 1)
      for (auto& a : d.arcs) a.dir = (rng() & 1) ? ArcDir::Forward : ArcDir::Reversed;
    Diagram back = parse_rpd(serialize(d));
    CHECK(back == d);
    CHECK(serialize(back) == serialize(d));
  }
}

TEST_CASE("link_class examples") {
  CHECK(link_class(parse_rpd("L w=1\n")) == 1);
  CHECK(link_class(parse_rpd("X 1 4 2 5\nX 3 6 4 1\nX 5 2 6 3\n")) == 0);
  CHECK(link_class(parse_rpd("X 1 2 1 2\nW 1 1\nW 2 1\n")) == 0);
}

TEST_CASE("link_class invariant under mirror and relabeling") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    Diagram d = testutil::random_diagram(rng, 3);
    CHECK(link_class(mirror(d)) == link_class(d));
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
    if (r.mark.kind == MarkKind::Arc) r.mark.value = m[r.mark.value];
    CHECK(link_class(r) == link_class(d));
  }
}

TEST_CASE("component weights sum to the link class") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    Diagram d = testutil::random_diagram(rng, 3);
    int total = 0;
    for (const auto& comp : components(d)) {
      int w = 0;
      for (int idx : comp) w ^= d.arcs[idx].weight;
      total ^= w;
    }
    for (const auto& l : d.loops) total ^= l.weight;
    CHECK(total == link_class(d));
  }
}

TEST_CASE("mirror of a crossingless diagram is identical") {
  Diagram d = parse_rpd("L w=1\n");
  CHECK(mirror(d) == d);
}

TEST_CASE("mirror swaps the resolutions") {
  Diagram d = testutil::load_corpus("trefoil");
  Diagram m = mirror(d);
  const int n = d.ncrossings();
  for (Vertex v = 0; v < (Vertex{1} << n); ++v) {
    Vertex vbar = ~v & ((Vertex{1} << n) - 1);
    CHECK(resolve(d, v).circles == resolve(m, vbar).circles);
  }
}

TEST_CASE("mirror is an involution at the resolution level") {
  for (const char* name : {"trefoil", "knot_2_1", "unknot_proj_kink", "figure_eight"}) {
    Diagram d = testutil::load_corpus(name);
    Diagram mm = mirror(mirror(d));
    const int n = d.ncrossings();
    for (Vertex v = 0; v < (Vertex{1} << n); ++v)
      CHECK(resolve(d, v).circles == resolve(mm, v).circles);
  }
}

TEST_CASE("crossing signs of the oriented trefoil") {
  Diagram d = testutil::load_corpus("trefoil");
  auto [np, nm] = crossing_signs(d);
  CHECK(np == 3);
  CHECK(nm == 0);
  auto [mp, mm] = crossing_signs(mirror(d));
  CHECK(mp == 0);
  CHECK(mm == 3);
}

TEST_CASE("crossing signs: zero-crossing diagram") {
  auto [np, nm] = crossing_signs(parse_rpd("L w=0\n"));
  CHECK(np == 0);
  CHECK(nm == 0);
}

TEST_CASE("crossing signs invariant under component reversal") {
  Diagram d = testutil::load_corpus("trefoil");
  Diagram rev = d;
  for (auto& a : rev.arcs)
    a.dir = (a.dir == ArcDir::Forward) ? ArcDir::Reversed : ArcDir::Forward;
  CHECK(crossing_signs(rev) == crossing_signs(d));
}

TEST_CASE("crossing signs require a full orientation") {
  Diagram d = parse_rpd("X 1 4 2 5\nX 3 6 4 1\nX 5 2 6 3\n");
  CHECK_THROWS_AS(crossing_signs(d), Error);
}

TEST_CASE("auto_orient yields a consistent orientation") {
  for (const char* name : {"trefoil", "figure_eight", "hopf", "knot_2_1", "proj_braid_knot"}) {
    Diagram d = testutil::load_corpus(name);
    for (auto& a : d.arcs) a.dir = ArcDir::Unset;
    Diagram o = auto_orient(d);
    CHECK(o.oriented());
    CHECK_NOTHROW(crossing_signs(o));
  }
}

TEST_CASE("disjoint union") {
  Diagram u1 = parse_rpd("L w=0\n");
  Diagram up = parse_rpd("L w=1\n");
  Diagram tre = parse_rpd("X 1 4 2 5\nX 3 6 4 1\nX 5 2 6 3\n");

  Diagram uu = disjoint_union(u1, u1);
  CHECK(uu.loops.size() == 2);
  CHECK(link_class(uu) == 0);

  Diagram tu = disjoint_union(tre, up);
  CHECK(link_class(tu) == 1);
  CHECK(tu.ncrossings() == 3);
  CHECK(tu.loops.size() == 1);

  CHECK_THROWS_AS(disjoint_union(up, up), Error);
}

TEST_CASE("disjoint union relabels the second diagram") {
  Diagram tre = parse_rpd("X 1 4 2 5\nX 3 6 4 1\nX 5 2 6 3\n");
  Diagram two = disjoint_union(tre, tre);
  CHECK(two.arcs.size() == 12);
  CHECK(validate(two, false).empty());
}

TEST_CASE("validate reports dangling arcs as data") {
  Diagram d;
  d.crossings.push_back({{1, 2, 1, 2}});
  d.arcs = {{1, 0, ArcDir::Unset}, {2, 0, ArcDir::Unset}, {3, 0, ArcDir::Unset}};
  auto v = validate(d, false);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == "dangling-arc");
}

TEST_CASE("validate flags the Lemma 2.2 census violation") {
  // two disjoint essential loops cannot be drawn in RP^2
  Diagram d = parse_rpd("L w=1\nL w=1\n");
  auto v = validate(d, true);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == "realizability");
  CHECK(validate(parse_rpd("L w=1\n")).empty());
  CHECK(validate(parse_rpd("L w=0\n")).empty());
}

TEST_CASE("validate flags a corrupted-weight trefoil") {
  // flipping two arc weights produces two essential circles in one resolution
  Diagram d = parse_rpd("X 1 4 2 5\nX 3 6 4 1\nX 5 2 6 3\nW 1 1\nW 2 1\n");
  auto v = validate(d, true);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == "realizability");
}

TEST_CASE("serialization is byte-stable") {
  Diagram d = testutil::load_corpus("k14_composite");
  CHECK(serialize(d) == serialize(parse_rpd(serialize(d))));
}

TEST_SUITE_END();
