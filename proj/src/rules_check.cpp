#include <string>
#include <vector>

#include "rp3kh/complex.hpp"
#include "rp3kh/cube.hpp"
#include "rp3kh/rules.hpp"

// Load-time validation of a rule table: unit lint plus the local d^2 = 0
// check, run exhaustively over every realizable two-crossing square (with an
// optional spectator loop and every marked-point choice, both directions).

namespace rp3kh {

namespace {

void lint_masks(const RuleTable& t) {
  const int rt = t.trivial_mod.rank();
  const int re = t.essential_mod.rank();
  auto single_ok = [](Mask m, int rank) {
    for (int g = rank; g < 16; ++g)
      if (m & (1u << g)) return false;
    return true;
  };
  for (int a = 0; a < rt; ++a) {
    for (int b = 0; b < rt; ++b)
      if (!single_ok(t.m_tt[a][b], rt)) throw Error("merge image outside the trivial module");
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 4; ++y)
        if ((t.s_tt[a] & (1u << (x * 4 + y))) && (x >= rt || y >= rt))
          throw Error("split image outside the trivial module");
  }
  for (int e = 0; e < re; ++e) {
    for (int b = 0; b < rt; ++b)
      if (!single_ok(t.m_et[e][b], re)) throw Error("merge image outside the essential module");
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 4; ++y)
        if ((t.s_et[e] & (1u << (x * 4 + y))) && (x >= re || y >= rt))
          throw Error("split image outside the modules");
  }

  // Unit lint: merging with the first trivial generator is the identity.
  for (int y = 0; y < rt; ++y) {
    if (t.m_tt[0][y] != (1u << y) || t.m_tt[y][0] != (1u << y))
      throw Error("unit axiom fails: merge with " + t.trivial_mod.gens[0].label +
                  " is not the identity on " + t.trivial_mod.gens[y].label);
  }
  for (int e = 0; e < re; ++e)
    if (t.m_et[e][0] != (1u << e))
      throw Error("unit axiom fails: merge with " + t.trivial_mod.gens[0].label +
                  " is not the identity on " + t.essential_mod.gens[e].label);
}

// All perfect matchings of the 8 leg slots of two crossings.
void enumerate_pairings(std::vector<std::pair<int, int>>& cur, uint8_t used,
                        std::vector<std::vector<std::pair<int, int>>>& out) {
  int first = -1;
  for (int s = 0; s < 8; ++s)
    if (!(used & (1u << s))) {
      first = s;
      break;
    }
  if (first < 0) {
    out.push_back(cur);
    return;
  }
  for (int s = first + 1; s < 8; ++s) {
    if (used & (1u << s)) continue;
    cur.push_back({first, s});
    enumerate_pairings(cur, used | (1u << first) | (1u << s), out);
    cur.pop_back();
  }
}

}  // namespace

void validate_table(const RuleTable& t) {
  if (t.trivial_mod.rank() < 1) throw Error("rule table has no trivial module");
  if (t.class1 && t.essential_mod.rank() < 1)
    throw Error("class-1 rule table has no essential module");
  if (!t.onetoone_zero) throw Error("only the zero 1-to-1 rule is supported");
  lint_masks(t);

  std::vector<std::vector<std::pair<int, int>>> pairings;
  std::vector<std::pair<int, int>> cur;
  enumerate_pairings(cur, 0, pairings);

  auto table_ref = std::shared_ptr<const RuleTable>(std::shared_ptr<void>(), &t);
  const int want_class = t.class1 ? 1 : 0;

  for (const auto& pairing : pairings) {
    for (int weights = 0; weights < 16; ++weights) {
      for (int loop_variant = 0; loop_variant < 3; ++loop_variant) {
        Diagram d;
        d.crossings.resize(2);
        for (size_t a = 0; a < pairing.size(); ++a) {
          auto [s1, s2] = pairing[a];
          ArcId id = static_cast<ArcId>(a + 1);
          d.crossings[s1 / 4].legs[s1 % 4] = id;
          d.crossings[s2 / 4].legs[s2 % 4] = id;
          d.arcs.push_back({id, (weights >> a) & 1, ArcDir::Unset});
        }
        if (loop_variant > 0) d.loops.push_back({loop_variant - 1});
        if (link_class(d) != want_class) continue;

        ResolutionCube cube;
        try {
          cube = build_cube(d);
        } catch (const Error&) {
          continue;  // not realizable; no square to check
        }

        std::vector<Mark> marks{{MarkKind::None, 0}};
        for (const auto& a : d.arcs) marks.push_back({MarkKind::Arc, a.id});
        for (size_t k = 0; k < d.loops.size(); ++k)
          marks.push_back({MarkKind::Loop, static_cast<int>(k)});

        for (const Mark& mark : marks) {
          Diagram dm = d;
          dm.mark = mark;
          for (Direction dir : {Direction::Forward, Direction::Reversed}) {
            AssembleOptions opt;
            opt.reduced = mark.kind != MarkKind::None;
            opt.dir = dir;
            GradedComplex c = assemble(cube, dm, table_ref, opt);
            std::string detail;
            if (!d_squared_zero(c, &detail)) {
              throw Error("rule table '" + t.name + "' fails d^2 = 0 on the square:\n" +
                          serialize(dm) + "direction " +
                          (dir == Direction::Forward ? "forward" : "reversed") + ", " + detail);
            }
          }
        }
      }
    }
  }
}

}  // namespace rp3kh
