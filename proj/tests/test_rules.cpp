#include <doctest.h>

#include "rp3kh/rules.hpp"
#include "testutil.hpp"

using namespace rp3kh;

namespace {

Mask bit(int g) { return static_cast<Mask>(1u << g); }
Mask pair_bit(int a, int b) { return static_cast<Mask>(1u << (a * 4 + b)); }

}  // namespace

TEST_SUITE_BEGIN("rules");

TEST_CASE("builtin KH0 is the Frobenius rule set") {
  auto t = builtin("KH0");
  CHECK_FALSE(t->class1);
  // X * X -> 0
  CHECK(t->m_tt[1][1] == 0);
  // 1 * X -> X both ways
  CHECK(t->m_tt[0][1] == bit(1));
  CHECK(t->m_tt[1][0] == bit(1));
  // 1 -> 1 (x) X + X (x) 1, X -> X (x) X
  CHECK(t->s_tt[0] == (pair_bit(0, 1) | pair_bit(1, 0)));
  CHECK(t->s_tt[1] == pair_bit(1, 1));
  CHECK(t->onetoone_zero);
}

TEST_CASE("builtin INST1 matches the instanton pair-of-pants formulas") {
  auto t = builtin("INST1");
  CHECK(t->essential_mod.rank() == 4);
  // w+ (x) v- -> w-, w- (x) v- -> 0, and primed copies
  CHECK(t->m_et[0][1] == bit(1));
  CHECK(t->m_et[1][1] == 0);
  CHECK(t->m_et[2][1] == bit(3));
  CHECK(t->m_et[3][1] == 0);
  // split w+ -> w+ (x) v- + w- (x) v+
  CHECK(t->s_et[0] == (pair_bit(0, 1) | pair_bit(1, 0)));
  CHECK(t->s_et[1] == pair_bit(1, 1));
  CHECK(t->s_et[2] == (pair_bit(2, 1) | pair_bit(3, 0)));
  CHECK(t->s_et[3] == pair_bit(3, 1));
}

TEST_CASE("builtin KH1-CLASS1 essential rules") {
  auto t = builtin("KH1-CLASS1");
  // merge X (x) 1b -> Xb
  CHECK(t->m_et[0][1] == bit(1));
  CHECK(t->m_et[1][1] == 0);
  // split 1b -> 1b (x) X + Xb (x) 1
  CHECK(t->s_et[0] == (pair_bit(0, 1) | pair_bit(1, 0)));
}

TEST_CASE("KH-CLASS1 is the k-preserving part of KH1-CLASS1") {
  auto base = builtin("KH-CLASS1");
  auto deformed = builtin("KH1-CLASS1");
  CHECK(preserves_k(*base));
  CHECK_FALSE(preserves_k(*deformed));
  CHECK(deformation_drops_k_by_2(*deformed, *base));
}

TEST_CASE("INST0 is KH0 with the framed factor") {
  auto t = builtin("INST0");
  CHECK(t->extra_copies == 2);
  CHECK(t->m_tt == builtin("KH0")->m_tt);
  CHECK(t->s_tt == builtin("KH0")->s_tt);
}

TEST_CASE("unknown theory") { CHECK_THROWS_AS(builtin("KH9"), Error); }

TEST_CASE("INST1 is block-diagonal in the unprimed/primed generators") {
  CHECK(block_diagonal(*builtin("INST1")));
}

TEST_CASE("block_decompose splits INST1 into two copies of KH1-CLASS1") {
  auto [b0, b1] = block_decompose(*builtin("INST1"));
  CHECK(equivalent(b0, *builtin("KH1-CLASS1")));
  CHECK(equivalent(b1, *builtin("KH1-CLASS1")));
  // the reduced data restricts blockwise: each block kills one generator
  int kills0 = 0, kills1 = 0;
  for (const auto& g : b0.essential_mod.gens) kills0 += g.reduced_kill ? 1 : 0;
  for (const auto& g : b1.essential_mod.gens) kills1 += g.reduced_kill ? 1 : 0;
  CHECK(kills0 == 1);
  CHECK(kills1 == 1);
}

TEST_CASE("block_decompose rejects a mixing table") {
  RuleTable t = *builtin("INST1");
  // pollute one split image across the block boundary
  t.s_et[0] ^= pair_bit(3, 0);
  CHECK_THROWS_AS(block_decompose(t), Error);
}

TEST_CASE("load_rule_file reproduces the builtin tables") {
  RuleTable kh0 = load_rule_file(testutil::source_dir() + "/rules/kh0.rules");
  CHECK(equivalent(kh0, *builtin("KH0")));
  RuleTable inst1 = load_rule_file(testutil::source_dir() + "/rules/inst1.rules");
  RuleTable inst1_builtin = *builtin("INST1");
  inst1_builtin.extra_copies = 1;  // the framed factor belongs to INST0 only
  CHECK(equivalent(inst1, inst1_builtin));
}

TEST_CASE("rule file parse errors") {
  CHECK_THROWS_AS(parse_rule_text("module V trivial : 1 X\nmerge VxQ->V: 1*1 -> 1\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_rule_text("merge VxV->V: 1*1 -> 1\n"), ParseError);  // no module
  CHECK_THROWS_AS(parse_rule_text("module V trivial : 1 X\nsplit V->VxV: q -> 1*1\n"),
                  ParseError);
}

TEST_CASE("unit-axiom lint rejects a non-unital merge") {
  RuleTable t = parse_rule_text(
      "theory broken\n"
      "module V trivial : 1 X\n"
      "merge VxV->V: 1*1 -> 0\n"  // unit fails
      "merge VxV->V: 1*X -> X\n"
      "merge VxV->V: X*1 -> X\n"
      "split V->VxV: 1 -> 1*X + X*1\n"
      "split V->VxV: X -> X*X\n");
  CHECK_THROWS_WITH_AS(validate_table(t), doctest::Contains("unit axiom"), Error);
}

TEST_CASE("square check rejects a d^2 violation and names the square") {
  // drop the X -> X (x) X split: merge-then-split squares no longer commute
  RuleTable t = parse_rule_text(
      "theory broken2\n"
      "module V trivial : 1(1,0) X(-1,0)\n"
      "merge VxV->V: 1*1 -> 1\n"
      "merge VxV->V: 1*X -> X\n"
      "merge VxV->V: X*1 -> X\n"
      "merge VxV->V: X*X -> 0\n"
      "split V->VxV: 1 -> 1*X + X*1\n"
      "split V->VxV: X -> 0\n");
  CHECK_THROWS_WITH_AS(validate_table(t), doctest::Contains("d^2"), Error);
}

TEST_CASE("builtins pass the square check") {
  for (const char* name : {"KH0", "KH-CLASS1", "KH1-CLASS1", "INST0", "INST1"})
    CHECK_NOTHROW(validate_table(*builtin(name)));
}

TEST_CASE("reduced killsets") {
  auto t = builtin("INST1");
  CHECK(t->trivial_mod.gens[1].reduced_kill);       // v-
  CHECK_FALSE(t->trivial_mod.gens[0].reduced_kill);  // v+
  CHECK(t->essential_mod.gens[1].reduced_kill);      // w-
  CHECK(t->essential_mod.gens[3].reduced_kill);      // w-'
  auto kh = builtin("KH-CLASS1");
  CHECK(kh->essential_mod.gens[1].reduced_kill);  // Xb
}

TEST_SUITE_END();
