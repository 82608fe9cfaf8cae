#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rp3kh/diagram.hpp"

namespace rp3kh {

struct GenInfo {
  std::string label;
  int deg = 0;             // quantum degree contribution
  int k = 0;               // third-grading contribution
  bool reduced_kill = false;  // quotiented away on the marked circle

  bool operator==(const GenInfo&) const = default;
};

struct CircleModule {
  std::string name;
  std::vector<GenInfo> gens;
  int rank() const { return static_cast<int>(gens.size()); }
};

// Image masks over module generators; pair images are indexed a*4+b.
using Mask = uint16_t;

// Local rule set of one theory, all coefficients F2.  Merges take the inputs
// ordered (essential, trivial) or by circle order for trivial-trivial;
// essential splits produce (essential, trivial) pairs.  Reduction is a
// quotient applied at assembly time using the generators' reduced_kill flags,
// so each table carries its reduced variant.
struct RuleTable {
  std::string name;
  bool class1 = false;    // essential circles expected in the cube
  int extra_copies = 1;   // framed-factor multiplicity (class-0 instanton: 2)
  CircleModule trivial_mod;
  CircleModule essential_mod;  // rank 0 unless class1
  std::array<std::array<Mask, 4>, 4> m_tt{};  // merge (t1,t2) -> t
  std::array<std::array<Mask, 4>, 4> m_et{};  // merge (e,t) -> e
  std::array<Mask, 4> s_tt{};                 // split t -> (t1,t2)
  std::array<Mask, 4> s_et{};                 // split e -> (e,t)
  bool onetoone_zero = true;
};

// Built-in theories: KH0, KH-CLASS1, KH1-CLASS1, INST0, INST1.  Reduced
// variants are the same tables (quotients are taken at assembly).  Tables are
// validated once and cached.
std::shared_ptr<const RuleTable> builtin(const std::string& theory);

// Parse a rule file and validate it (unit lint + local d^2 = 0 square check).
RuleTable load_rule_file(const std::string& path);
RuleTable parse_rule_text(const std::string& text);  // no validation

// Unit lint plus the exhaustive two-edge square check: every realizable
// two-crossing configuration (with optional spectator loop and marked point)
// must have d^2 = 0 in both directions.  Throws Error naming the offending
// square otherwise.
void validate_table(const RuleTable& t);

// Split a table whose essential module is block-diagonal (such as the W table)
// into the two rank-halved tables.  Throws when images mix the blocks.
std::pair<RuleTable, RuleTable> block_decompose(const RuleTable& t);

// Structural equality up to generator labels.
bool equivalent(const RuleTable& a, const RuleTable& b);

// Every image term preserves the total k grading.
bool preserves_k(const RuleTable& t);
// Every image term of `deformed` either matches `base` (k preserved) or is a
// new term dropping k by exactly 2.
bool deformation_drops_k_by_2(const RuleTable& deformed, const RuleTable& base);
// No merge/split image connects essential generators across the {0,1}/{2,3}
// block boundary.
bool block_diagonal(const RuleTable& t);

}  // namespace rp3kh
