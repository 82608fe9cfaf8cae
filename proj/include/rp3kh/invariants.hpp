#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rp3kh/complex.hpp"

namespace rp3kh {

struct ComputeOptions {
  int threads = 1;
  int max_crossings = 24;
  RankStrategy strategy = RankStrategy::Auto;
};

// Homology ranks of the Khovanov complex (KH0 for class 0, KH-CLASS1 for
// class 1).  reduced requires a marked point.
RankProfile kh(const Diagram& d, bool reduced = false, const ComputeOptions& opt = {});

// Deformed theory; class-1 diagrams only (the implemented specializations
// coincide for class 0).
RankProfile kh1(const Diagram& d, bool reduced = false, const ComputeOptions& opt = {});

// Reversed-direction E1 complex: two disjoint copies of the KH0 complex for
// class 0, the W-carrying INST1 complex for class 1.
GradedComplex instanton_e1(const Diagram& d, bool reduced = false,
                           const ComputeOptions& opt = {});

RankProfile e2_page(const Diagram& d, bool reduced = false, const ComputeOptions& opt = {});

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct InvariantReport {
  std::string name;
  int n = 0;
  int cls = 0;
  bool oriented = false;
  std::string marked;  // "arc 3", "loop 0", "arc 1 (default)", "none"
  RankProfile kh, khr;
  std::optional<RankProfile> kh1;
  RankProfile e2, e2_reduced;
  uint64_t e1_chain_rank = 0;
  uint64_t e1_chain_rank_reduced = 0;
  std::vector<CheckResult> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Runs the structural cross-checks: Lemma 2.2 census, d^2 = 0, the two-copies
// E2 identities against the mirror, the rank inequalities, and (class 1) the
// block decomposition of the E1 complex.  Check failures are report entries,
// not errors.
InvariantReport verify(const Diagram& d, const ComputeOptions& opt = {},
                       const std::string& name = "diagram");

// Matrix-level comparison of the INST1 complex of d with two renamed copies
// of the KH1-CLASS1 complex of mirror(d).
bool inst1_matches_two_kh1_mirror(const Diagram& d, const ComputeOptions& opt,
                                  std::string* detail = nullptr);

}  // namespace rp3kh
