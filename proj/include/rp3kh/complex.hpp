#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "rp3kh/cube.hpp"
#include "rp3kh/f2.hpp"
#include "rp3kh/rules.hpp"

namespace rp3kh {

enum class Direction { Forward, Reversed };

struct CircleSlot {
  bool essential = false;
  bool marked = false;
  uint8_t nlabels = 0;              // allowed label count after reduction
  std::array<uint8_t, 4> labels{};  // allowed module gen indices, ascending
  std::array<int8_t, 4> inv{};      // module gen -> allowed position, -1 killed
};

struct VertexShape {
  Vertex vertex = 0;
  uint64_t first_gen = 0;  // offset within the level
  uint64_t count = 1;
  std::vector<CircleSlot> slots;
  std::vector<uint64_t> strides;  // slot 0 fastest
};

struct Level {
  uint64_t dim = 0;
  std::vector<VertexShape> shapes;  // vertices ascending

  int shape_index(Vertex v) const;
  // Shape containing a global generator index.
  int locate(uint64_t global) const;
};

struct RankProfile {
  std::vector<long long> by_level;  // raw cube-weight positions 0..n
  long long total = 0;
  bool oriented = false;
  int n_minus = 0;

  // i = level - n_minus when oriented, raw level otherwise; zero ranks omitted.
  std::map<int, long long> by_i() const;
  long long at_level(int p) const {
    return (p >= 0 && p < static_cast<int>(by_level.size())) ? by_level[p] : 0;
  }
};

struct GradedComplex {
  int n = 0;
  Direction dir = Direction::Forward;
  int copies = 1;  // framed-factor multiplicity (disjoint identical copies)
  bool oriented = false;
  int n_plus = 0, n_minus = 0;
  bool reduced = false;
  std::shared_ptr<const RuleTable> table;
  std::vector<Level> levels;  // size n+1
  // diffs[p]: Forward: level p -> p+1.  Reversed: level p+1 -> p.
  std::vector<SparseF2> diffs;

  uint64_t chain_rank() const;
  uint64_t chain_rank_level(int p) const;
  int i_of_level(int p) const { return oriented ? p - n_minus : p; }
};

struct AssembleOptions {
  bool reduced = false;
  Direction dir = Direction::Forward;
};

// Chain groups are one module factor per circle; per-edge maps extend the
// rule table by identity on untouched circles.  Over F2 no edge signs apply.
GradedComplex assemble(const ResolutionCube& cube, const Diagram& d,
                       std::shared_ptr<const RuleTable> table, const AssembleOptions& opt = {});

// Explicit composite check of consecutive differentials.
bool d_squared_zero(const GradedComplex& c, std::string* detail = nullptr);

enum class RankStrategy { Auto, Dense, Bitpacked, Sparse };

// Verifies d^2 = 0 (hard error otherwise), then per-level
// rank H_p = dim C_p - rank(d out of p) - rank(d into p).
RankProfile homology_ranks(const GradedComplex& c, RankStrategy strategy = RankStrategy::Auto);

// Label decode for dumps and structural comparisons (allowed positions).
void decode_labels(const VertexShape& sh, uint64_t local, uint8_t* out);
uint64_t encode_labels(const VertexShape& sh, const uint8_t* labs);

// Per-generator gradings.
int gen_j(const GradedComplex& c, const VertexShape& sh, const uint8_t* labs);
int gen_k(const GradedComplex& c, const VertexShape& sh, const uint8_t* labs);

}  // namespace rp3kh
