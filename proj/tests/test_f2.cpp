#include <doctest.h>

#include <random>

#include "rp3kh/f2.hpp"

using namespace rp3kh;

namespace {

SparseF2 random_matrix(std::mt19937_64& rng, uint32_t rows, uint32_t cols, double density) {
  std::vector<std::pair<uint32_t, uint32_t>> entries;
  std::bernoulli_distribution flip(density);
  for (uint32_t c = 0; c < cols; ++c)
    for (uint32_t r = 0; r < rows; ++r)
      if (flip(rng)) entries.push_back({c, r});
  return SparseF2::from_entries(rows, cols, entries);
}

}  // namespace

TEST_SUITE_BEGIN("f2");

TEST_CASE("identity and zero") {
  std::vector<std::pair<uint32_t, uint32_t>> id3{{0, 0}, {1, 1}, {2, 2}};
  SparseF2 m = SparseF2::from_entries(3, 3, id3);
  CHECK(rank_dense(m) == 3);
  CHECK(rank_bitpacked(m) == 3);
  CHECK(rank_sparse(m) == 3);

  std::vector<std::pair<uint32_t, uint32_t>> none;
  SparseF2 z = SparseF2::from_entries(5, 7, none);
  CHECK(rank_dense(z) == 0);
  CHECK(rank_f2(z) == 0);
}

TEST_CASE("duplicate entries cancel over F2") {
  std::vector<std::pair<uint32_t, uint32_t>> e{{0, 0}, {0, 0}, {1, 1}};
  SparseF2 m = SparseF2::from_entries(2, 2, e);
  CHECK(m.nnz() == 1);
  CHECK(rank_f2(m) == 1);
}

TEST_CASE("random 64x80 matrices agree across all paths") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    SparseF2 m = random_matrix(rng, 64, 80, 0.08);
    uint64_t ref = rank_dense(m);
    CHECK(rank_bitpacked(m) == ref);
    CHECK(rank_sparse(m) == ref);
    CHECK(rank_f2(m) == ref);
  }
}

TEST_CASE("path agreement across shapes and densities") {
  std::mt19937_64 rng(202);
  for (uint32_t rows : {1u, 5u, 16u, 33u, 64u}) {
    for (uint32_t cols : {1u, 7u, 16u, 40u}) {
      for (double density : {0.02, 0.15, 0.5}) {
        SparseF2 m = random_matrix(rng, rows, cols, density);
        uint64_t ref = rank_dense(m);
        CHECK(rank_bitpacked(m) == ref);
        CHECK(rank_sparse(m) == ref);
      }
    }
  }
}

TEST_CASE("rank bounds") {
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 30; ++trial) {
    SparseF2 m = random_matrix(rng, 20, 31, 0.2);
    uint64_t r = rank_f2(m);
    CHECK(r <= 20);
    CHECK(r <= 31);
  }
}

TEST_SUITE_END();
