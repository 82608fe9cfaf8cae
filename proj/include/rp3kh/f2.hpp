#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace rp3kh {

// Sparse matrix over F2, stored as per-column sorted row lists.
struct SparseF2 {
  uint64_t rows = 0, cols = 0;
  std::vector<uint64_t> col_ptr;  // size cols + 1
  std::vector<uint32_t> row_idx;  // sorted within each column

  static SparseF2 from_entries(uint64_t rows, uint64_t cols,
                               std::vector<std::pair<uint32_t, uint32_t>>& col_row);

  uint64_t nnz() const { return row_idx.size(); }
  const uint32_t* col_begin(uint64_t c) const { return row_idx.data() + col_ptr[c]; }
  const uint32_t* col_end(uint64_t c) const { return row_idx.data() + col_ptr[c + 1]; }
  uint64_t col_size(uint64_t c) const { return col_ptr[c + 1] - col_ptr[c]; }

  bool operator==(const SparseF2&) const = default;
};

// Reference path: dense byte-matrix Gaussian elimination.
uint64_t rank_dense(const SparseF2& m);

// Optimized path: rows packed into 64-bit words.
uint64_t rank_bitpacked(const SparseF2& m);

// Sparse row elimination for matrices too large to bit-pack.
uint64_t rank_sparse(const SparseF2& m);

// Dispatch by size: bit-packed when the packed matrix is small enough,
// sparse elimination otherwise.
uint64_t rank_f2(const SparseF2& m);

}  // namespace rp3kh
