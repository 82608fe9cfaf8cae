#include "rp3kh/f2.hpp"

#include <algorithm>
#include <bit>
#include <cassert>

namespace rp3kh {

SparseF2 SparseF2::from_entries(uint64_t rows, uint64_t cols,
                                std::vector<std::pair<uint32_t, uint32_t>>& col_row) {
  SparseF2 m;
  m.rows = rows;
  m.cols = cols;
  std::sort(col_row.begin(), col_row.end());
  // Paired duplicate entries cancel over F2.
  std::vector<std::pair<uint32_t, uint32_t>> kept;
  kept.reserve(col_row.size());
  for (size_t i = 0; i < col_row.size();) {
    size_t j = i;
    while (j < col_row.size() && col_row[j] == col_row[i]) ++j;
    if ((j - i) & 1) kept.push_back(col_row[i]);
    i = j;
  }
  m.col_ptr.assign(cols + 1, 0);
  for (const auto& [c, r] : kept) m.col_ptr[c + 1]++;
  for (uint64_t c = 0; c < cols; ++c) m.col_ptr[c + 1] += m.col_ptr[c];
  m.row_idx.resize(kept.size());
  for (size_t i = 0; i < kept.size(); ++i) m.row_idx[i] = kept[i].second;
  return m;
}

uint64_t rank_dense(const SparseF2& m) {
  if (m.rows == 0 || m.cols == 0) return 0;
  std::vector<std::vector<uint8_t>> a(m.rows, std::vector<uint8_t>(m.cols, 0));
  for (uint64_t c = 0; c < m.cols; ++c)
    for (const uint32_t* p = m.col_begin(c); p != m.col_end(c); ++p) a[*p][c] = 1;

  uint64_t rank = 0;
  uint64_t row = 0;
  for (uint64_t col = 0; col < m.cols && row < m.rows; ++col) {
    uint64_t pivot = row;
    while (pivot < m.rows && a[pivot][col] == 0) ++pivot;
    if (pivot == m.rows) continue;
    std::swap(a[pivot], a[row]);
    for (uint64_t r = 0; r < m.rows; ++r) {
      if (r == row || a[r][col] == 0) continue;
      for (uint64_t c2 = col; c2 < m.cols; ++c2) a[r][c2] ^= a[row][c2];
    }
    ++row;
    ++rank;
  }
  return rank;
}

uint64_t rank_bitpacked(const SparseF2& m) {
  if (m.rows == 0 || m.cols == 0) return 0;
  const uint64_t words = (m.cols + 63) / 64;
  std::vector<uint64_t> bits(m.rows * words, 0);
  for (uint64_t c = 0; c < m.cols; ++c)
    for (const uint32_t* p = m.col_begin(c); p != m.col_end(c); ++p)
      bits[*p * words + c / 64] ^= (uint64_t{1} << (c % 64));

  // Row echelon: pivot_row[c] = index of the reduced row with leading column c.
  std::vector<int64_t> pivot_row(m.cols, -1);
  uint64_t rank = 0;
  std::vector<uint64_t> work(words);
  for (uint64_t r = 0; r < m.rows; ++r) {
    std::copy_n(bits.begin() + r * words, words, work.begin());
    for (uint64_t w = 0; w < words; ++w) {
      while (work[w]) {
        uint64_t col = w * 64 + static_cast<uint64_t>(std::countr_zero(work[w]));
        int64_t pr = pivot_row[col];
        if (pr < 0) {
          pivot_row[col] = static_cast<int64_t>(r);
          std::copy_n(work.begin(), words, bits.begin() + r * words);
          ++rank;
          goto next_row;
        }
        const uint64_t* prow = bits.data() + static_cast<uint64_t>(pr) * words;
        for (uint64_t w2 = w; w2 < words; ++w2) work[w2] ^= prow[w2];
      }
    }
  next_row:;
  }
  return rank;
}

namespace {

// Sorted symmetric difference a ^= b.
void xor_into(std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
              std::vector<uint32_t>& scratch) {
  scratch.clear();
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j])
      scratch.push_back(a[i++]);
    else if (b[j] < a[i])
      scratch.push_back(b[j++]);
    else {
      ++i;
      ++j;
    }
  }
  scratch.insert(scratch.end(), a.begin() + i, a.end());
  scratch.insert(scratch.end(), b.begin() + j, b.end());
  a.swap(scratch);
}

}  // namespace

uint64_t rank_sparse(const SparseF2& m) {
  if (m.rows == 0 || m.cols == 0) return 0;
  std::vector<int64_t> pivot_of_row(m.rows, -1);
  std::vector<std::vector<uint32_t>> pivot_cols;
  pivot_cols.reserve(std::min(m.rows, m.cols));

  // Lighter columns first keeps the stored pivots small.
  std::vector<uint32_t> order(m.cols);
  for (uint64_t c = 0; c < m.cols; ++c) order[c] = static_cast<uint32_t>(c);
  std::stable_sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    return m.col_size(a) < m.col_size(b);
  });

  uint64_t rank = 0;
  std::vector<uint32_t> work, scratch;
  for (uint32_t c : order) {
    work.assign(m.col_begin(c), m.col_end(c));
    while (!work.empty()) {
      uint32_t r = work.front();
      int64_t p = pivot_of_row[r];
      if (p < 0) {
        pivot_of_row[r] = static_cast<int64_t>(pivot_cols.size());
        pivot_cols.push_back(work);
        ++rank;
        break;
      }
      xor_into(work, pivot_cols[static_cast<size_t>(p)], scratch);
    }
  }
  return rank;
}

uint64_t rank_f2(const SparseF2& m) {
  if (m.rows == 0 || m.cols == 0 || m.nnz() == 0) return 0;
  // Packed size budget: 16 MiB of words.
  const uint64_t words = (m.cols + 63) / 64;
  if (m.rows * words <= (uint64_t{16} << 20) / 8) return rank_bitpacked(m);
  return rank_sparse(m);
}

}  // namespace rp3kh
