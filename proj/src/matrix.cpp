#include "unshred/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace unshred {

namespace {

// Transposes n lines of n bits via 64x64 blocks; edge blocks are padded
// with zero rows, which keeps the tail bits of the output zero.
std::vector<BitVec> transpose_lines(const std::vector<BitVec>& lines,
                                    uint32_t n) {
  std::vector<BitVec> out(n, BitVec(n));
  const size_t blocks = (n + 63) / 64;
  uint64_t tile[64];
  for (size_t bi = 0; bi < blocks; ++bi) {
    for (size_t bj = 0; bj < blocks; ++bj) {
      for (uint32_t t = 0; t < 64; ++t) {
        const size_t i = bi * 64 + t;
        tile[t] = i < n ? lines[i].word(bj) : 0;
      }
      transpose64(tile);
      for (uint32_t t = 0; t < 64; ++t) {
        const size_t j = bj * 64 + t;
        if (j < n) out[j].set_word(bi, tile[t]);
      }
    }
  }
  return out;
}

}  // namespace

BitMatrix::BitMatrix(std::vector<BitVec> rows)
    : n_(static_cast<uint32_t>(rows.size())), rows_(std::move(rows)) {
  for (const BitVec& r : rows_) {
    if (r.size() != n_)
      throw std::invalid_argument("matrix rows must have length n");
  }
  cols_ = transpose_lines(rows_, n_);
}

uint64_t BitMatrix::total_ones() const {
  uint64_t total = 0;
  for (const BitVec& r : rows_) total += r.popcount();
  return total;
}

ShreddedInstance::ShreddedInstance(uint32_t n, std::vector<BitVec> rows,
                                   std::vector<BitVec> cols)
    : n_(n), rows_(std::move(rows)), cols_(std::move(cols)) {
  if (rows_.size() != n_ || cols_.size() != n_)
    throw std::invalid_argument("instance needs n rows and n cols");
  uint64_t row_ones = 0, col_ones = 0;
  for (const BitVec& r : rows_) {
    if (r.size() != n_)
      throw std::invalid_argument("instance lines must have length n");
    row_ones += r.popcount();
  }
  for (const BitVec& c : cols_) {
    if (c.size() != n_)
      throw std::invalid_argument("instance lines must have length n");
    col_ones += c.popcount();
  }
  if (row_ones != col_ones)
    throw std::invalid_argument(
        "row and column multisets disagree on the number of ones");
  total_ones_ = row_ones;
  std::sort(rows_.begin(), rows_.end());
  std::sort(cols_.begin(), cols_.end());
}

ShreddedInstance shred(const BitMatrix& m) {
  return ShreddedInstance(m.n(), m.rows(), m.cols());
}

BitMatrix sample_matrix(const SampleParams& params) {
  if (params.p < 0.0 || params.p > 1.0)
    throw std::invalid_argument("sample probability must lie in [0, 1]");
  const uint32_t n = params.n;
  std::mt19937_64 rng(params.seed);
  // P(bit) = floor(p * 2^64) / 2^64, exact for p = 0 and within 2^-53 of
  // p otherwise; p = 1 is handled separately since 2^64 overflows.
  const bool all_ones = params.p == 1.0;
  const uint64_t threshold =
      all_ones ? 0 : static_cast<uint64_t>(std::ldexp(params.p, 64));
  std::vector<BitVec> rows(n, BitVec(n));
  for (uint32_t i = 0; i < n; ++i) {
    for (size_t w = 0; w * 64 < n; ++w) {
      uint64_t word = 0;
      const uint32_t hi = std::min<uint32_t>(64, n - static_cast<uint32_t>(w) * 64);
      for (uint32_t k = 0; k < hi; ++k) {
        const uint64_t draw = rng();
        if (all_ones || draw < threshold) word |= uint64_t{1} << k;
      }
      rows[i].set_word(w, word);
    }
  }
  return BitMatrix(std::move(rows));
}

BitMatrix permute(const BitMatrix& m, const std::vector<uint32_t>& row_perm,
                  const std::vector<uint32_t>& col_perm) {
  const uint32_t n = m.n();
  if (row_perm.size() != n || col_perm.size() != n)
    throw std::invalid_argument("permutations must have length n");
  std::vector<BitVec> rows(n, BitVec(n));
  for (uint32_t i = 0; i < n; ++i) {
    const BitVec& src = m.row(row_perm[i]);
    for (uint32_t j = 0; j < n; ++j)
      if (src.get(col_perm[j])) rows[i].set(j);
  }
  return BitMatrix(std::move(rows));
}

}  // namespace unshred
