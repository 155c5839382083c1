#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "unshred/bits.hpp"

namespace unshred {

// Square binary matrix with an eagerly maintained transpose: row i is a
// BitVec over column positions and col j a BitVec over row positions.
// Instances are immutable once constructed, so concurrent reads are safe.
class BitMatrix {
 public:
  explicit BitMatrix(std::vector<BitVec> rows);

  uint32_t n() const { return n_; }
  const BitVec& row(uint32_t i) const { return rows_[i]; }
  const BitVec& col(uint32_t j) const { return cols_[j]; }
  const std::vector<BitVec>& rows() const { return rows_; }
  const std::vector<BitVec>& cols() const { return cols_; }
  bool get(uint32_t i, uint32_t j) const { return rows_[i].get(j); }

  uint64_t total_ones() const;

  bool operator==(const BitMatrix& o) const { return rows_ == o.rows_; }
  bool operator!=(const BitMatrix& o) const { return !(*this == o); }

 private:
  uint32_t n_ = 0;
  std::vector<BitVec> rows_;
  std::vector<BitVec> cols_;
};

// The multisets of rows and columns of a square binary matrix, each kept
// in canonical (lexicographic, first-bit-most-significant) sorted order.
// Construction sorts and validates; the ones budget of the two sides must
// agree or the instance cannot come from any matrix.
class ShreddedInstance {
 public:
  ShreddedInstance(uint32_t n, std::vector<BitVec> rows,
                   std::vector<BitVec> cols);

  uint32_t n() const { return n_; }
  const std::vector<BitVec>& rows() const { return rows_; }
  const std::vector<BitVec>& cols() const { return cols_; }
  uint64_t total_ones() const { return total_ones_; }

  bool operator==(const ShreddedInstance& o) const {
    return n_ == o.n_ && rows_ == o.rows_ && cols_ == o.cols_;
  }
  bool operator!=(const ShreddedInstance& o) const { return !(*this == o); }

 private:
  uint32_t n_ = 0;
  uint64_t total_ones_ = 0;
  std::vector<BitVec> rows_;
  std::vector<BitVec> cols_;
};

// Forgets where each line sat: reordering rows preserves the row multiset
// and reordering columns the column multiset (the other side's strings
// change equivariantly, so completion counts — and thus reconstructibility
// verdicts — are preserved under any joint permutation).
ShreddedInstance shred(const BitMatrix& m);

struct SampleParams {
  uint32_t n = 0;
  double p = 0.0;  // in [0, 1]
  uint64_t seed = 0;
};

// Samples each entry independently with probability p, drawing entries in
// row-major order from a std::mt19937_64 seeded with params.seed (one
// 64-bit draw per entry, compared against a fixed threshold).  The same
// params always produce the same matrix on every platform.
BitMatrix sample_matrix(const SampleParams& params);

// Rows reordered by row_perm and columns by col_perm:
// result(i, j) = m(row_perm[i], col_perm[j]).
BitMatrix permute(const BitMatrix& m, const std::vector<uint32_t>& row_perm,
                  const std::vector<uint32_t>& col_perm);

}  // namespace unshred
