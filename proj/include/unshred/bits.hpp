#pragma once

#include <bit>
#include <cstdint>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace unshred {

// Fixed-length bit vector packed into 64-bit words, bit j stored at
// words[j / 64] bit position (j % 64).  Bits past size() in the last word
// are kept zero at all times; every mutator below preserves that.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(uint32_t n_bits)
      : n_bits_(n_bits), words_((n_bits + 63) / 64, 0) {}

  uint32_t size() const { return n_bits_; }
  size_t word_count() const { return words_.size(); }
  const uint64_t* words() const { return words_.data(); }
  uint64_t word(size_t w) const { return words_[w]; }

  bool get(uint32_t j) const {
    return (words_[j >> 6] >> (j & 63)) & 1u;
  }
  void set(uint32_t j) { words_[j >> 6] |= uint64_t{1} << (j & 63); }
  void clear(uint32_t j) { words_[j >> 6] &= ~(uint64_t{1} << (j & 63)); }
  void set_word(size_t w, uint64_t v) { words_[w] = v; }

  uint32_t popcount() const {
    uint64_t total = 0;
    for (uint64_t w : words_) total += std::popcount(w);
    return static_cast<uint32_t>(total);
  }

  bool is_zero() const {
    for (uint64_t w : words_)
      if (w) return false;
    return true;
  }

  // Calls f(j) for every set bit, in increasing order of j.
  template <typename F>
  void for_each_set(F&& f) const {
    for (size_t w = 0; w < words_.size(); ++w) {
      uint64_t bits = words_[w];
      while (bits) {
        uint32_t k = static_cast<uint32_t>(std::countr_zero(bits));
        f(static_cast<uint32_t>(w * 64 + k));
        bits &= bits - 1;
      }
    }
  }

  std::vector<uint32_t> set_bits() const {
    std::vector<uint32_t> out;
    out.reserve(popcount());
    for_each_set([&](uint32_t j) { out.push_back(j); });
    return out;
  }

  bool operator==(const BitVec& o) const {
    return n_bits_ == o.n_bits_ && words_ == o.words_;
  }
  bool operator!=(const BitVec& o) const { return !(*this == o); }

  // Lexicographic order on the bit string b_0 b_1 ... b_{n-1}: the first
  // position where the vectors differ decides, and the vector with a 0
  // there sorts first ("01" < "10").
  bool lex_less(const BitVec& o) const {
    for (size_t w = 0; w < words_.size(); ++w) {
      uint64_t x = words_[w] ^ o.words_[w];
      if (x) {
        uint32_t k = static_cast<uint32_t>(std::countr_zero(x));
        return ((o.words_[w] >> k) & 1u) != 0;
      }
    }
    return false;
  }
  bool operator<(const BitVec& o) const { return lex_less(o); }

  std::string to_string() const {
    std::string s(n_bits_, '0');
    for_each_set([&](uint32_t j) { s[j] = '1'; });
    return s;
  }

  static BitVec from_string(const std::string& s) {
    BitVec v(static_cast<uint32_t>(s.size()));
    for (uint32_t j = 0; j < s.size(); ++j) {
      if (s[j] == '1')
        v.set(j);
      else if (s[j] != '0')
        throw std::invalid_argument("bit string may contain only 0 and 1");
    }
    return v;
  }

 private:
  uint32_t n_bits_ = 0;
  std::vector<uint64_t> words_;
};

// In-place transpose of a 64x64 bit block, rows given as words with column
// j at bit position j.  Classic mask-and-shift network, in the
// main-diagonal form for this bit order: each round swaps the
// (rows k..k+j-1, columns k+j..) quadrant with its mirror below the
// diagonal.
inline void transpose64(uint64_t x[64]) {
  uint64_t m = 0x00000000FFFFFFFFull;
  for (uint32_t j = 32; j != 0; j >>= 1, m ^= m << j) {
    for (uint32_t k = 0; k < 64; k = (k + j + 1) & ~j) {
      uint64_t t = ((x[k] >> j) ^ x[k + j]) & m;
      x[k] ^= t << j;
      x[k + j] ^= t;
    }
  }
}

}  // namespace unshred
