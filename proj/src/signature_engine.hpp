#pragma once

// Internal: level-by-level computation of iterated degree statistics over
// the merged vertex set of both bipartite graphs of one instance.  Sharing
// one interning pool across all four vertex families makes statistic
// equality an integer comparison while staying exactly equivalent to
// comparing canonical payload bytes (the interning key is injective).

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "unshred/degstats.hpp"

namespace unshred {

class SignatureEngine {
 public:
  explicit SignatureEngine(const InstanceGraphs& graphs);

  uint32_t n() const { return n_; }
  uint32_t computed_depth() const {
    return static_cast<uint32_t>(colors_.size()) - 1;
  }
  void ensure_depth(uint32_t k);

  // Merged vertex numbering: row values, column indices, column values,
  // row indices at offsets 0, n, 2n, 3n.
  uint32_t merged_vertex(GraphSide side, Orientation orient,
                         uint32_t v) const;

  // Interned statistic id; equal ids <=> byte-identical payloads, across
  // every view of this engine.  Requires ensure_depth(level) first.
  uint32_t color(uint32_t merged_v, uint32_t level) const {
    return colors_[level][merged_v];
  }

  void append_payload(uint32_t node_id, std::vector<uint8_t>& out) const;
  Digest128 node_digest(uint32_t node_id) const;

 private:
  struct Node {
    uint32_t level;
    uint64_t degree = 0;             // leaf payload (level 0)
    std::vector<uint32_t> children;  // node ids in canonical byte order
    uint32_t rank = 0;               // byte-order rank within its level
  };

  struct VecHash {
    size_t operator()(const std::vector<uint32_t>& v) const {
      uint64_t h = 1469598103934665603ull;
      for (uint32_t x : v) {
        h ^= x;
        h *= 1099511628211ull;
      }
      return static_cast<size_t>(h);
    }
  };

  void build_next_level();

  uint32_t n_ = 0;
  std::vector<std::vector<uint32_t>> adj_;     // merged adjacency (4n)
  std::vector<Node> nodes_;
  std::vector<std::vector<uint32_t>> colors_;  // level -> merged vertex -> id
  std::unordered_map<uint64_t, uint32_t> leaf_intern_;
  std::unordered_map<std::vector<uint32_t>, uint32_t, VecHash> level_intern_;
};

}  // namespace unshred
