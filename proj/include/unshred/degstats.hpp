#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "unshred/matrix.hpp"

namespace unshred {

// The two bipartite graphs a shredded instance determines.  The value-side
// graph joins each row value to the column positions where it has a 1; the
// index-side graph joins each row index to the column values with a 1 at
// that index.  Both are isomorphic to the bipartite adjacency graph of the
// underlying matrix, which is what makes iterated degree statistics
// comparable across the two sides.
enum class GraphSide : uint8_t { value_side, index_side };
enum class Orientation : uint8_t { row, column };

struct BipartiteAdjacency {
  std::vector<std::vector<uint32_t>> value_nbrs;  // line slot -> positions
  std::vector<std::vector<uint32_t>> index_nbrs;  // position  -> line slots
};

BipartiteAdjacency build_adjacency(const std::vector<BitVec>& lines);

class SignatureEngine;

// Owns the adjacency of both graphs plus a shared signature engine so that
// payload comparisons across views are exact.  Immutable after
// construction except for lazily extending signature depth, which is not
// thread safe; concurrent use requires one InstanceGraphs per thread.
class InstanceGraphs {
 public:
  explicit InstanceGraphs(const ShreddedInstance& inst);
  explicit InstanceGraphs(const BitMatrix& m);  // slots keep matrix order
  ~InstanceGraphs();
  InstanceGraphs(InstanceGraphs&&) noexcept;

  uint32_t n() const { return n_; }
  const BipartiteAdjacency& row_graph() const { return rows_; }  // value side
  const BipartiteAdjacency& col_graph() const { return cols_; }  // index side
  SignatureEngine& engine() const;

 private:
  uint32_t n_ = 0;
  BipartiteAdjacency rows_;
  BipartiteAdjacency cols_;
  mutable std::unique_ptr<SignatureEngine> engine_;
};

// One of the four vertex families: (value_side, row) are row values,
// (value_side, column) column indices, (index_side, row) row indices and
// (index_side, column) column values.
struct GraphView {
  const InstanceGraphs* owner = nullptr;
  GraphSide side = GraphSide::value_side;
  Orientation orient = Orientation::row;

  uint32_t n() const { return owner->n(); }
  std::span<const uint32_t> neighbors(uint32_t v) const;
  uint32_t degree(uint32_t v) const {
    return static_cast<uint32_t>(neighbors(v).size());
  }
};

struct Digest128 {
  uint64_t hi = 0;
  uint64_t lo = 0;
  auto operator<=>(const Digest128&) const = default;
};

// Iterated degree statistic of one vertex.  Depth 0 is the vertex degree;
// depth k+1 is the multiset of the neighbors' depth-k statistics.  The
// payload is a canonical byte encoding:
//   leaf:     0x00 then the degree as 8 big-endian bytes
//   internal: 0x01 then the child count as 4 big-endian bytes, then the
//             child encodings concatenated in ascending byte order
// Two signatures are equal exactly when their payloads are byte identical;
// the digest is a 128-bit FNV-1a over the payload and is only a bucketing
// hint, never an authority.
class SignatureTree {
 public:
  SignatureTree(uint32_t depth, std::vector<uint8_t> payload);

  uint32_t depth() const { return depth_; }
  const std::vector<uint8_t>& payload() const { return payload_; }
  Digest128 digest() const { return digest_; }
  // Degree of the root vertex: the leaf value at depth 0, else the child
  // count, which are the same number by construction.
  uint64_t root_degree() const;

  bool operator==(const SignatureTree& o) const {
    return payload_ == o.payload_;
  }

 private:
  uint32_t depth_ = 0;
  std::vector<uint8_t> payload_;
  Digest128 digest_;
};

inline constexpr uint32_t kMaxSignatureDepth = 3;

// Statistic of one vertex of a view.  k must not exceed
// kMaxSignatureDepth and vertex must be < view.n().
SignatureTree degree_statistic(const GraphView& view, uint32_t vertex,
                               uint32_t k);

// All vertices of the view bucketed by their depth-k statistic.  Vertices
// sharing a bucket have byte-identical payloads (bucketing is done on the
// exact statistic, the digest key is derived from it afterwards).
std::map<Digest128, std::vector<uint32_t>> signature_table(
    const GraphView& view, uint32_t k);

Digest128 fnv128(std::span<const uint8_t> bytes);

// Upper bound on the probability that two i.i.d. multisets of d draws
// collide when no single outcome has probability above p0: the minimum of
// (2 pi d + 2)^(1/2) / (2 pi p0 d + 1)^(1/(2 p0)) and, when p0 * d <= 1,
// the simpler d! * p0^d, clamped to [0, 1].
double multiset_collision_bound(uint64_t d, double p0);

// Largest point probability of Binomial(m, q); the p0 to feed into
// multiset_collision_bound for binomial draws.
double binomial_max_point_probability(uint32_t m, double q);

}  // namespace unshred
