#include "unshred/degstats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "signature_engine.hpp"
#include "unshred/errors.hpp"

namespace unshred {

BipartiteAdjacency build_adjacency(const std::vector<BitVec>& lines) {
  const uint32_t n = static_cast<uint32_t>(lines.size());
  BipartiteAdjacency adj;
  adj.value_nbrs.resize(n);
  adj.index_nbrs.resize(n);
  for (uint32_t slot = 0; slot < n; ++slot) {
    adj.value_nbrs[slot] = lines[slot].set_bits();
    for (uint32_t pos : adj.value_nbrs[slot]) adj.index_nbrs[pos].push_back(slot);
  }
  return adj;
}

InstanceGraphs::InstanceGraphs(const ShreddedInstance& inst)
    : n_(inst.n()),
      rows_(build_adjacency(inst.rows())),
      cols_(build_adjacency(inst.cols())) {}

InstanceGraphs::InstanceGraphs(const BitMatrix& m)
    : n_(m.n()),
      rows_(build_adjacency(m.rows())),
      cols_(build_adjacency(m.cols())) {}

InstanceGraphs::~InstanceGraphs() = default;
InstanceGraphs::InstanceGraphs(InstanceGraphs&&) noexcept = default;

SignatureEngine& InstanceGraphs::engine() const {
  if (!engine_) engine_ = std::make_unique<SignatureEngine>(*this);
  return *engine_;
}

std::span<const uint32_t> GraphView::neighbors(uint32_t v) const {
  if (v >= owner->n()) throw std::out_of_range("vertex outside view");
  const bool value_side = side == GraphSide::value_side;
  const bool row = orient == Orientation::row;
  const BipartiteAdjacency& g = value_side ? owner->row_graph() : owner->col_graph();
  // In the value-side graph rows are values; in the index-side graph rows
  // are indices (and symmetrically for columns).
  const std::vector<uint32_t>& nbrs = (value_side == row)
                                          ? g.value_nbrs[v]
                                          : g.index_nbrs[v];
  return {nbrs.data(), nbrs.size()};
}

// --- signature engine -----------------------------------------------------

SignatureEngine::SignatureEngine(const InstanceGraphs& graphs)
    : n_(graphs.n()) {
  adj_.resize(4ull * n_);
  const BipartiteAdjacency& gr = graphs.row_graph();
  const BipartiteAdjacency& gc = graphs.col_graph();
  for (uint32_t v = 0; v < n_; ++v) {
    // Row value -> column indices.
    adj_[v].reserve(gr.value_nbrs[v].size());
    for (uint32_t u : gr.value_nbrs[v]) adj_[v].push_back(n_ + u);
    // Column index -> row values.
    adj_[n_ + v].reserve(gr.index_nbrs[v].size());
    for (uint32_t u : gr.index_nbrs[v]) adj_[n_ + v].push_back(u);
    // Column value -> row indices.
    adj_[2ull * n_ + v].reserve(gc.value_nbrs[v].size());
    for (uint32_t u : gc.value_nbrs[v]) adj_[2ull * n_ + v].push_back(3ull * n_ + u);
    // Row index -> column values.
    adj_[3ull * n_ + v].reserve(gc.index_nbrs[v].size());
    for (uint32_t u : gc.index_nbrs[v]) adj_[3ull * n_ + v].push_back(2ull * n_ + u);
  }

  // Level 0: interned degrees.  Leaf encodings order by numeric degree.
  std::vector<uint32_t> level(adj_.size());
  for (size_t v = 0; v < adj_.size(); ++v) {
    const uint64_t deg = adj_[v].size();
    auto [it, fresh] = leaf_intern_.try_emplace(
        deg, static_cast<uint32_t>(nodes_.size()));
    if (fresh) nodes_.push_back(Node{0, deg, {}, 0});
    level[v] = it->second;
  }
  std::vector<uint32_t> ids;
  for (auto& [deg, id] : leaf_intern_) ids.push_back(id);
  std::sort(ids.begin(), ids.end(), [&](uint32_t a, uint32_t b) {
    return nodes_[a].degree < nodes_[b].degree;
  });
  for (uint32_t r = 0; r < ids.size(); ++r) nodes_[ids[r]].rank = r;
  colors_.push_back(std::move(level));
}

void SignatureEngine::ensure_depth(uint32_t k) {
  if (k > kMaxSignatureDepth)
    throw std::invalid_argument("signature depth above supported maximum");
  while (computed_depth() < k) build_next_level();
}

void SignatureEngine::build_next_level() {
  const std::vector<uint32_t>& prev = colors_.back();
  const uint32_t first_new = static_cast<uint32_t>(nodes_.size());
  level_intern_.clear();  // keys of the previous level are never reused
  std::vector<uint32_t> level(adj_.size());
  std::vector<uint32_t> children;
  for (size_t v = 0; v < adj_.size(); ++v) {
    children.clear();
    children.reserve(adj_[v].size());
    for (uint32_t u : adj_[v]) children.push_back(prev[u]);
    std::sort(children.begin(), children.end(),
              [&](uint32_t a, uint32_t b) {
                return nodes_[a].rank < nodes_[b].rank;
              });
    auto [it, fresh] = level_intern_.try_emplace(
        children, static_cast<uint32_t>(nodes_.size()));
    if (fresh)
      nodes_.push_back(Node{static_cast<uint32_t>(colors_.size()), 0,
                            children, 0});
    level[v] = it->second;
  }
  // Byte order of this level: child count first (big-endian length
  // prefix), then the children, whose own byte order is their rank order
  // from the level below.  Encodings are prefix-free, so this pairwise
  // comparison is exactly the comparison of encoded bytes.
  std::vector<uint32_t> ids;
  for (uint32_t id = first_new; id < nodes_.size(); ++id) ids.push_back(id);
  std::sort(ids.begin(), ids.end(), [&](uint32_t a, uint32_t b) {
    const Node& na = nodes_[a];
    const Node& nb = nodes_[b];
    if (na.children.size() != nb.children.size())
      return na.children.size() < nb.children.size();
    for (size_t i = 0; i < na.children.size(); ++i) {
      const uint32_t ra = nodes_[na.children[i]].rank;
      const uint32_t rb = nodes_[nb.children[i]].rank;
      if (ra != rb) return ra < rb;
    }
    return false;
  });
  for (uint32_t r = 0; r < ids.size(); ++r) nodes_[ids[r]].rank = r;
  colors_.push_back(std::move(level));
}

uint32_t SignatureEngine::merged_vertex(GraphSide side, Orientation orient,
                                        uint32_t v) const {
  if (v >= n_) throw std::out_of_range("vertex outside view");
  const bool value_side = side == GraphSide::value_side;
  const bool row = orient == Orientation::row;
  if (value_side) return row ? v : n_ + v;
  return row ? 3 * n_ + v : 2 * n_ + v;
}

namespace {

void append_be64(uint64_t x, std::vector<uint8_t>& out) {
  for (int s = 56; s >= 0; s -= 8) out.push_back(uint8_t(x >> s));
}

void append_be32(uint32_t x, std::vector<uint8_t>& out) {
  for (int s = 24; s >= 0; s -= 8) out.push_back(uint8_t(x >> s));
}

using u128 = unsigned __int128;
constexpr u128 fnv_offset() {
  return (u128{0x6c62272e07bb0142ull} << 64) | 0x62b821756295c58dull;
}
constexpr u128 fnv_prime() {
  return (u128{0x0000000001000000ull} << 64) | 0x000000000000013Bull;
}

struct Fnv128 {
  u128 state = fnv_offset();
  void eat(uint8_t b) {
    state ^= b;
    state *= fnv_prime();
  }
  void eat_be64(uint64_t x) {
    for (int s = 56; s >= 0; s -= 8) eat(uint8_t(x >> s));
  }
  void eat_be32(uint32_t x) {
    for (int s = 24; s >= 0; s -= 8) eat(uint8_t(x >> s));
  }
  Digest128 digest() const {
    return Digest128{static_cast<uint64_t>(state >> 64),
                     static_cast<uint64_t>(state)};
  }
};

}  // namespace

void SignatureEngine::append_payload(uint32_t node_id,
                                     std::vector<uint8_t>& out) const {
  const Node& node = nodes_[node_id];
  if (node.level == 0) {
    out.push_back(0x00);
    append_be64(node.degree, out);
    return;
  }
  out.push_back(0x01);
  append_be32(static_cast<uint32_t>(node.children.size()), out);
  for (uint32_t child : node.children) append_payload(child, out);
}

Digest128 SignatureEngine::node_digest(uint32_t node_id) const {
  // Streams the same bytes append_payload would produce.
  Fnv128 h;
  auto walk = [&](auto&& self, uint32_t id) -> void {
    const Node& node = nodes_[id];
    if (node.level == 0) {
      h.eat(0x00);
      h.eat_be64(node.degree);
      return;
    }
    h.eat(0x01);
    h.eat_be32(static_cast<uint32_t>(node.children.size()));
    for (uint32_t child : node.children) self(self, child);
  };
  walk(walk, node_id);
  return h.digest();
}

// --- public statistic operations -------------------------------------------

SignatureTree::SignatureTree(uint32_t depth, std::vector<uint8_t> payload)
    : depth_(depth), payload_(std::move(payload)) {
  digest_ = fnv128(payload_);
}

uint64_t SignatureTree::root_degree() const {
  if (payload_.empty()) throw internal_error("empty signature payload");
  if (payload_[0] == 0x00) {
    uint64_t d = 0;
    for (int i = 1; i <= 8; ++i) d = (d << 8) | payload_[i];
    return d;
  }
  uint32_t c = 0;
  for (int i = 1; i <= 4; ++i) c = (c << 8) | payload_[i];
  return c;
}

Digest128 fnv128(std::span<const uint8_t> bytes) {
  Fnv128 h;
  for (uint8_t b : bytes) h.eat(b);
  return h.digest();
}

SignatureTree degree_statistic(const GraphView& view, uint32_t vertex,
                               uint32_t k) {
  if (k > kMaxSignatureDepth)
    throw std::invalid_argument("signature depth above supported maximum");
  SignatureEngine& engine = view.owner->engine();
  if (vertex >= engine.n()) throw std::out_of_range("vertex outside view");
  engine.ensure_depth(k);
  const uint32_t id =
      engine.color(engine.merged_vertex(view.side, view.orient, vertex), k);
  std::vector<uint8_t> payload;
  engine.append_payload(id, payload);
  return SignatureTree(k, std::move(payload));
}

std::map<Digest128, std::vector<uint32_t>> signature_table(
    const GraphView& view, uint32_t k) {
  if (k > kMaxSignatureDepth)
    throw std::invalid_argument("signature depth above supported maximum");
  SignatureEngine& engine = view.owner->engine();
  engine.ensure_depth(k);
  std::map<uint32_t, std::vector<uint32_t>> by_color;
  for (uint32_t v = 0; v < engine.n(); ++v) {
    const uint32_t id =
        engine.color(engine.merged_vertex(view.side, view.orient, v), k);
    by_color[id].push_back(v);
  }
  std::map<Digest128, std::vector<uint32_t>> table;
  for (auto& [id, vertices] : by_color) {
    std::vector<uint32_t>& bucket = table[engine.node_digest(id)];
    bucket.insert(bucket.end(), vertices.begin(), vertices.end());
  }
  for (auto& [digest, vertices] : table)
    std::sort(vertices.begin(), vertices.end());
  return table;
}

// --- collision bound --------------------------------------------------------

double multiset_collision_bound(uint64_t d, double p0) {
  if (d == 0) throw std::invalid_argument("multiset size must be positive");
  if (!(p0 > 0.0) || p0 > 1.0)
    throw std::invalid_argument("point probability must lie in (0, 1]");
  const double dd = static_cast<double>(d);
  const double two_pi = 2.0 * 3.14159265358979323846;
  double bound = std::exp(0.5 * std::log(two_pi * dd + 2.0) -
                          std::log(two_pi * p0 * dd + 1.0) / (2.0 * p0));
  if (p0 * dd <= 1.0) {
    const double simple =
        std::exp(std::lgamma(dd + 1.0) + dd * std::log(p0));
    bound = std::min(bound, simple);
  }
  return std::min(bound, 1.0);
}

double binomial_max_point_probability(uint32_t m, double q) {
  if (!(q >= 0.0) || q > 1.0)
    throw std::invalid_argument("q must lie in [0, 1]");
  if (q == 0.0 || q == 1.0) return 1.0;
  // The binomial pmf is unimodal with mode floor((m + 1) q).
  const uint32_t mode = std::min<uint32_t>(
      m, static_cast<uint32_t>(std::floor((m + 1) * q)));
  const double lg = std::lgamma(m + 1.0) - std::lgamma(mode + 1.0) -
                    std::lgamma(m - mode + 1.0) + mode * std::log(q) +
                    (m - mode) * std::log1p(-q);
  return std::exp(lg);
}

}  // namespace unshred
