#include "unshred/reconstruct.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "placement_state.hpp"
#include "signature_engine.hpp"

namespace unshred {

// --- PartialAssignment ------------------------------------------------------

void PartialAssignment::place_row(uint32_t slot, uint32_t pos, Placement how) {
  if (slot >= n_ || pos >= n_)
    throw std::out_of_range("row placement outside the assignment");
  if (row_pos_of_slot_[slot] >= 0 || row_slot_at_[pos] >= 0)
    throw internal_error("row slot or position placed twice");
  row_pos_of_slot_[slot] = pos;
  row_slot_at_[pos] = slot;
  row_how_[slot] = how;
  ++placed_rows_;
}

void PartialAssignment::place_col(uint32_t slot, uint32_t pos, Placement how) {
  if (slot >= n_ || pos >= n_)
    throw std::out_of_range("column placement outside the assignment");
  if (col_pos_of_slot_[slot] >= 0 || col_slot_at_[pos] >= 0)
    throw internal_error("column slot or position placed twice");
  col_pos_of_slot_[slot] = pos;
  col_slot_at_[pos] = slot;
  col_how_[slot] = how;
  ++placed_cols_;
}

void PartialAssignment::unplace_row(uint32_t slot) {
  const int64_t pos = row_pos_of_slot_[slot];
  if (pos < 0) throw internal_error("unplacing a row slot that is not placed");
  row_pos_of_slot_[slot] = kUnplaced;
  row_slot_at_[pos] = kUnplaced;
  row_how_[slot] = Placement::none;
  --placed_rows_;
}

void PartialAssignment::unplace_col(uint32_t slot) {
  const int64_t pos = col_pos_of_slot_[slot];
  if (pos < 0)
    throw internal_error("unplacing a column slot that is not placed");
  col_pos_of_slot_[slot] = kUnplaced;
  col_slot_at_[pos] = kUnplaced;
  col_how_[slot] = Placement::none;
  --placed_cols_;
}

bool PartialAssignment::consistent_with(const ShreddedInstance& inst) const {
  if (inst.n() != n_) return false;
  for (uint32_t a = 0; a < n_; ++a) {
    const int64_t i = row_pos_of_slot_[a];
    if (i < 0) continue;
    for (uint32_t b = 0; b < n_; ++b) {
      const int64_t j = col_pos_of_slot_[b];
      if (j < 0) continue;
      if (inst.rows()[a].get(static_cast<uint32_t>(j)) !=
          inst.cols()[b].get(static_cast<uint32_t>(i)))
        return false;
    }
  }
  return true;
}

// --- scalar statistics --------------------------------------------------------

double estimate_p(const ShreddedInstance& inst) {
  const double n = inst.n();
  if (n == 0) return 0.0;
  return static_cast<double>(inst.total_ones()) / (n * n);
}

HeavyLightSplit heavy_light_labels(const ShreddedInstance& inst) {
  HeavyLightSplit split;
  split.threshold = 0.5 * inst.n() * estimate_p(inst);
  split.heavy_rows.reserve(inst.n());
  split.heavy_cols.reserve(inst.n());
  for (const BitVec& r : inst.rows())
    split.heavy_rows.push_back(r.popcount() >= split.threshold);
  for (const BitVec& c : inst.cols())
    split.heavy_cols.push_back(c.popcount() >= split.threshold);
  return split;
}

// --- phase 1: signature matching ---------------------------------------------

namespace {

Placement signature_provenance(uint32_t k) {
  switch (k) {
    case 1: return Placement::signature_k1;
    case 2: return Placement::signature_k2;
    case 3: return Placement::signature_k3;
  }
  throw internal_error("signature depth without a provenance tag");
}

// Places every (value, position) pair whose depth-k statistics are unique
// within their own side and equal across sides.  Color ids come from the
// shared engine, so id equality is byte equality of payloads.
uint32_t signature_pass(const InstanceGraphs& graphs, uint32_t k,
                        PartialAssignment& asg) {
  SignatureEngine& eng = graphs.engine();
  eng.ensure_depth(k);
  const uint32_t n = graphs.n();
  const Placement how = signature_provenance(k);
  uint32_t placed = 0;

  struct Tally {
    uint32_t count = 0;
    uint32_t vertex = 0;
  };
  const auto color_of = [&](GraphSide side, Orientation orient, uint32_t v) {
    return eng.color(eng.merged_vertex(side, orient, v), k);
  };
  const auto run = [&](GraphSide value_family, Orientation value_orient,
                       GraphSide pos_family, Orientation pos_orient,
                       auto value_placed, auto pos_placed, auto place) {
    std::map<uint32_t, Tally> values, positions;
    for (uint32_t v = 0; v < n; ++v) {
      Tally& t = values[color_of(value_family, value_orient, v)];
      ++t.count;
      t.vertex = v;
    }
    for (uint32_t i = 0; i < n; ++i) {
      Tally& t = positions[color_of(pos_family, pos_orient, i)];
      ++t.count;
      t.vertex = i;
    }
    for (const auto& [color, tv] : values) {
      if (tv.count != 1) continue;
      const auto it = positions.find(color);
      if (it == positions.end() || it->second.count != 1) continue;
      const uint32_t v = tv.vertex;
      const uint32_t i = it->second.vertex;
      if (value_placed(v) || pos_placed(i)) continue;
      place(v, i);
      ++placed;
    }
  };

  run(GraphSide::value_side, Orientation::row,    // row values
      GraphSide::index_side, Orientation::row,    // row positions
      [&](uint32_t v) { return asg.row_pos_of_slot(v) >= 0; },
      [&](uint32_t i) { return asg.row_slot_at(i) >= 0; },
      [&](uint32_t v, uint32_t i) { asg.place_row(v, i, how); });
  run(GraphSide::index_side, Orientation::column,  // column values
      GraphSide::value_side, Orientation::column,  // column positions
      [&](uint32_t v) { return asg.col_pos_of_slot(v) >= 0; },
      [&](uint32_t j) { return asg.col_slot_at(j) >= 0; },
      [&](uint32_t v, uint32_t j) { asg.place_col(v, j, how); });
  return placed;
}

}  // namespace

PartialAssignment match_by_signatures(const ShreddedInstance& inst,
                                      uint32_t k) {
  if (k < 1 || k > kMaxSignatureDepth)
    throw std::invalid_argument("signature depth must be 1, 2, or 3");
  InstanceGraphs graphs(inst);
  PartialAssignment asg(inst.n());
  signature_pass(graphs, k, asg);
  return asg;
}

// --- phase 2: fingerprint propagation ----------------------------------------

namespace detail {

PlacementState::PlacementState(const ShreddedInstance& instance,
                               const InstanceGraphs& instance_graphs,
                               PartialAssignment base)
    : inst(&instance),
      graphs(&instance_graphs),
      asg(std::move(base)),
      placed_rows(instance.n()),
      placed_cols(instance.n()) {
  const uint32_t n = instance.n();
  pin_col.assign(n, BitVec(n));
  pin_row.assign(n, BitVec(n));
  row_pos_degree.resize(n);
  col_pos_degree.resize(n);
  for (uint32_t i = 0; i < n; ++i)
    row_pos_degree[i] =
        static_cast<uint32_t>(graphs->col_graph().index_nbrs[i].size());
  for (uint32_t j = 0; j < n; ++j)
    col_pos_degree[j] =
        static_cast<uint32_t>(graphs->row_graph().index_nbrs[j].size());
  for (uint32_t i = 0; i < n; ++i) {
    const int64_t slot = asg.row_slot_at(i);
    if (slot >= 0) apply_row_pins(static_cast<uint32_t>(slot), i, true);
  }
  for (uint32_t j = 0; j < n; ++j) {
    const int64_t slot = asg.col_slot_at(j);
    if (slot >= 0) apply_col_pins(static_cast<uint32_t>(slot), j, true);
  }
}

void PlacementState::apply_row_pins(uint32_t slot, uint32_t pos, bool on) {
  if (on) {
    placed_rows.set(pos);
    inst->rows()[slot].for_each_set(
        [&](uint32_t j) { pin_col[j].set(pos); });
  } else {
    placed_rows.clear(pos);
    inst->rows()[slot].for_each_set(
        [&](uint32_t j) { pin_col[j].clear(pos); });
  }
}

void PlacementState::apply_col_pins(uint32_t slot, uint32_t pos, bool on) {
  if (on) {
    placed_cols.set(pos);
    inst->cols()[slot].for_each_set(
        [&](uint32_t i) { pin_row[i].set(pos); });
  } else {
    placed_cols.clear(pos);
    inst->cols()[slot].for_each_set(
        [&](uint32_t i) { pin_row[i].clear(pos); });
  }
}

void PlacementState::place_row(uint32_t slot, uint32_t pos, Placement how) {
  asg.place_row(slot, pos, how);
  apply_row_pins(slot, pos, true);
}

void PlacementState::place_col(uint32_t slot, uint32_t pos, Placement how) {
  asg.place_col(slot, pos, how);
  apply_col_pins(slot, pos, true);
}

void PlacementState::unplace_row(uint32_t slot, uint32_t pos) {
  asg.unplace_row(slot);
  apply_row_pins(slot, pos, false);
}

void PlacementState::unplace_col(uint32_t slot, uint32_t pos) {
  asg.unplace_col(slot);
  apply_col_pins(slot, pos, false);
}

bool PlacementState::row_fits(uint32_t slot, uint32_t pos) const {
  const BitVec& v = inst->rows()[slot];
  if (v.popcount() != row_pos_degree[pos]) return false;
  const BitVec& pin = pin_row[pos];
  for (size_t w = 0; w < v.word_count(); ++w)
    if ((v.word(w) & placed_cols.word(w)) != pin.word(w)) return false;
  return true;
}

bool PlacementState::col_fits(uint32_t slot, uint32_t pos) const {
  const BitVec& v = inst->cols()[slot];
  if (v.popcount() != col_pos_degree[pos]) return false;
  const BitVec& pin = pin_col[pos];
  for (size_t w = 0; w < v.word_count(); ++w)
    if ((v.word(w) & placed_rows.word(w)) != pin.word(w)) return false;
  return true;
}

BitMatrix assignment_matrix(const ShreddedInstance& inst,
                            const PartialAssignment& asg) {
  std::vector<BitVec> rows(asg.n());
  for (uint32_t i = 0; i < asg.n(); ++i) {
    const int64_t slot = asg.row_slot_at(i);
    if (slot < 0)
      throw internal_error("building a matrix from a partial assignment");
    rows[i] = inst.rows()[static_cast<size_t>(slot)];
  }
  return BitMatrix(std::move(rows));
}

namespace {

using Key = std::vector<uint64_t>;

void append_masked(const BitVec& v, const BitVec& mask, Key& out) {
  for (size_t w = 0; w < v.word_count(); ++w)
    out.push_back(v.word(w) & mask.word(w));
}

void append_words(const BitVec& v, Key& out) {
  for (size_t w = 0; w < v.word_count(); ++w) out.push_back(v.word(w));
}

Key flatten_sorted(std::vector<Key> parts) {
  std::sort(parts.begin(), parts.end());
  Key flat;
  size_t total = 0;
  for (const Key& p : parts) total += p.size();
  flat.reserve(total);
  for (const Key& p : parts) flat.insert(flat.end(), p.begin(), p.end());
  return flat;
}

// Second-level fingerprints: the multiset, over the crossing lines a value
// meets, of those lines' restrictions to the already placed lines.  The
// value side reads the restrictions off the pins; the position side reads
// them off the actual crossing values.  In any completion the two multisets
// of the value at a position coincide, so equal-and-unique placements stay
// forced.
Key row_deep_value_key(const PlacementState& st, uint32_t slot) {
  std::vector<Key> parts;
  const BitVec& v = st.inst->rows()[slot];
  parts.reserve(v.popcount());
  v.for_each_set([&](uint32_t j) {
    Key part;
    append_words(st.pin_col[j], part);
    parts.push_back(std::move(part));
  });
  return flatten_sorted(std::move(parts));
}

Key row_deep_position_key(const PlacementState& st, uint32_t pos) {
  std::vector<Key> parts;
  const auto& incident = st.graphs->col_graph().index_nbrs[pos];
  parts.reserve(incident.size());
  for (uint32_t c : incident) {
    Key part;
    append_masked(st.inst->cols()[c], st.placed_rows, part);
    parts.push_back(std::move(part));
  }
  return flatten_sorted(std::move(parts));
}

Key col_deep_value_key(const PlacementState& st, uint32_t slot) {
  std::vector<Key> parts;
  const BitVec& v = st.inst->cols()[slot];
  parts.reserve(v.popcount());
  v.for_each_set([&](uint32_t i) {
    Key part;
    append_words(st.pin_row[i], part);
    parts.push_back(std::move(part));
  });
  return flatten_sorted(std::move(parts));
}

Key col_deep_position_key(const PlacementState& st, uint32_t pos) {
  std::vector<Key> parts;
  const auto& incident = st.graphs->row_graph().index_nbrs[pos];
  parts.reserve(incident.size());
  for (uint32_t r : incident) {
    Key part;
    append_masked(st.inst->rows()[r], st.placed_cols, part);
    parts.push_back(std::move(part));
  }
  return flatten_sorted(std::move(parts));
}

struct Bucket {
  std::vector<uint32_t> slots;
  std::vector<uint32_t> positions;
};

// Settles one fingerprint class: a lone value facing a lone position is
// placed; a tie is refined by the second-level keys; a class of identical
// values covering exactly its positions is placed as a block when groups
// are allowed.
template <bool kRows>
uint32_t settle(PlacementState& st, const Bucket& b, bool allow_groups,
                bool allow_deep) {
  if (b.slots.empty() || b.positions.empty()) return 0;
  const auto place = [&](uint32_t slot, uint32_t pos, Placement how) {
    if constexpr (kRows)
      st.place_row(slot, pos, how);
    else
      st.place_col(slot, pos, how);
  };
  if (b.slots.size() == 1 && b.positions.size() == 1) {
    place(b.slots[0], b.positions[0],
          allow_deep ? Placement::fingerprint : Placement::fingerprint_deep);
    return 1;
  }
  if (allow_deep) {
    std::map<Key, Bucket> sub;
    for (uint32_t s : b.slots) {
      Key k = kRows ? row_deep_value_key(st, s) : col_deep_value_key(st, s);
      sub[std::move(k)].slots.push_back(s);
    }
    for (uint32_t i : b.positions) {
      Key k =
          kRows ? row_deep_position_key(st, i) : col_deep_position_key(st, i);
      sub[std::move(k)].positions.push_back(i);
    }
    if (sub.size() > 1) {
      uint32_t placed = 0;
      for (const auto& [key, s] : sub)
        placed += settle<kRows>(st, s, allow_groups, false);
      return placed;
    }
    // The refinement did not split the class; fall through to the group
    // rule on the original bucket.
  }
  if (allow_groups && b.slots.size() == b.positions.size()) {
    const auto& lines = kRows ? st.inst->rows() : st.inst->cols();
    bool identical = true;
    for (size_t t = 1; t < b.slots.size() && identical; ++t)
      identical = lines[b.slots[t]] == lines[b.slots[0]];
    if (identical) {
      for (size_t t = 0; t < b.slots.size(); ++t)
        place(b.slots[t], b.positions[t], Placement::duplicate_group);
      return static_cast<uint32_t>(b.slots.size());
    }
  }
  return 0;
}

template <bool kRows>
uint32_t fingerprint_pass(PlacementState& st, bool allow_groups) {
  const uint32_t n = st.n();
  const auto& lines = kRows ? st.inst->rows() : st.inst->cols();
  const BitVec& value_mask = kRows ? st.placed_cols : st.placed_rows;
  const auto& pos_degree = kRows ? st.row_pos_degree : st.col_pos_degree;
  const auto& pins = kRows ? st.pin_row : st.pin_col;

  std::map<Key, Bucket> buckets;
  for (uint32_t s = 0; s < n; ++s) {
    const bool placed = kRows ? st.asg.row_pos_of_slot(s) >= 0
                              : st.asg.col_pos_of_slot(s) >= 0;
    if (placed) continue;
    Key k;
    k.reserve(1 + lines[s].word_count());
    k.push_back(lines[s].popcount());
    append_masked(lines[s], value_mask, k);
    buckets[std::move(k)].slots.push_back(s);
  }
  for (uint32_t i = 0; i < n; ++i) {
    const bool placed =
        kRows ? st.asg.row_slot_at(i) >= 0 : st.asg.col_slot_at(i) >= 0;
    if (placed) continue;
    Key k;
    k.reserve(1 + pins[i].word_count());
    k.push_back(pos_degree[i]);
    append_words(pins[i], k);
    buckets[std::move(k)].positions.push_back(i);
  }

  uint32_t placed = 0;
  for (const auto& [key, b] : buckets)
    placed += settle<kRows>(st, b, allow_groups, true);
  return placed;
}

}  // namespace

uint32_t fingerprint_fixpoint(PlacementState& st, bool allow_groups,
                              uint32_t* rounds_out) {
  const uint32_t round_cap = 2 * st.n() + 2;
  uint32_t total = 0;
  uint32_t rounds = 0;
  while (!st.asg.is_total()) {
    const uint32_t placed = fingerprint_pass<true>(st, allow_groups) +
                            fingerprint_pass<false>(st, allow_groups);
    if (placed == 0) break;
    total += placed;
    if (++rounds > round_cap)
      throw internal_error("fingerprint fixpoint failed to converge");
  }
  if (rounds_out) *rounds_out = rounds;
  return total;
}

}  // namespace detail

PartialAssignment propagate_fingerprints(const ShreddedInstance& inst,
                                         PartialAssignment partial) {
  if (partial.n() != inst.n())
    throw std::invalid_argument("assignment size does not match the instance");
  InstanceGraphs graphs(inst);
  detail::PlacementState st(inst, graphs, std::move(partial));
  detail::fingerprint_fixpoint(st, /*allow_groups=*/false, nullptr);
  return std::move(st.asg);
}

// --- obstruction detectors ----------------------------------------------------

std::vector<IsolatedOnePairing> detect_isolated_ones(
    const ShreddedInstance& inst) {
  const uint32_t n = inst.n();
  std::vector<uint32_t> coldeg(n, 0), rowdeg(n, 0);
  for (const BitVec& r : inst.rows())
    r.for_each_set([&](uint32_t j) { ++coldeg[j]; });
  for (const BitVec& c : inst.cols())
    c.for_each_set([&](uint32_t i) { ++rowdeg[i]; });

  std::vector<uint32_t> iso_rows, iso_cols;
  for (uint32_t s = 0; s < n; ++s) {
    const BitVec& r = inst.rows()[s];
    if (r.popcount() == 1 && coldeg[r.set_bits()[0]] == 1)
      iso_rows.push_back(s);
  }
  for (uint32_t s = 0; s < n; ++s) {
    const BitVec& c = inst.cols()[s];
    if (c.popcount() == 1 && rowdeg[c.set_bits()[0]] == 1)
      iso_cols.push_back(s);
  }
  std::vector<IsolatedOnePairing> out;
  const size_t k = std::min(iso_rows.size(), iso_cols.size());
  out.reserve(k);
  for (size_t t = 0; t < k; ++t) out.push_back({iso_rows[t], iso_cols[t]});
  return out;
}

std::vector<std::pair<uint32_t, uint32_t>> detect_isolated_ones(
    const BitMatrix& m) {
  std::vector<std::pair<uint32_t, uint32_t>> out;
  for (uint32_t i = 0; i < m.n(); ++i) {
    if (m.row(i).popcount() != 1) continue;
    const uint32_t j = m.row(i).set_bits()[0];
    if (m.col(j).popcount() == 1) out.emplace_back(i, j);
  }
  return out;
}

DuplicateLines detect_duplicate_lines(const ShreddedInstance& inst) {
  DuplicateLines d;
  const auto adjacent_equal = [](const std::vector<BitVec>& lines) {
    for (size_t t = 1; t < lines.size(); ++t)
      if (lines[t] == lines[t - 1]) return true;
    return false;
  };
  d.rows = adjacent_equal(inst.rows());
  d.cols = adjacent_equal(inst.cols());
  return d;
}

// --- residual resolution --------------------------------------------------------

std::string ResidualReport::to_text() const {
  const auto line = [](const char* name, const std::vector<uint32_t>& xs) {
    std::string s = name;
    s += " (" + std::to_string(xs.size()) + "):";
    for (uint32_t x : xs) {
      s += ' ';
      s += std::to_string(x);
    }
    s += '\n';
    return s;
  };
  std::string out = "ambiguous residual\n";
  out += "note: " + note + "\n";
  out += "n: " + std::to_string(n) + "\n";
  out += line("unplaced_row_values", row_value_slots);
  out += line("unplaced_row_positions", row_positions);
  out += line("unplaced_col_values", col_value_slots);
  out += line("unplaced_col_positions", col_positions);
  return out;
}

namespace {

ResidualReport make_residual(const detail::PlacementState& st,
                             std::string note) {
  ResidualReport r;
  r.n = st.n();
  r.note = std::move(note);
  for (uint32_t s = 0; s < st.n(); ++s) {
    if (st.asg.row_pos_of_slot(s) < 0) r.row_value_slots.push_back(s);
    if (st.asg.col_pos_of_slot(s) < 0) r.col_value_slots.push_back(s);
  }
  for (uint32_t i = 0; i < st.n(); ++i) {
    if (st.asg.row_slot_at(i) < 0) r.row_positions.push_back(i);
    if (st.asg.col_slot_at(i) < 0) r.col_positions.push_back(i);
  }
  return r;
}

void tally_stats(const PartialAssignment& asg, ReconstructStats& stats) {
  stats.placed_by_signature = {0, 0, 0};
  stats.placed_by_fingerprint = 0;
  stats.placed_by_fingerprint_deep = 0;
  stats.placed_by_group = 0;
  const auto count = [&](Placement how) {
    switch (how) {
      case Placement::none: break;
      case Placement::signature_k1: ++stats.placed_by_signature[0]; break;
      case Placement::signature_k2: ++stats.placed_by_signature[1]; break;
      case Placement::signature_k3: ++stats.placed_by_signature[2]; break;
      case Placement::fingerprint: ++stats.placed_by_fingerprint; break;
      case Placement::fingerprint_deep:
        ++stats.placed_by_fingerprint_deep;
        break;
      case Placement::duplicate_group: ++stats.placed_by_group; break;
      case Placement::residual_search: ++stats.placed_by_search; break;
    }
  };
  for (uint32_t s = 0; s < asg.n(); ++s) {
    count(asg.row_provenance(s));
    count(asg.col_provenance(s));
  }
}

BitMatrix swap_rows(const BitMatrix& m, uint32_t i1, uint32_t i2) {
  std::vector<BitVec> rows = m.rows();
  std::swap(rows[i1], rows[i2]);
  return BitMatrix(std::move(rows));
}

ReconstructionResult ambiguous_result(const detail::PlacementState& st,
                                      std::string note,
                                      ReconstructStats stats) {
  ReconstructionResult r;
  r.tag = ReconstructionTag::ambiguous;
  r.residual = make_residual(st, std::move(note));
  r.stats = stats;
  return r;
}

ReconstructionResult unique_result(BitMatrix m, ReconstructStats stats) {
  ReconstructionResult r;
  r.tag = ReconstructionTag::unique;
  r.matrix = std::move(m);
  r.stats = stats;
  return r;
}

ReconstructionResult witness_result(BitMatrix a, BitMatrix b,
                                    ReconstructStats stats) {
  ReconstructionResult r;
  r.tag = ReconstructionTag::non_reconstructible;
  r.witness = WitnessPair{std::move(a), std::move(b)};
  r.stats = stats;
  return r;
}

void validate_config(const ReconstructConfig& config) {
  if (config.max_depth < 1 || config.max_depth > kMaxSignatureDepth)
    throw std::invalid_argument("max_depth must be 1, 2, or 3");
  if (config.search_budget == 0)
    throw std::invalid_argument("search_budget must be positive");
}

ReconstructionResult resolve_impl(const ShreddedInstance& inst,
                                  const InstanceGraphs& graphs,
                                  PartialAssignment partial,
                                  const ReconstructConfig& config,
                                  ReconstructStats stats) {
  const uint32_t n = inst.n();
  detail::PlacementState st(inst, graphs, std::move(partial));
  uint32_t rounds = 0;
  detail::fingerprint_fixpoint(st, /*allow_groups=*/true, &rounds);
  stats.fingerprint_rounds += rounds;
  tally_stats(st.asg, stats);

  if (st.asg.is_total()) {
    BitMatrix m = detail::assignment_matrix(inst, st.asg);
    if (shred(m) == inst) return unique_result(std::move(m), stats);
    return ambiguous_result(
        st, "all lines placed but they do not form a consistent matrix",
        stats);
  }

  const uint32_t unplaced = 2 * n - st.asg.placed_total();

  const auto iso = detect_isolated_ones(inst);
  if (iso.size() >= 2) {
    auto found = detail::search_completions(st, config.max_depth,
                                            config.search_budget, 1);
    if (!found.matrices.empty()) {
      BitMatrix a = std::move(found.matrices.front());
      const auto spots = detect_isolated_ones(a);
      if (spots.size() < 2)
        throw internal_error("completion lost its isolated 1s");
      BitMatrix b = swap_rows(a, spots[0].first, spots[1].first);
      if (a == b || shred(a) != inst || shred(b) != inst)
        throw internal_error("isolated-1 witness failed verification");
      stats.placed_by_search += unplaced;
      return witness_result(std::move(a), std::move(b), stats);
    }
    if (found.aborted)
      return ambiguous_result(st, "completion search budget exhausted", stats);
    return ambiguous_result(st, "no consistent completion exists", stats);
  }

  if (unplaced <= config.residual_cap) {
    auto found = detail::search_completions(st, config.max_depth,
                                            config.search_budget, 2);
    if (found.aborted)
      return ambiguous_result(st, "completion search budget exhausted", stats);
    if (found.matrices.empty())
      return ambiguous_result(st, "no consistent completion exists", stats);
    stats.placed_by_search += unplaced;
    if (found.matrices.size() == 1) {
      BitMatrix m = std::move(found.matrices.front());
      if (shred(m) != inst)
        throw internal_error("unique completion failed re-shred verification");
      return unique_result(std::move(m), stats);
    }
    BitMatrix a = std::move(found.matrices[0]);
    BitMatrix b = std::move(found.matrices[1]);
    if (a == b || shred(a) != inst || shred(b) != inst)
      throw internal_error("enumerated witness pair failed verification");
    return witness_result(std::move(a), std::move(b), stats);
  }

  return ambiguous_result(st, "residual larger than the exhaustive-search cap",
                          stats);
}

}  // namespace

ReconstructionResult resolve_residual(const ShreddedInstance& inst,
                                      PartialAssignment partial,
                                      const ReconstructConfig& config) {
  validate_config(config);
  if (partial.n() != inst.n())
    throw std::invalid_argument("assignment size does not match the instance");
  InstanceGraphs graphs(inst);
  return resolve_impl(inst, graphs, std::move(partial), config, {});
}

ReconstructionResult reconstruct(const ShreddedInstance& inst,
                                 const ReconstructConfig& config) {
  validate_config(config);
  InstanceGraphs graphs(inst);
  PartialAssignment asg(inst.n());
  ReconstructStats stats;
  for (uint32_t k = 1; k <= config.max_depth && !asg.is_total(); ++k)
    signature_pass(graphs, k, asg);
  if (!asg.is_total()) {
    detail::PlacementState st(inst, graphs, std::move(asg));
    detail::fingerprint_fixpoint(st, /*allow_groups=*/false,
                                 &stats.fingerprint_rounds);
    asg = std::move(st.asg);
  }
  return resolve_impl(inst, graphs, std::move(asg), config, stats);
}

}  // namespace unshred
