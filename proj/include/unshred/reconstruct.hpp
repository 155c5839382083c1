#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unshred/degstats.hpp"
#include "unshred/errors.hpp"
#include "unshred/matrix.hpp"

namespace unshred {

// How a line came to be placed.
enum class Placement : uint8_t {
  none,
  signature_k1,
  signature_k2,
  signature_k3,
  fingerprint,        // unique (degree, placed-neighborhood) fingerprint
  fingerprint_deep,   // tie broken by the second-level multiset
  duplicate_group,    // interchangeable identical values placed as a block
  residual_search,    // found by exhaustive residual completion
};

// Injective partial maps from row/column value slots (indices into the
// sorted multisets) to row/column positions.  Every mutation keeps the
// slot->position and position->slot maps inverse to each other.
class PartialAssignment {
 public:
  explicit PartialAssignment(uint32_t n)
      : n_(n),
        row_pos_of_slot_(n, kUnplaced),
        row_slot_at_(n, kUnplaced),
        col_pos_of_slot_(n, kUnplaced),
        col_slot_at_(n, kUnplaced),
        row_how_(n, Placement::none),
        col_how_(n, Placement::none) {}

  static constexpr int64_t kUnplaced = -1;

  uint32_t n() const { return n_; }
  uint32_t placed_rows() const { return placed_rows_; }
  uint32_t placed_cols() const { return placed_cols_; }
  uint32_t placed_total() const { return placed_rows_ + placed_cols_; }
  bool is_total() const { return placed_total() == 2 * n_; }

  int64_t row_pos_of_slot(uint32_t slot) const { return row_pos_of_slot_[slot]; }
  int64_t row_slot_at(uint32_t pos) const { return row_slot_at_[pos]; }
  int64_t col_pos_of_slot(uint32_t slot) const { return col_pos_of_slot_[slot]; }
  int64_t col_slot_at(uint32_t pos) const { return col_slot_at_[pos]; }
  Placement row_provenance(uint32_t slot) const { return row_how_[slot]; }
  Placement col_provenance(uint32_t slot) const { return col_how_[slot]; }

  void place_row(uint32_t slot, uint32_t pos, Placement how);
  void place_col(uint32_t slot, uint32_t pos, Placement how);
  void unplace_row(uint32_t slot);
  void unplace_col(uint32_t slot);

  // Every placed row value agrees with every placed column value at their
  // crossing entry.  O(n^2) bit probes; meant for tests and debugging.
  bool consistent_with(const ShreddedInstance& inst) const;

 private:
  uint32_t n_ = 0;
  uint32_t placed_rows_ = 0;
  uint32_t placed_cols_ = 0;
  std::vector<int64_t> row_pos_of_slot_, row_slot_at_;
  std::vector<int64_t> col_pos_of_slot_, col_slot_at_;
  std::vector<Placement> row_how_, col_how_;
};

double estimate_p(const ShreddedInstance& inst);

// A line is heavy when its ones count is at least half the estimated
// expected line weight n * p-hat.
struct HeavyLightSplit {
  double threshold = 0.0;
  std::vector<bool> heavy_rows;  // per row value slot
  std::vector<bool> heavy_cols;  // per col value slot
};
HeavyLightSplit heavy_light_labels(const ShreddedInstance& inst);

// Phase 1: places value v at position i exactly when the depth-k statistic
// of v is unique among values, the statistic of i is unique among indices,
// and the two payloads are byte-identical (soundness: in any matrix with
// this shred, v's position carries v's statistic, so it can only be i).
PartialAssignment match_by_signatures(const ShreddedInstance& inst, uint32_t k);

// Phase 2: fixpoint of forced placements from fingerprints
// (degree, neighborhood restricted to placed crossing lines), escalating
// to the second-level multiset [N(c) cap X : c in N(r)] only to break
// first-level ties.  Placements never contradict an already consistent
// partial assignment and the iteration terminates after at most 2n rounds.
PartialAssignment propagate_fingerprints(const ShreddedInstance& inst,
                                         PartialAssignment partial);

// An isolated 1 pairs a weight-1 row value with the weight-1 column value
// sharing its single entry.  On an instance the pairing between the two
// lists is canonical-but-arbitrary when several isolated 1s exist (any
// pairing is realized by some completion, which is exactly the
// obstruction); with one isolated 1 it is exact.
struct IsolatedOnePairing {
  uint32_t row_slot;
  uint32_t col_slot;
};
std::vector<IsolatedOnePairing> detect_isolated_ones(
    const ShreddedInstance& inst);
// Matrix scan variant: (row, col) positions of entries that are the only 1
// in both their row and their column.
std::vector<std::pair<uint32_t, uint32_t>> detect_isolated_ones(
    const BitMatrix& m);

struct DuplicateLines {
  bool rows = false;
  bool cols = false;
};
DuplicateLines detect_duplicate_lines(const ShreddedInstance& inst);

enum class ReconstructionTag : uint8_t {
  unique,
  non_reconstructible,
  ambiguous,
};

struct WitnessPair {
  BitMatrix first;   // one completion of the instance
  BitMatrix second;  // a different matrix with the same shred
};

struct ResidualReport {
  uint32_t n = 0;
  std::vector<uint32_t> row_value_slots;
  std::vector<uint32_t> row_positions;
  std::vector<uint32_t> col_value_slots;
  std::vector<uint32_t> col_positions;
  std::string note;

  uint32_t unplaced_lines() const {
    return static_cast<uint32_t>(row_value_slots.size() +
                                 col_value_slots.size());
  }
  std::string to_text() const;
};

struct ReconstructStats {
  std::array<uint32_t, 3> placed_by_signature{};  // per depth 1..3
  uint32_t placed_by_fingerprint = 0;
  uint32_t placed_by_fingerprint_deep = 0;
  uint32_t placed_by_group = 0;
  uint32_t placed_by_search = 0;
  uint32_t fingerprint_rounds = 0;
};

struct ReconstructionResult {
  ReconstructionTag tag = ReconstructionTag::ambiguous;
  std::optional<BitMatrix> matrix;        // tag == unique
  std::optional<WitnessPair> witness;     // tag == non_reconstructible
  std::optional<ResidualReport> residual; // tag == ambiguous
  ReconstructStats stats;
};

struct ReconstructConfig {
  uint32_t max_depth = 2;        // signature depth schedule 1..max_depth
  uint32_t residual_cap = 16;    // exhaustive enumeration size limit
  uint64_t search_budget = 1'000'000;  // completion search step limit
};

// Final phase: groups interchangeable identical unplaced values, proves
// non-reconstructibility via paired isolated 1s (witness: swap their two
// rows in some completion), exhaustively enumerates completions of
// residuals up to the cap, and reports anything larger as ambiguous.
// Unique results always re-shred to the input; witnesses always verify.
ReconstructionResult resolve_residual(const ShreddedInstance& inst,
                                      PartialAssignment partial,
                                      const ReconstructConfig& config = {});

// Full pipeline: signature matching with escalating depth, fingerprint
// fixpoint, residual resolution.
ReconstructionResult reconstruct(const ShreddedInstance& inst,
                                 const ReconstructConfig& config = {});

}  // namespace unshred
