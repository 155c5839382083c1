#pragma once

// Internal to the reconstruction phases: partial assignment plus the
// incremental "pin" constraints it induces on the unplaced lines.

#include <cstdint>
#include <vector>

#include "unshred/degstats.hpp"
#include "unshred/matrix.hpp"
#include "unshred/reconstruct.hpp"

namespace unshred::detail {

// Pins record the entries already forced by placed crossing lines:
//   pin_col[j] (bits over row positions) = column j of the partial matrix
//     contributed by placed rows; valid under placed_rows mask.
//   pin_row[i] (bits over col positions) = row i contributed by placed
//     columns; valid under placed_cols mask.
// A value fits a position iff it reproduces the pins there, so fit checks
// are a handful of masked word compares.
struct PlacementState {
  const ShreddedInstance* inst = nullptr;
  const InstanceGraphs* graphs = nullptr;
  PartialAssignment asg;
  BitVec placed_rows;  // mask over row positions
  BitVec placed_cols;  // mask over col positions
  std::vector<BitVec> pin_col;
  std::vector<BitVec> pin_row;
  // True line degrees per position, read off the opposite multiset:
  // row position i must carry a value of weight row_pos_degree[i].
  std::vector<uint32_t> row_pos_degree;
  std::vector<uint32_t> col_pos_degree;

  PlacementState(const ShreddedInstance& instance,
                 const InstanceGraphs& instance_graphs,
                 PartialAssignment base);

  uint32_t n() const { return asg.n(); }

  void place_row(uint32_t slot, uint32_t pos, Placement how);
  void place_col(uint32_t slot, uint32_t pos, Placement how);
  void unplace_row(uint32_t slot, uint32_t pos);
  void unplace_col(uint32_t slot, uint32_t pos);

  bool row_fits(uint32_t slot, uint32_t pos) const;
  bool col_fits(uint32_t slot, uint32_t pos) const;

 private:
  void apply_row_pins(uint32_t slot, uint32_t pos, bool on);
  void apply_col_pins(uint32_t slot, uint32_t pos, bool on);
};

// Builds the matrix a total assignment describes (row position i holds the
// row value placed there).  Throws internal_error if any row is unplaced.
BitMatrix assignment_matrix(const ShreddedInstance& inst,
                            const PartialAssignment& asg);

// One fixpoint pass of fingerprint placements over the current state.
// Returns the number of lines placed.  When allow_groups is set, a
// fingerprint class whose values are all byte-identical and whose value
// and position counts agree is placed as a block (any completion permutes
// equal values among those positions, so every pairing yields the same
// matrix).
uint32_t fingerprint_fixpoint(PlacementState& st, bool allow_groups,
                              uint32_t* rounds_out);

// Budgeted depth-first search for completions of the current state.
// Candidates must match the deepest computed degree statistic, the exact
// line weight, and all pins.  Branches only over distinct values, so
// leaves are in bijection with distinct completing matrices.  Stops after
// `limit` completions.  `aborted` reports budget exhaustion, in which
// case the returned list may be incomplete.
struct CompletionOutcome {
  std::vector<BitMatrix> matrices;
  bool aborted = false;
  uint64_t steps = 0;
};
CompletionOutcome search_completions(PlacementState& st, uint32_t color_depth,
                                     uint64_t budget, uint32_t limit);

}  // namespace unshred::detail
