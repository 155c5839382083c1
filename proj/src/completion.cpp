#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "placement_state.hpp"
#include "signature_engine.hpp"

namespace unshred::detail {

namespace {

// Depth-first completion of a partial placement.  Every step either places
// a forced line (a position with exactly one surviving candidate) or
// branches on a position with the fewest candidates, trying each distinct
// candidate value once.  Candidates must carry the position's degree
// statistic color, have the exact line weight, and agree with all pins, so
// placing one never contradicts the placed part.  Distinct leaves differ in
// the first branched position, hence are distinct matrices.
struct Searcher {
  PlacementState& st;
  const uint64_t budget;
  const uint32_t limit;
  const uint32_t n;
  CompletionOutcome out;
  bool stop = false;

  std::vector<uint32_t> row_value_color, row_pos_color;
  std::vector<uint32_t> col_value_color, col_pos_color;
  std::map<uint32_t, std::vector<uint32_t>> row_slots_by_color;
  std::map<uint32_t, std::vector<uint32_t>> col_slots_by_color;

  Searcher(PlacementState& state, uint32_t color_depth, uint64_t budget_,
           uint32_t limit_)
      : st(state), budget(budget_), limit(limit_), n(state.n()) {
    SignatureEngine& eng = st.graphs->engine();
    eng.ensure_depth(color_depth);
    row_value_color.resize(n);
    row_pos_color.resize(n);
    col_value_color.resize(n);
    col_pos_color.resize(n);
    const auto color = [&](GraphSide side, Orientation orient, uint32_t v) {
      return eng.color(eng.merged_vertex(side, orient, v), color_depth);
    };
    for (uint32_t v = 0; v < n; ++v) {
      row_value_color[v] = color(GraphSide::value_side, Orientation::row, v);
      row_slots_by_color[row_value_color[v]].push_back(v);
    }
    for (uint32_t i = 0; i < n; ++i)
      row_pos_color[i] = color(GraphSide::index_side, Orientation::row, i);
    for (uint32_t c = 0; c < n; ++c) {
      col_value_color[c] =
          color(GraphSide::index_side, Orientation::column, c);
      col_slots_by_color[col_value_color[c]].push_back(c);
    }
    for (uint32_t j = 0; j < n; ++j)
      col_pos_color[j] = color(GraphSide::value_side, Orientation::column, j);
  }

  template <bool kRows>
  bool slot_placed(uint32_t s) const {
    return kRows ? st.asg.row_pos_of_slot(s) >= 0
                 : st.asg.col_pos_of_slot(s) >= 0;
  }

  // Counts candidates for the position, stopping at cap; reports the first.
  template <bool kRows>
  uint32_t count_candidates(uint32_t pos, uint32_t cap,
                            uint32_t* first) const {
    const auto& by_color = kRows ? row_slots_by_color : col_slots_by_color;
    const uint32_t pc = kRows ? row_pos_color[pos] : col_pos_color[pos];
    const auto it = by_color.find(pc);
    if (it == by_color.end()) return 0;
    uint32_t cnt = 0;
    for (uint32_t s : it->second) {
      if (slot_placed<kRows>(s)) continue;
      const bool fits = kRows ? st.row_fits(s, pos) : st.col_fits(s, pos);
      if (!fits) continue;
      if (cnt == 0 && first) *first = s;
      if (++cnt >= cap) break;
    }
    return cnt;
  }

  // All candidates, keeping one slot per distinct value.  Equal values sit
  // at adjacent slots of the sorted multiset, so a slot whose unplaced
  // predecessor holds the same value is a duplicate branch.
  template <bool kRows>
  std::vector<uint32_t> branch_values(uint32_t pos) const {
    const auto& by_color = kRows ? row_slots_by_color : col_slots_by_color;
    const auto& lines = kRows ? st.inst->rows() : st.inst->cols();
    const uint32_t pc = kRows ? row_pos_color[pos] : col_pos_color[pos];
    std::vector<uint32_t> vals;
    const auto it = by_color.find(pc);
    if (it == by_color.end()) return vals;
    for (uint32_t s : it->second) {
      if (slot_placed<kRows>(s)) continue;
      const bool fits = kRows ? st.row_fits(s, pos) : st.col_fits(s, pos);
      if (!fits) continue;
      if (s > 0 && lines[s - 1] == lines[s] && !slot_placed<kRows>(s - 1))
        continue;
      vals.push_back(s);
    }
    return vals;
  }

  bool charge() {
    if (out.steps >= budget) {
      out.aborted = true;
      stop = true;
      return false;
    }
    ++out.steps;
    return true;
  }

  struct TrailEntry {
    bool is_row;
    uint32_t slot;
    uint32_t pos;
  };

  void undo(std::vector<TrailEntry>& trail) {
    for (auto it = trail.rbegin(); it != trail.rend(); ++it) {
      if (it->is_row)
        st.unplace_row(it->slot, it->pos);
      else
        st.unplace_col(it->slot, it->pos);
    }
    trail.clear();
  }

  void emit() {
    BitMatrix m = assignment_matrix(*st.inst, st.asg);
    for (const BitMatrix& prev : out.matrices)
      if (prev == m) throw internal_error("duplicate completion emitted");
    out.matrices.push_back(std::move(m));
    if (out.matrices.size() >= limit) stop = true;
  }

  void dfs() {
    std::vector<TrailEntry> trail;
    uint32_t branch_pos = 0;
    bool branch_is_row = true;
    for (;;) {
      if (!charge()) {
        undo(trail);
        return;
      }
      uint32_t best = UINT32_MAX;
      bool placed_any = false;
      bool dead = false;
      const auto scan = [&]<bool kRows>() {
        for (uint32_t i = 0; i < n && !dead; ++i) {
          const bool occupied = kRows ? st.asg.row_slot_at(i) >= 0
                                      : st.asg.col_slot_at(i) >= 0;
          if (occupied) continue;
          uint32_t first = 0;
          const uint32_t cnt = count_candidates<kRows>(i, 2, &first);
          if (cnt == 0) {
            dead = true;
          } else if (cnt == 1) {
            if constexpr (kRows)
              st.place_row(first, i, Placement::residual_search);
            else
              st.place_col(first, i, Placement::residual_search);
            trail.push_back({kRows, first, i});
            placed_any = true;
          } else if (cnt < best) {
            best = cnt;
            branch_pos = i;
            branch_is_row = kRows;
          }
        }
      };
      scan.operator()<true>();
      if (!dead) scan.operator()<false>();
      if (dead) {
        undo(trail);
        return;
      }
      if (st.asg.is_total()) {
        emit();
        undo(trail);
        return;
      }
      if (!placed_any) break;
    }

    const std::vector<uint32_t> vals = branch_is_row
                                           ? branch_values<true>(branch_pos)
                                           : branch_values<false>(branch_pos);
    for (uint32_t s : vals) {
      if (!charge()) break;
      if (branch_is_row)
        st.place_row(s, branch_pos, Placement::residual_search);
      else
        st.place_col(s, branch_pos, Placement::residual_search);
      dfs();
      if (branch_is_row)
        st.unplace_row(s, branch_pos);
      else
        st.unplace_col(s, branch_pos);
      if (stop) break;
    }
    undo(trail);
  }
};

}  // namespace

CompletionOutcome search_completions(PlacementState& st, uint32_t color_depth,
                                     uint64_t budget, uint32_t limit) {
  if (limit == 0) return {};
  Searcher searcher(st, color_depth, budget, limit);
  searcher.dfs();
  return std::move(searcher.out);
}

}  // namespace unshred::detail
