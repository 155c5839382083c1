#pragma once

#include <cstdint>

#include "unshred/matrix.hpp"

namespace unshred {

// Ground truth for small instances by exhaustive enumeration.
// completion_count == 0 means no matrix has the given shred, which only
// happens for hand-built inconsistent inputs; genuine shreds always have
// at least one completion.
struct OracleVerdict {
  uint64_t completion_count = 0;
  bool weakly_reconstructible = false;    // exactly one completion
  bool strongly_reconstructible = false;  // ... and no duplicate lines
};

inline constexpr uint32_t kOracleMaxN = 8;

// Enumerates the distinct orderings of the row multiset (identical rows
// deduplicated, so the branching is multinomial rather than n!), prunes
// orderings whose column prefixes already mismatch the column multiset,
// and counts the distinct matrices that survive.  Throws
// std::invalid_argument above kOracleMaxN.
OracleVerdict oracle_classify(const ShreddedInstance& inst);

}  // namespace unshred
