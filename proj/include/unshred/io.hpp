#pragma once

#include <string>

#include "unshred/errors.hpp"
#include "unshred/matrix.hpp"

namespace unshred {

// Matrix file format:
//   line 1: n
//   lines 2..n+1: exactly n characters from {0,1}, '\n' terminated
// Instance file format:
//   line 1: n
//   line 2: ROWS               followed by n sorted bit strings
//   line n+3: COLS             followed by n sorted bit strings
// Unsorted instance lines are accepted and canonicalized on read.
// Malformed input raises io_error naming the offending line.

BitMatrix read_matrix(const std::string& path);
void write_matrix(const std::string& path, const BitMatrix& m);

ShreddedInstance read_instance(const std::string& path);
void write_instance(const std::string& path, const ShreddedInstance& inst);

}  // namespace unshred
