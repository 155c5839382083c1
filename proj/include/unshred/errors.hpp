#pragma once

#include <stdexcept>
#include <string>

namespace unshred {

// File or format problem in user-supplied data (CLI exit code 2).
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

// Violated internal invariant (CLI exit code 3).
class internal_error : public std::logic_error {
 public:
  explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace unshred
