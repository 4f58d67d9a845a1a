#pragma once

#include <stdexcept>
#include <string>

namespace alc {

/// Bad arguments: dimension mismatches, non-finite values, empty grids.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// No admissible bandwidth in a search grid.
class SelectionFailure : public std::runtime_error {
 public:
  explicit SelectionFailure(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace alc
