#pragma once

#include <stdexcept>
#include <string>

namespace flowparts {

// Malformed file contents (bad magic, truncated header, unparseable field).
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Well-formed input that violates a documented constraint (degenerate box,
// label above the declared part count, duplicate frame index).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Caller broke an API precondition.
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace flowparts
