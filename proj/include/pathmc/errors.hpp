#pragma once

#include <stdexcept>
#include <string>

namespace pathmc {

// User-facing input problems: bad parameters, empty families, malformed records.
struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Work refused because an instance is too large for the requested operation
// (enumeration caps, matrix caps, CFTP horizon cap).
struct size_guard_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Broken internal invariant. Reaching this is a bug, not a usage error.
struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

// Exit codes used by the CLI.
enum exit_code : int {
  exit_ok = 0,
  exit_validation = 2,
  exit_size_guard = 3,
  exit_internal = 4,
};

}  // namespace pathmc
