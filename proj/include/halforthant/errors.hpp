#pragma once

#include <stdexcept>

namespace ho {

// Invalid run configuration (box too small, horizon too large, ...).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Invalid parameters to a construction (probabilities, malformed inputs).
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnsupportedDimension : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input violates an operation's precondition (e.g. a path that is not good).
struct PreconditionError : std::logic_error {
  using std::logic_error::logic_error;
};

// A cluster growth hit its size cap.
struct TruncatedCluster : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ho
