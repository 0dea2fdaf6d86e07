#pragma once

#include <stdexcept>
#include <string>

namespace nsf {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StencilError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InversionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// A model/theorem combination outside the hypotheses of the uniqueness results.
struct GateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StaleGhostError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nsf
