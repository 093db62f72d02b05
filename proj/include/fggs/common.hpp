#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fggs {

using VertexId = uint32_t;

// Error categories surfaced by the library. The CLI maps each to a distinct
// exit code; tests match on type.
struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct parameter_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct format_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct insufficient_data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct simulation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct construction_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct fit_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fggs
