#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace surfnitsche {

enum class ErrorKind {
  invalid_argument,
  degenerate_input,
  non_convergence,
  mesh_invalid,
  degenerate_element,
  degenerate_edge,
  singular_metric,
  invalid_beta,
  not_positive_definite,
  max_iterations_exceeded,
  unsupported_degree,
  io_failure,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::degenerate_input: return "degenerate-input";
    case ErrorKind::non_convergence: return "non-convergence";
    case ErrorKind::mesh_invalid: return "mesh-invalid";
    case ErrorKind::degenerate_element: return "degenerate-element";
    case ErrorKind::degenerate_edge: return "degenerate-edge";
    case ErrorKind::singular_metric: return "singular-metric";
    case ErrorKind::invalid_beta: return "invalid-beta";
    case ErrorKind::not_positive_definite: return "not-positive-definite";
    case ErrorKind::max_iterations_exceeded: return "max-iterations-exceeded";
    case ErrorKind::unsupported_degree: return "unsupported-degree";
    case ErrorKind::io_failure: return "io-failure";
  }
  return "unknown";
}

/// Exception carrying a machine-checkable failure category.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace surfnitsche
