#ifndef FEEC2D_ERRORS_HPP
#define FEEC2D_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace feec2d {

/// Invalid mesh input (degenerate triangle, broken incidence, ...).
struct MeshError : std::runtime_error {
  explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration (inadmissible element pair, bad study options, ...).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A linear solve failed its factorization or residual check.
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Expression parsing / differentiation failure.
struct ExprError : std::runtime_error {
  explicit ExprError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace feec2d

#endif
