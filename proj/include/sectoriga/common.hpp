#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace siga {

using Vec2 = Eigen::Vector2d;

/// Invalid arguments or violated preconditions.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Bad experiment configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Factorization or iteration failure in the eigensolver (CLI exit code 3).
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Discrete and exact eigenpairs could not be paired.
struct MatchingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846264338327950288;

}  // namespace siga
