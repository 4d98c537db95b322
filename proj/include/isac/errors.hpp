// SPDX-License-Identifier: Apache-2.0
//
// errors.hpp - exception types shared across the isac library

#pragma once

#include <stdexcept>
#include <string>

namespace isac {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Mismatched or unsupported matrix/vector dimensions.
class DimensionError : public Error {
  public:
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

/// Input outside the mathematical domain of an operation (non-Hermitian,
/// non-positive-definite, non-PSD, ...). Carries the offending value when
/// one exists, e.g. the minimum eigenvalue of a matrix that should be HPD.
class DomainError : public Error {
  public:
    DomainError(const std::string& msg, double offending_value = 0.0)
        : Error(msg), offending_value(offending_value) {}
    double offending_value;
};

/// Problem instance exceeds a hard scale guard (oracle-size limits).
class ScaleError : public Error {
  public:
    explicit ScaleError(const std::string& msg) : Error(msg) {}
};

/// Invalid scenario file or configuration values.
class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Invalid argument to a harness operation (bad trial counts etc.).
class ArgumentError : public Error {
  public:
    explicit ArgumentError(const std::string& msg) : Error(msg) {}
};

/// The rate demand cannot be met by any beamformer within the power budget.
/// Carries the normalized rate load t = Omega / (P0 |h|^2); infeasible
/// instances have t > 1 (t = +inf when h == 0 with Omega > 0).
class InfeasibleError : public Error {
  public:
    InfeasibleError(const std::string& msg, double t_load)
        : Error(msg), t_load(t_load) {}
    double t_load;
};

/// Interior-point solve stopped before reaching the requested tolerance.
class ConvergenceError : public Error {
  public:
    ConvergenceError(const std::string& msg, double gap, int iterations)
        : Error(msg), gap(gap), iterations(iterations) {}
    double gap;
    int iterations;
};

/// Rank-one recovery could not produce a feasible beamformer.
class ExtractionError : public Error {
  public:
    explicit ExtractionError(const std::string& msg) : Error(msg) {}
};

} // namespace isac
