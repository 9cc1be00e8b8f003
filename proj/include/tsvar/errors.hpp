// This file is part of tsvar, a library for robust statistical evaluation
// of long-memory supOU processes under reversion-measure ambiguity.
//
// SPDX-License-Identifier: MIT

#pragma once

#include <stdexcept>
#include <string>

namespace tsvar {

/// Error categories, mapped one-to-one onto CLI exit codes.
enum class ErrorCategory {
    parse,        ///< malformed input data
    grid,         ///< time axis violates the hourly-grid contract
    feasibility,  ///< parameter outside its admissible range
    convergence,  ///< an iterative solver failed to converge
    io,           ///< file system failure
    domain,       ///< function evaluated outside its mathematical domain
    degenerate,   ///< input data carries no usable signal (e.g. zero variance)
    alignment,    ///< mismatched discretization between paired arguments
    boundary,     ///< optimizer pinned a parameter to its open boundary
    infeasible,   ///< no admissible model improves on the trivial one
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

  private:
    ErrorCategory category_;
};

class ParseError : public Error {
  public:
    explicit ParseError(const std::string& m) : Error(ErrorCategory::parse, m) {}
};

class GridError : public Error {
  public:
    explicit GridError(const std::string& m) : Error(ErrorCategory::grid, m) {}
};

class FeasibilityError : public Error {
  public:
    explicit FeasibilityError(const std::string& m) : Error(ErrorCategory::feasibility, m) {}
};

class ConvergenceError : public Error {
  public:
    explicit ConvergenceError(const std::string& m) : Error(ErrorCategory::convergence, m) {}
};

class IoError : public Error {
  public:
    explicit IoError(const std::string& m) : Error(ErrorCategory::io, m) {}
};

class DomainError : public Error {
  public:
    explicit DomainError(const std::string& m) : Error(ErrorCategory::domain, m) {}
};

class DegenerateError : public Error {
  public:
    explicit DegenerateError(const std::string& m) : Error(ErrorCategory::degenerate, m) {}
};

class AlignmentError : public Error {
  public:
    explicit AlignmentError(const std::string& m) : Error(ErrorCategory::alignment, m) {}
};

class BoundaryError : public Error {
  public:
    explicit BoundaryError(const std::string& m) : Error(ErrorCategory::boundary, m) {}
};

class InfeasibleError : public Error {
  public:
    explicit InfeasibleError(const std::string& m) : Error(ErrorCategory::infeasible, m) {}
};

}  // namespace tsvar
