#pragma once

#include <stdexcept>
#include <string>

namespace twdet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or string.
class ParseError : public Error {
public:
  using Error::Error;
};

/// A tree decomposition that fails validation or is not usable for the
/// requested operation.
class InvalidDecomposition : public Error {
public:
  using Error::Error;
};

/// An operation was called outside its domain (non-square matrix,
/// singular matrix, non-Eulerian graph, size cap exceeded, ...).
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// The cycle-cover DP refused to run because its state-space estimate
/// exceeds the configured budget.
class BudgetExceeded : public PreconditionError {
public:
  using PreconditionError::PreconditionError;
};

} // namespace twdet
