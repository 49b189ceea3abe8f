#pragma once

#include <stdexcept>
#include <string>

namespace qprecode {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration or parameters (bad codebook size, malformed config file, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Inputs outside an operation's mathematical domain (non-finite values, empty feasible set, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Numerical failure inside an algorithm (bracketing failure, rank deficiency, ...).
class NumericError : public Error {
 public:
  using Error::Error;
};

// File I/O failure; message includes the path.
class IoError : public Error {
 public:
  using Error::Error;
};

// Subproblem solver failure surfaced by the iteration loop; message carries the iteration index.
class SolverError : public Error {
 public:
  using Error::Error;
};

// An exhaustive oracle refused an instance larger than its enumeration budget.
class OracleBudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace qprecode
