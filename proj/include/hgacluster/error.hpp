#pragma once

#include <stdexcept>
#include <string>

namespace hgacluster {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable or malformed input: missing files, bad rows, schema mismatches,
/// columns that cannot be imputed.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An operation was called with arguments that break its preconditions
/// (dimension mismatch, non-symmetric matrix, k > n, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// A report or export file could not be written.
class OutputError : public Error {
 public:
  using Error::Error;
};

}  // namespace hgacluster
