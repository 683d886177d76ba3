#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coflow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rejected instance construction. Each failure mode has its own kind.
class ValidationError : public Error {
 public:
  enum class Kind { kTooFewNodes, kDimensionMismatch, kNegativeEntry, kNonzeroDiagonal, kInvalidParameter };

  ValidationError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Schedule that references nodes or commodities the instance does not have.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A scheme that only exists for certain node counts (powers of two, perfect
/// d-th powers, perfect squares).
class UnsupportedSizeError : public Error {
 public:
  UnsupportedSizeError(const std::string& what, std::size_t suggested_n)
      : Error(what + " (next supported size: " + std::to_string(suggested_n) + ")"),
        suggested_n_(suggested_n) {}
  std::size_t suggested_n() const { return suggested_n_; }

 private:
  std::size_t suggested_n_;
};

/// A scheme whose fixed connection schedule cannot carry the requested demand.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class TraceError : public Error {
 public:
  using Error::Error;
};

/// The LP oracle refuses instances above its desk-scale limits.
class OracleSizeError : public Error {
 public:
  using Error::Error;
};

}  // namespace coflow
