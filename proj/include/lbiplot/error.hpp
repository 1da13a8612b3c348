#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lbiplot {

// Base for all library errors. Callers that only care about
// "bad input" vs "numerics went wrong" can catch Error / NumericError.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

/// Input outside the domain of a distance (negative counts, all-zero vectors for UniFrac).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Dimension mismatch between matrices/vectors.
class ShapeError : public Error {
public:
  using Error::Error;
};

/// Matrix that should be symmetric positive definite is not.
class FormError : public Error {
public:
  using Error::Error;
};

/// Requested dimension exceeds the retained rank.
class RankError : public Error {
public:
  RankError(const std::string& what, std::size_t retained_rank)
      : Error(what), retained_rank_(retained_rank) {}

  std::size_t retained_rank() const noexcept { return retained_rank_; }

private:
  std::size_t retained_rank_;
};

/// Local biplot mode not legal for the distance's smoothness.
class ModeError : public Error {
public:
  using Error::Error;
};

/// Generic validation failure (configuration, CLI arguments, file contents).
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Eigensolver failure or other numerical breakdown.
class NumericError : public Error {
public:
  using Error::Error;
};

}  // namespace lbiplot
