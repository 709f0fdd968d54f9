#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cellrobust {

// Base class for all hard errors raised by the library. `kind()` is a stable
// machine-readable tag (the CLI maps it into its JSON error output).
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class PositiveDefinitenessError : public Error {
 public:
  PositiveDefinitenessError(std::size_t pivot_index, const std::string& message)
      : Error("PositiveDefinitenessError", message), pivot_index_(pivot_index) {}
  std::size_t pivot_index() const noexcept { return pivot_index_; }

 private:
  std::size_t pivot_index_;
};

class IterationLimitError : public Error {
 public:
  explicit IterationLimitError(const std::string& message)
      : Error("IterationLimit", message) {}
};

class EmptyInputError : public Error {
 public:
  explicit EmptyInputError(const std::string& message) : Error("EmptyInput", message) {}
};

class InsufficientDataError : public Error {
 public:
  explicit InsufficientDataError(const std::string& message)
      : Error("InsufficientData", message) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message) : Error("DomainError", message) {}
};

class LengthMismatchError : public Error {
 public:
  explicit LengthMismatchError(const std::string& message)
      : Error("LengthMismatch", message) {}
};

class DegenerateInputError : public Error {
 public:
  explicit DegenerateInputError(const std::string& message)
      : Error("DegenerateInput", message) {}
};

class UnsupportedKindError : public Error {
 public:
  explicit UnsupportedKindError(const std::string& message)
      : Error("UnsupportedKind", message) {}
};

// Raised when a data column is constant; carries the offending column index.
class DegenerateColumnError : public Error {
 public:
  DegenerateColumnError(std::size_t column, const std::string& message)
      : Error("DegenerateColumn", message), column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

class NonPositiveDiagonalError : public Error {
 public:
  explicit NonPositiveDiagonalError(const std::string& message)
      : Error("NonPositiveDiagonal", message) {}
};

class DimensionMismatchError : public Error {
 public:
  explicit DimensionMismatchError(const std::string& message)
      : Error("DimensionMismatch", message) {}
};

class GenerationFailureError : public Error {
 public:
  explicit GenerationFailureError(const std::string& message)
      : Error("GenerationFailure", message) {}
};

class AllInfeasibleError : public Error {
 public:
  explicit AllInfeasibleError(const std::string& message)
      : Error("AllInfeasible", message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error("IoError", message) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error("ConfigError", message) {}
};

}  // namespace cellrobust
