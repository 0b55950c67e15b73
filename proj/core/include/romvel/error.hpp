#pragma once

#include <stdexcept>
#include <string>

namespace romvel {

/// Base of all library errors. `kind()` groups errors into the categories the
/// command line maps onto exit codes.
class Error : public std::runtime_error {
 public:
  enum class Kind { Config, Numerical, Io };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(Kind::Config, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(Kind::Numerical, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(Kind::Io, what) {}
};

class NonPositiveVelocity : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DomainTooSmall : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class EigUnavailable : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NyquistViolation : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class CflViolation : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class InsufficientRecordLength : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class IndexOutOfRange : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class BandExceedsMatrix : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class ResidualShorterThanN : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class SingularSystem : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Block Cholesky breakdown. `block()` is the zero-based index of the
/// diagonal block whose Schur complement was not positive definite.
class MassNotSPD : public NumericalError {
 public:
  MassNotSPD(int block, const std::string& what) : NumericalError(what), block_(block) {}
  int block() const noexcept { return block_; }

 private:
  int block_;
};

}  // namespace romvel
