#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sgb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model parameter is outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Two fields (or a field and a model) live on different truncations.
class LatticeMismatch : public Error {
 public:
  using Error::Error;
};

/// The integrator left the a-priori energy scale; usually a step-size problem.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::uint64_t sample_index)
      : Error(what), sample_index_(sample_index) {}
  std::uint64_t sample_index() const { return sample_index_; }

 private:
  std::uint64_t sample_index_;
};

/// A structural assumption on the nonlinearity failed on a concrete witness.
/// The bounds are theorems for this model, so this always means a bug.
class AssumptionViolation : public Error {
 public:
  AssumptionViolation(const std::string& what, std::string witness_json)
      : Error(what), witness_(std::move(witness_json)) {}
  const std::string& witness() const { return witness_; }

 private:
  std::string witness_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace sgb
