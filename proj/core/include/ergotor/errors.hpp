#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace ergotor {

/// Base of every error thrown by the library. `kind()` is a stable
/// machine-readable tag used by the CLI when serializing failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept = 0;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "invalid_input"; }
};

/// A nonzero multi-index whose frequency combination vanishes.
class ResonanceError : public Error {
 public:
  ResonanceError(std::string index, const std::string& what)
      : Error(what), index_(std::move(index)) {}
  const char* kind() const noexcept override { return "resonance"; }
  const std::string& index() const noexcept { return index_; }

 private:
  std::string index_;
};

class BudgetError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "budget"; }
};

class NoConvergence : public Error {
 public:
  NoConvergence(std::complex<double> last, std::complex<double> previous,
                const std::string& what)
      : Error(what), last_(last), previous_(previous) {}
  const char* kind() const noexcept override { return "no_convergence"; }
  std::complex<double> last() const noexcept { return last_; }
  std::complex<double> previous() const noexcept { return previous_; }

 private:
  std::complex<double> last_;
  std::complex<double> previous_;
};

/// A lazily generated series that cannot decide its own membership.
class Indeterminate : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "indeterminate"; }
};

}  // namespace ergotor
