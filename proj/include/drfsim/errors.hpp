#pragma once

#include <stdexcept>
#include <string>

namespace drfsim {

/// Base for every error raised by the library. Carries the name of the module
/// that detected the problem so the CLI can tag its diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
  using Error::Error;
};

/// A numerical result missed its accuracy target (quadrature order, grid size).
class AccuracyError : public Error {
  using Error::Error;
};

/// Iterative solver hit its iteration cap.
class ConvergenceError : public Error {
  using Error::Error;
};

/// An internal identity that must hold (probabilities, traces) was violated.
class ConsistencyError : public Error {
  using Error::Error;
};

}  // namespace drfsim
