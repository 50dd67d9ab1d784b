#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bayesr {

// Bad arguments: shape mismatches, out-of-domain parameters, malformed files.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation produced a non-finite value or failed to converge.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::string term = {})
      : std::runtime_error(term.empty() ? what : what + " [" + term + "]"),
        term_(std::move(term)) {}

  const std::string& term() const noexcept { return term_; }

 private:
  std::string term_;
};

// The least-squares system for a kernel fit does not determine the kernel.
class RankDeficiencyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// The coordinate-ascent objective kept increasing; carries the objective trace.
class DivergenceError : public NumericalError {
 public:
  DivergenceError(const std::string& what, std::vector<double> trace)
      : NumericalError(what), trace_(std::move(trace)) {}

  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

}  // namespace bayesr
