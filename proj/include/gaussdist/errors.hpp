#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gaussdist {

// Argument outside the documented domain of an operation.
class invalid_input : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Input is well formed but violates an operation's precondition (e.g. a mixed
// state passed where a pure state is required).
class precondition_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A covariance matrix that leaves no energy for the displacement.
class infeasible_covariance : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Should be unreachable for valid states; signals a broken invariant.
class internal_error : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// Fock truncation too small for the requested state.
class cutoff_too_small : public std::runtime_error {
public:
  cutoff_too_small(int cutoff, double tail_mass)
      : std::runtime_error("Fock cutoff " + std::to_string(cutoff) +
                           " too small: tail mass " + std::to_string(tail_mass)),
        cutoff_(cutoff), tail_mass_(tail_mass) {}

  int cutoff() const noexcept { return cutoff_; }
  double tail_mass() const noexcept { return tail_mass_; }

private:
  int cutoff_;
  double tail_mass_;
};

// Every start of a multi-start minimization failed; carries one line per start.
class convergence_error : public std::runtime_error {
public:
  convergence_error(const std::string& what, std::vector<std::string> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}

  const std::vector<std::string>& trace() const noexcept { return trace_; }

private:
  std::vector<std::string> trace_;
};

}  // namespace gaussdist
