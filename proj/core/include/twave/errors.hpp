#pragma once

#include <stdexcept>
#include <string>

namespace twave {

/// Invalid arguments from the caller (bad branch index, negative sample count, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation point outside the domain of a formula (division by a vanishing factor).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Non-finite or otherwise malformed field data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The grid cannot represent the requested frequency shells.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// NaN/Inf produced during time stepping.
class InstabilityError : public std::runtime_error {
 public:
  InstabilityError(const std::string& what, double t) : std::runtime_error(what), time_(t) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace twave
