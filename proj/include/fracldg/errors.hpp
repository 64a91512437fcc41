#pragma once

#include <stdexcept>
#include <string>

namespace fracldg {

/// Precondition violation on a public entry point.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A fractional derivative was requested exactly at a point where it is
/// genuinely infinite (e.g. the RL derivative at a jump of the data).
class SingularEvaluation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Operation needs a uniform mesh.
class UnsupportedMesh : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite state detected while advancing the solution.
class InstabilityError : public std::runtime_error {
 public:
  InstabilityError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Invalid or unknown configuration entry; carries the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace fracldg
