#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qshyp {

/// Non-finite or out-of-domain argument to a numerical kernel.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition or state invariant was violated by the caller.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised by the integrator when the solution leaves the finite / capped range.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(double time, const std::string& what)
      : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Configuration validation failure; carries one message per offending key.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A comparison solution failed the resolution test required to treat it as smooth.
class UnresolvedError : public std::runtime_error {
 public:
  UnresolvedError(double worst_tail, const std::string& what)
      : std::runtime_error(what), worst_tail_(worst_tail) {}
  double worst_tail() const noexcept { return worst_tail_; }

 private:
  double worst_tail_;
};

}  // namespace qshyp
