#pragma once

#include <stdexcept>
#include <string>

namespace eisenlab {

enum class ErrorKind {
  Config,
  InvalidConfiguration,
  NumericalDegeneracy,
  ResourceLimit,
  NonConvergence,
  Pole,
  ToleranceNotMet,
  XiInLimitSet,
  XiOutsideDomain,
  SupportViolation,
  OscillationBudgetExceeded,
  CutoffInsufficient,
};

const char* kind_name(ErrorKind k);

// CLI exit code for an error kind: 2 config, 3 group/domain, 4 numeric.
int exit_code(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace eisenlab
