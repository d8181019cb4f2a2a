#include "eisenlab/error.hpp"

namespace eisenlab {

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Config: return "config";
    case ErrorKind::InvalidConfiguration: return "invalid-configuration";
    case ErrorKind::NumericalDegeneracy: return "numerical-degeneracy";
    case ErrorKind::ResourceLimit: return "resource-limit";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::Pole: return "pole";
    case ErrorKind::ToleranceNotMet: return "tolerance-not-met";
    case ErrorKind::XiInLimitSet: return "xi-in-limit-set";
    case ErrorKind::XiOutsideDomain: return "xi-outside-domain";
    case ErrorKind::SupportViolation: return "support-violation";
    case ErrorKind::OscillationBudgetExceeded: return "oscillation-budget-exceeded";
    case ErrorKind::CutoffInsufficient: return "cutoff-insufficient";
  }
  return "unknown";
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Config: return 2;
    case ErrorKind::InvalidConfiguration:
    case ErrorKind::XiInLimitSet:
    case ErrorKind::XiOutsideDomain:
    case ErrorKind::SupportViolation: return 3;
    default: return 4;
  }
}

}  // namespace eisenlab
