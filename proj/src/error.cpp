#include "qreach/error.hpp"

#include "qreach/tolerances.hpp"

namespace qreach {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::EmptyBox: return "EmptyBox";
    case ErrorKind::DegenerateRange: return "DegenerateRange";
    case ErrorKind::SingularShift: return "SingularShift";
    case ErrorKind::Unstable: return "Unstable";
    case ErrorKind::AssumptionViolated: return "AssumptionViolated";
    case ErrorKind::InfeasiblePair: return "InfeasiblePair";
    case ErrorKind::NumeratorOutOfRange: return "NumeratorOutOfRange";
    case ErrorKind::InvalidUserP: return "InvalidUserP";
    case ErrorKind::HorizonCapExceeded: return "HorizonCapExceeded";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::Usage: return "Usage";
  }
  return "Unknown";
}

bool set_tolerance(Tolerances& tol, std::string_view name, double value) {
  if (name == "symmetry") tol.symmetry = value;
  else if (name == "jacobi_offdiag") tol.jacobi_offdiag = value;
  else if (name == "jacobi_max_sweeps") tol.jacobi_max_sweeps = static_cast<int>(value);
  else if (name == "positive_definite") tol.positive_definite = value;
  else if (name == "singular_pivot") tol.singular_pivot = value;
  else if (name == "lyapunov_residual") tol.lyapunov_residual = value;
  else if (name == "psd") tol.psd = value;
  else if (name == "positivity") tol.positivity = value;
  else if (name == "feasibility") tol.feasibility = value;
  else if (name == "numerator") tol.numerator = value;
  else if (name == "norm_margin") tol.norm_margin = value;
  else if (name == "decision_slack") tol.decision_slack = value;
  else return false;
  return true;
}

}  // namespace qreach
