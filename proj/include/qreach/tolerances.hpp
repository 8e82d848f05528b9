#pragma once

#include <cstddef>
#include <string_view>

namespace qreach {

// Every numeric threshold used by the engine lives here so that a single
// record can be overridden from the command line.
struct Tolerances {
  double symmetry = 1e-12;          // relative asymmetry accepted as symmetric
  double jacobi_offdiag = 1e-12;    // Jacobi stops at off(M) <= this * ||M||_F
  int jacobi_max_sweeps = 100;
  double positive_definite = 1e-12; // lmin > this * max(1, lmax)
  double singular_pivot = 1e-13;    // pivot / max|entry| below this is singular
  double lyapunov_residual = 1e-8;  // ||P - A'PA - C||_F <= this * (1 + ||C||_F)
  double psd = 1e-10;               // lmin(Q) >= -this counts as Q >= 0
  double positivity = 1e-12;        // nu_k > this counts as strictly positive
  double feasibility = 1e-8;        // lmin(tP - Q) >= -this * ||Q||_F
  double numerator = 1e-12;         // log argument allowed up to 1 + this
  double norm_margin = 1e-12;       // ||A||_P must lie in (this, 1 - this)
  double decision_slack = 1e-9;     // absolute slack when comparing to alpha
};

// Sets the field named `name`; returns false for unknown names.
bool set_tolerance(Tolerances& tol, std::string_view name, double value);

}  // namespace qreach
