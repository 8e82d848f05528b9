#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qreach/horizon.hpp"

namespace qreach {

struct VerifyOptions {
  HorizonOptions horizon;
  std::size_t horizon_cap = 10000;  // largest K (or tail horizon) evaluated
};

struct Optimum {
  double value = 0.0;
  std::size_t arg_k = 0;
  Vec arg_vertex;  // original coordinates
  HorizonBound bound;

  friend bool operator==(const Optimum&, const Optimum&) = default;
};

enum class Status { Proved, Disproved, ProvedByTailBound, Inconclusive };

std::string_view to_string(Status s);
Status parse_status(std::string_view name);

struct TailInfo {
  std::size_t horizon = 0;
  double bound = 0.0;           // U(horizon) + objective constant
  double sampled_max = 0.0;     // max of the objective over k <= horizon
  std::size_t sampled_arg_k = 0;
  std::string strategy;

  friend bool operator==(const TailInfo&, const TailInfo&) = default;
};

struct Verdict {
  Status status = Status::Inconclusive;
  double alpha = 0.0;
  std::optional<Optimum> optimum;
  std::vector<Vec> witness;  // x_0 .. x_k, original coordinates
  std::optional<TailInfo> tail;
  std::vector<std::string> notes;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

// x_0 .. x_k of x_{i+1} = A x_i + b.
std::vector<Vec> trajectory(const AffineSystem& system, const Vec& x0, std::size_t k);

// Exact supremum of the objective over the reachable set. Throws Unstable,
// AssumptionViolated, HorizonCapExceeded.
Optimum optimize(const VerificationTask& task, const VerifyOptions& options = {});

// Throws Usage when the objective has no alpha; propagates Unstable.
Verdict verify(const VerificationTask& task, const VerifyOptions& options = {});

struct OracleReport {
  std::size_t horizon = 0;
  std::vector<double> nu_samples;  // objective maxima, k = 0..horizon
  double offset = 0.0;             // objective at the fixed point; the limit of nu_k
  double sup_emp = 0.0;
  std::size_t arg_sup = 0;
  // Stopping ranks of the centred sequence s_k = nu_k - offset.
  std::optional<std::size_t> k_strict_emp;
  std::optional<std::size_t> k_geq_emp;
  std::optional<std::size_t> K_strict_emp;
  std::optional<std::size_t> K_geq_emp;

  friend bool operator==(const OracleReport&, const OracleReport&) = default;
};

// Brute force by direct simulation of the affine system from every vertex.
OracleReport brute_force_oracle(const VerificationTask& task, std::size_t horizon,
                                const Tolerances& tol = {});

}  // namespace qreach
