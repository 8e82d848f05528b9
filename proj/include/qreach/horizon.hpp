#pragma once

// Certified stopping horizon for stable linear systems.
//
// For a homogenized task (b = 0) write s_k for the per-step maximum of the
// objective minus its constant offset; s_k -> 0 when rho(A) < 1. Given any
// P with P - A'PA > 0 and t with tP - Q >= 0, the envelope
//
//   U(k) = (sqrt(t) mu(P) ||A||_P^k + V)^2 - V^2,   V = ||q|| / (2 sqrt(t lmin(P)))
//
// bounds s_k from above, and K(t, P) is the first k with U(k) <= S, where S
// is a value already reached by the sequence. The supremum over all k is then
// reached at some k < K.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qreach/model.hpp"

namespace qreach {

struct StabilityCertificate {
  Mat P;
  double residual_margin = 0.0;  // lmin(P - A'PA)
  double norm_A_P = 0.0;
  double lmin_P = 0.0;

  friend bool operator==(const StabilityCertificate&, const StabilityCertificate&) = default;
};

// Validates P against A: P > 0, lmin(P - A'PA) >= required_margin and
// 0 < ||A||_P < 1. Returns nullopt when any check fails.
std::optional<StabilityCertificate> certify(const Mat& a, const Mat& p,
                                            double required_margin,
                                            const Tolerances& tol = {});

// Solves P - A'PA = Id. Throws Unstable when no certificate results.
StabilityCertificate stability_certificate(const Mat& a, const Tolerances& tol = {},
                                           Exec exec = Exec::parallel);

struct NuValue {
  double value = 0.0;  // includes objective.constant
  std::size_t vertex = 0;
};

// max over vertices of the objective at A^k v (task must be homogenized).
NuValue nu(const VerificationTask& task, std::size_t k);

// First k <= cap with s_k > tol.positivity, or 0 directly when Q >= 0 and a
// box initial set meets one of the closed-form sufficient conditions.
std::optional<std::size_t> find_k_strict(const VerificationTask& task, std::size_t cap,
                                         const Tolerances& tol = {});

// min(max_v v'Qv, s_{k_strict}). Throws AssumptionViolated when <= positivity.
double s_value(const VerificationTask& task, std::size_t k_strict,
               const Tolerances& tol = {});

// sqrt(max_v v'Pv)
double mu(const Mat& p, const InitialSet& init);

struct BoundScalars {
  double t = 0.0;
  double S = 0.0;
  double V = 0.0;
  double mu = 0.0;
  std::size_t k_strict = 0;
  double log_argument = 0.0;  // (sqrt(S + V^2) - V) / (sqrt(t) mu)

  friend bool operator==(const BoundScalars&, const BoundScalars&) = default;
};

// Everything K(t, P) needs that does not depend on (t, P).
struct HorizonContext {
  Mat A;
  Mat Q;
  Vec q;
  InitialSet init;
  std::size_t k_strict = 0;
  double S = 0.0;
};

// Builds the context from a homogenized task. Throws Unstable if A admits no
// certificate, AssumptionViolated if k_strict is not found within cap or S <= 0.
HorizonContext make_horizon_context(const VerificationTask& task, std::size_t kstrict_cap,
                                    const Tolerances& tol = {});

struct KEvaluation {
  std::size_t K = 0;
  BoundScalars scalars;
  StabilityCertificate certificate;
};

// Throws InfeasiblePair, NumeratorOutOfRange, InvalidUserP (P not in Lyap(A)).
KEvaluation K_of(double t, const Mat& p, const HorizonContext& ctx,
                 const Tolerances& tol = {});

// Decreasing upper envelope U(k) of s_k for a feasible (t, P).
struct TailEnvelope {
  double sqrt_t_mu = 0.0;
  double norm_A_P = 0.0;
  double V = 0.0;

  double operator()(std::size_t k) const;
};

TailEnvelope tail_envelope(double t, const StabilityCertificate& cert, const Vec& q,
                           const InitialSet& init);

inline double tail_bound(std::size_t k, const TailEnvelope& env) { return env(k); }

enum class Strategy { automatic, identity, q_augmented, blend, user };

Strategy parse_strategy(std::string_view name);  // throws Usage
std::string_view to_string(Strategy s);

// Which branch of the horizon minimum a candidate belongs to.
enum class Branch {
  t_optimal,     // P in Lyap(A), t = lmax(P^{-1/2} Q P^{-1/2})
  unit_scaling,  // P in L_{A,Q}(1), t = 1
};

std::string_view to_string(Branch b);

struct Candidate {
  std::string label;
  Branch branch = Branch::t_optimal;
  double t = 0.0;
  Mat P;
};

struct CandidateOptions {
  Strategy strategy = Strategy::automatic;
  std::optional<Mat> user_P;
  double epsilon = 0.01;
  Tolerances tol;
  Exec exec = Exec::parallel;
};

// Throws InvalidUserP when a supplied P fails P - A'PA >= eps Id or P >= 0.
std::vector<Candidate> candidate_Ps(const Mat& a, const Mat& q,
                                    const CandidateOptions& options);

// F0 = max_v v'Pv, F1 = F0(P - Q), F2 = sum_v v'Pv, F3 = F2(P - Q), F4 = lmax(P).
std::array<double, 5> objective_scores(const Mat& p, const Mat& q, const InitialSet& init,
                                       const Tolerances& tol = {});

struct CandidateResult {
  std::string label;
  Branch branch = Branch::t_optimal;
  double t = 0.0;
  std::optional<std::size_t> K;
  std::string error;  // set when K is absent
  std::array<double, 5> scores{};

  friend bool operator==(const CandidateResult&, const CandidateResult&) = default;
};

struct HorizonBound {
  std::size_t K = 0;
  BoundScalars scalars;
  StabilityCertificate certificate;
  std::string strategy;
  Branch branch = Branch::t_optimal;
  std::vector<CandidateResult> candidates;

  friend bool operator==(const HorizonBound&, const HorizonBound&) = default;
};

struct HorizonOptions {
  std::size_t kstrict_cap = 10000;
  CandidateOptions candidates;
};

// Minimum of K_of over all candidates, with provenance. Task must be homogenized.
HorizonBound best_K(const VerificationTask& task, const HorizonOptions& options = {});
HorizonBound best_K(const HorizonContext& ctx, const HorizonOptions& options = {});

}  // namespace qreach
