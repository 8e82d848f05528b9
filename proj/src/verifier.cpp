#include "qreach/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qreach/error.hpp"
#include "qreach/kernels.hpp"

namespace qreach {

namespace {

constexpr double kMinusInf = -std::numeric_limits<double>::infinity();

struct Peak {
  double value = kMinusInf;
  std::size_t k = 0;
  std::size_t vertex = 0;
};

Peak peak_of(const kernels::NuSequence& seq) {
  Peak p;
  for (std::size_t k = 0; k < seq.values.size(); ++k)
    if (seq.values[k] > p.value) p = {seq.values[k], k, seq.argmax_vertex[k]};
  return p;
}

// Maps a vertex index of the homogenized set back to original coordinates.
Vec original_vertex(const VerificationTask& task, const VerificationTask& shifted,
                    const Vec& shift, std::size_t index) {
  if (task.init.size() == shifted.init.size()) return task.init.vertices()[index];
  Vec v = shifted.init.vertices()[index];
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += shift[i];
  return v;
}

kernels::NuSequence evaluate(const VerificationTask& h, std::size_t horizon, Exec exec) {
  return kernels::nu_sequence(exec, h.system.A, h.init.vertices(), h.objective.Q,
                              h.objective.q, h.objective.constant, horizon);
}

// Witness trajectory ending at step k; re-checks the violation on the
// original system so Disproved verdicts do not depend on the shifted model.
bool attach_witness(Verdict& verdict, const VerificationTask& task, const Vec& x0,
                    std::size_t k, double slack) {
  verdict.witness = trajectory(task.system, x0, k);
  const double reached = task.objective(verdict.witness.back());
  if (reached > verdict.alpha + slack) return true;
  std::ostringstream os;
  os << "re-simulated witness reaches " << reached << ", not above alpha + slack";
  verdict.notes.push_back(os.str());
  verdict.witness.clear();
  return false;
}

struct Envelope {
  TailEnvelope env;
  std::string label;
};

std::vector<Envelope> tail_envelopes(const VerificationTask& h, const CandidateOptions& opt) {
  std::vector<Envelope> out;
  const Tolerances& tol = opt.tol;
  for (const Candidate& c : candidate_Ps(h.system.A, h.objective.Q, opt)) {
    if (!(c.t > 0.0)) continue;
    const auto cert = certify(h.system.A, c.P, 0.0, tol);
    if (!cert) continue;
    const double slack = lambda_min(
        symmetrized(c.t * cert->P - h.objective.Q, Tolerances{.symmetry = 1e-9}), tol);
    if (slack < -tol.feasibility * h.objective.Q.frobenius_norm()) continue;
    out.push_back({tail_envelope(c.t, *cert, h.objective.q, h.init),
                   c.label + "/" + std::string(to_string(c.branch))});
  }
  return out;
}

Verdict verify_by_tail(const VerificationTask& task, const VerificationTask& h,
                       const Vec& shift, const VerifyOptions& options, Verdict verdict) {
  const Tolerances& tol = options.horizon.candidates.tol;
  const double alpha = verdict.alpha;
  const double offset = h.objective.constant;
  const auto envelopes = tail_envelopes(h, options.horizon.candidates);

  // Smallest horizon at which some envelope drops under alpha.
  std::size_t horizon = options.horizon_cap;
  const Envelope* chosen = envelopes.empty() ? nullptr : &envelopes.front();
  for (const Envelope& e : envelopes) {
    for (std::size_t k = 0; k < horizon; ++k) {
      if (e.env(k) + offset <= alpha) {
        horizon = k;
        chosen = &e;
        break;
      }
    }
  }

  const auto seq = evaluate(h, horizon, options.horizon.candidates.exec);
  const Peak peak = peak_of(seq);
  TailInfo info;
  info.horizon = horizon;
  info.sampled_max = peak.value;
  info.sampled_arg_k = peak.k;
  info.bound = chosen ? chosen->env(horizon) + offset : std::numeric_limits<double>::infinity();
  info.strategy = chosen ? chosen->label : "none";
  verdict.tail = info;

  for (std::size_t k = 0; k < seq.values.size(); ++k) {
    if (seq.values[k] > alpha + tol.decision_slack) {
      const Vec x0 = original_vertex(task, h, shift, seq.argmax_vertex[k]);
      verdict.status = attach_witness(verdict, task, x0, k, tol.decision_slack)
                           ? Status::Disproved
                           : Status::Inconclusive;
      return verdict;
    }
  }
  verdict.status = (peak.value <= alpha && info.bound <= alpha) ? Status::ProvedByTailBound
                                                                : Status::Inconclusive;
  return verdict;
}

}  // namespace

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Proved: return "Proved";
    case Status::Disproved: return "Disproved";
    case Status::ProvedByTailBound: return "ProvedByTailBound";
    case Status::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

Status parse_status(std::string_view name) {
  for (Status s : {Status::Proved, Status::Disproved, Status::ProvedByTailBound,
                   Status::Inconclusive})
    if (to_string(s) == name) return s;
  throw Error(ErrorKind::ParseError, "unknown verdict status '" + std::string(name) + "'");
}

std::vector<Vec> trajectory(const AffineSystem& system, const Vec& x0, std::size_t k) {
  std::vector<Vec> out;
  out.reserve(k + 1);
  out.push_back(x0);
  for (std::size_t i = 0; i < k; ++i) {
    Vec next = system.A * std::span<const double>(out.back());
    for (std::size_t j = 0; j < next.size(); ++j) next[j] += system.b[j];
    out.push_back(std::move(next));
  }
  return out;
}

Optimum optimize(const VerificationTask& task, const VerifyOptions& options) {
  const Tolerances& tol = options.horizon.candidates.tol;
  const Vec shift = affine_shift(task.system, tol);
  const VerificationTask h = homogenize(task, tol);
  HorizonBound bound = best_K(h, options.horizon);
  if (bound.K > options.horizon_cap) {
    throw Error(ErrorKind::HorizonCapExceeded,
                "certified horizon " + std::to_string(bound.K) + " exceeds cap " +
                    std::to_string(options.horizon_cap));
  }
  const Peak peak = peak_of(evaluate(h, bound.K, options.horizon.candidates.exec));
  return Optimum{peak.value, peak.k, original_vertex(task, h, shift, peak.vertex),
                 std::move(bound)};
}

Verdict verify(const VerificationTask& task, const VerifyOptions& options) {
  if (!task.objective.alpha)
    throw Error(ErrorKind::Usage, "verify needs a sublevel bound alpha");
  const Tolerances& tol = options.horizon.candidates.tol;
  Verdict verdict;
  verdict.alpha = *task.objective.alpha;
  if (lambda_min(task.objective.Q, tol) < -tol.psd)
    verdict.notes.push_back(
        "Q is indefinite: vertex maxima are not guaranteed to be the per-step maxima");

  try {
    Optimum opt = optimize(task, options);
    const double value = opt.value;
    const Vec x0 = opt.arg_vertex;
    const std::size_t k = opt.arg_k;
    verdict.optimum = std::move(opt);
    if (value <= verdict.alpha) {
      verdict.status = Status::Proved;
    } else if (value > verdict.alpha + tol.decision_slack) {
      verdict.status = attach_witness(verdict, task, x0, k, tol.decision_slack)
                           ? Status::Disproved
                           : Status::Inconclusive;
    } else {
      verdict.status = Status::Inconclusive;
      std::ostringstream os;
      os << "optimum " << value << " lies within slack of alpha " << verdict.alpha;
      verdict.notes.push_back(os.str());
    }
    return verdict;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::AssumptionViolated && e.kind() != ErrorKind::HorizonCapExceeded)
      throw;
    verdict.notes.push_back(std::string("exact horizon unavailable (") +
                            std::string(to_string(e.kind())) + ": " + e.what() +
                            "); using the tail bound");
  }
  const Vec shift = affine_shift(task.system, tol);
  return verify_by_tail(task, homogenize(task, tol), shift, options, std::move(verdict));
}

OracleReport brute_force_oracle(const VerificationTask& task, std::size_t horizon,
                                const Tolerances& tol) {
  OracleReport r;
  r.horizon = horizon;
  r.offset = task.objective(affine_shift(task.system, tol));
  r.nu_samples.assign(horizon + 1, kMinusInf);

  for (const Vec& v : task.init.vertices()) {
    Vec x = v;
    for (std::size_t k = 0;; ++k) {
      r.nu_samples[k] = std::max(r.nu_samples[k], task.objective(x));
      if (k == horizon) break;
      Vec next = task.system.A * std::span<const double>(x);
      for (std::size_t j = 0; j < next.size(); ++j) next[j] += task.system.b[j];
      x = std::move(next);
    }
  }

  r.sup_emp = kMinusInf;
  for (std::size_t k = 0; k <= horizon; ++k)
    if (r.nu_samples[k] > r.sup_emp) {
      r.sup_emp = r.nu_samples[k];
      r.arg_sup = k;
    }

  std::vector<double> s(horizon + 1);
  for (std::size_t k = 0; k <= horizon; ++k) s[k] = r.nu_samples[k] - r.offset;

  for (std::size_t k = 0; k <= horizon; ++k) {
    if (!r.k_geq_emp && s[k] >= -tol.positivity) r.k_geq_emp = k;
    if (!r.k_strict_emp && s[k] > tol.positivity) r.k_strict_emp = k;
  }

  // The sequence tends to 0, so the true tail supremum is never below 0;
  // thresholds are clamped at -/+ positivity accordingly.
  std::vector<double> tail(horizon + 1, kMinusInf);  // max_{k<j<=H} s_j
  for (std::size_t k = horizon; k-- > 0;) tail[k] = std::max(tail[k + 1], s[k + 1]);
  double running = kMinusInf;
  for (std::size_t k = 0; k <= horizon; ++k) {
    running = std::max(running, s[k]);
    if (!r.K_geq_emp && running >= std::max(tail[k], -tol.positivity)) r.K_geq_emp = k;
    if (!r.K_strict_emp && running > std::max(tail[k], tol.positivity)) r.K_strict_emp = k;
  }
  return r;
}

}  // namespace qreach
