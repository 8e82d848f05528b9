#include "qreach/horizon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qreach/error.hpp"

namespace qreach {

namespace {

bool is_zero(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

bool is_psd(const Mat& m, const Tolerances& tol) { return lambda_min(m, tol) >= -tol.psd; }

// max over vertices of y'Qy + q'y with no constant offset.
double centred_max(const Mat& q_mat, std::span<const double> q_vec,
                   const std::vector<Vec>& points) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec& y : points) best = std::max(best, quad_form(q_mat, y) + dot(q_vec, y));
  return best;
}

void require_linear(const VerificationTask& task, const char* what) {
  if (!task.system.linear())
    throw Error(ErrorKind::Usage, std::string(what) + ": task must be homogenized (b = 0)");
}

Mat lyapunov_or_unstable(const Mat& a, const Mat& c, const Tolerances& tol, Exec exec) {
  try {
    return lyapunov_solve(a, c, tol, exec);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularSystem) throw;
    throw Error(ErrorKind::Unstable, std::string("no Lyapunov certificate: ") + e.what());
  }
}

}  // namespace

std::optional<StabilityCertificate> certify(const Mat& a, const Mat& p, double required_margin,
                                            const Tolerances& tol) {
  if (!p.square() || p.rows() != a.rows() || !p.all_finite()) return std::nullopt;
  if (!is_symmetric(p, tol.symmetry)) return std::nullopt;
  const Mat ps = symmetrized(p, tol);
  const SymEig pe = sym_eig(ps, tol);
  if (!(pe.min() > tol.positive_definite * std::max(1.0, pe.max()))) return std::nullopt;

  const Mat residual = ps - a.transpose() * ps * a;
  const double margin = lambda_min(symmetrized(residual, Tolerances{.symmetry = 1e-9}), tol);
  if (!(margin > 0.0) || margin < required_margin) return std::nullopt;

  const double norm = weighted_opnorm(a, ps, tol);
  if (!(norm < 1.0 - tol.norm_margin)) return std::nullopt;
  return StabilityCertificate{ps, margin, norm, pe.min()};
}

StabilityCertificate stability_certificate(const Mat& a, const Tolerances& tol, Exec exec) {
  const Mat p = lyapunov_or_unstable(a, Mat::identity(a.rows()), tol, exec);
  auto cert = certify(a, p, 0.0, tol);
  if (!cert)
    throw Error(ErrorKind::Unstable,
                "solution of P - A'PA = Id is not positive definite; rho(A) >= 1");
  return *cert;
}

NuValue nu(const VerificationTask& task, std::size_t k) {
  require_linear(task, "nu");
  const Mat ak = mat_pow(task.system.A, k);
  NuValue best{-std::numeric_limits<double>::infinity(), 0};
  const auto& vs = task.init.vertices();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const double value = task.objective(ak * std::span<const double>(vs[i]));
    if (value > best.value) best = {value, i};
  }
  return best;
}

std::optional<std::size_t> find_k_strict(const VerificationTask& task, std::size_t cap,
                                         const Tolerances& tol) {
  require_linear(task, "find_k_strict");
  const Mat& Q = task.objective.Q;
  const Vec& q = task.objective.q;

  const auto& box = task.init.box();
  if (box && Q.max_abs() > 0.0 && is_psd(Q, tol)) {
    const bool q_zero = is_zero(q);
    const auto& vs = task.init.vertices();
    const bool nontrivial = std::any_of(vs.begin(), vs.end(), [](const Vec& v) { return !is_zero(v); });
    if (q_zero && nontrivial && is_positive_definite(Q, tol)) return 0;
    if (q_zero && box->has_interior()) return 0;
    if (!q_zero && box->contains_origin_in_interior()) return 0;
  }

  std::vector<Vec> points = task.init.vertices();
  const Mat& A = task.system.A;
  for (std::size_t k = 0; k <= cap; ++k) {
    if (centred_max(Q, q, points) > tol.positivity) return k;
    for (Vec& y : points) y = A * std::span<const double>(y);
  }
  return std::nullopt;
}

double s_value(const VerificationTask& task, std::size_t k_strict, const Tolerances& tol) {
  require_linear(task, "s_value");
  double max_q = -std::numeric_limits<double>::infinity();
  for (const Vec& v : task.init.vertices()) max_q = std::max(max_q, quad_form(task.objective.Q, v));
  const double reached = nu(task, k_strict).value - task.objective.constant;
  const double s = std::min(max_q, reached);
  if (!(s > tol.positivity)) {
    std::ostringstream os;
    os << "threshold S = " << s << " is not positive (max x'Qx = " << max_q
       << ", value at k_strict = " << reached << ")";
    throw Error(ErrorKind::AssumptionViolated, os.str());
  }
  return s;
}

double mu(const Mat& p, const InitialSet& init) {
  double best = 0.0;
  for (const Vec& v : init.vertices()) best = std::max(best, quad_form(p, v));
  return std::sqrt(best);
}

HorizonContext make_horizon_context(const VerificationTask& task, std::size_t kstrict_cap,
                                    const Tolerances& tol) {
  require_linear(task, "make_horizon_context");
  stability_certificate(task.system.A, tol);
  const auto k_strict = find_k_strict(task, kstrict_cap, tol);
  if (!k_strict)
    throw Error(ErrorKind::AssumptionViolated,
                "no k <= " + std::to_string(kstrict_cap) + " with a positive per-step maximum");
  const double S = s_value(task, *k_strict, tol);
  return HorizonContext{task.system.A, task.objective.Q, task.objective.q, task.init, *k_strict, S};
}

KEvaluation K_of(double t, const Mat& p, const HorizonContext& ctx, const Tolerances& tol) {
  auto cert = certify(ctx.A, p, 0.0, tol);
  if (!cert) throw Error(ErrorKind::InvalidUserP, "K_of: P does not satisfy P > 0, P - A'PA > 0");
  if (!(t > 0.0)) throw Error(ErrorKind::InfeasiblePair, "K_of: t must be positive");

  const double slack = lambda_min(symmetrized(t * cert->P - ctx.Q, Tolerances{.symmetry = 1e-9}), tol);
  if (slack < -tol.feasibility * ctx.Q.frobenius_norm()) {
    std::ostringstream os;
    os << "K_of: tP - Q has eigenvalue " << slack << " for t = " << t;
    throw Error(ErrorKind::InfeasiblePair, os.str());
  }

  BoundScalars sc;
  sc.t = t;
  sc.S = ctx.S;
  sc.k_strict = ctx.k_strict;
  sc.V = norm2(ctx.q) / (2.0 * std::sqrt(t * cert->lmin_P));
  sc.mu = mu(cert->P, ctx.init);
  // sqrt(S + V^2) - V written without cancellation.
  sc.log_argument = ctx.S / ((std::sqrt(ctx.S + sc.V * sc.V) + sc.V) * std::sqrt(t) * sc.mu);
  if (!(sc.log_argument > 0.0) || sc.log_argument > 1.0 + tol.numerator) {
    std::ostringstream os;
    os << "K_of: log argument " << sc.log_argument << " outside (0, 1]";
    throw Error(ErrorKind::NumeratorOutOfRange, os.str());
  }
  const double g = std::min(sc.log_argument, 1.0);

  std::size_t K = 1;
  if (cert->norm_A_P > 0.0) {
    const double ratio = std::log(g) / std::log(cert->norm_A_P);
    if (!(ratio < 1e15))
      throw Error(ErrorKind::HorizonCapExceeded, "K_of: horizon is not representable");
    K = static_cast<std::size_t>(std::floor(ratio)) + 1;
  }
  return KEvaluation{K, sc, *std::move(cert)};
}

double TailEnvelope::operator()(std::size_t k) const {
  const double a = sqrt_t_mu * std::pow(norm_A_P, static_cast<double>(k));
  return a * (a + 2.0 * V);
}

TailEnvelope tail_envelope(double t, const StabilityCertificate& cert, const Vec& q,
                           const InitialSet& init) {
  return TailEnvelope{std::sqrt(t) * mu(cert.P, init), cert.norm_A_P,
                      norm2(q) / (2.0 * std::sqrt(t * cert.lmin_P))};
}

Strategy parse_strategy(std::string_view name) {
  if (name == "auto") return Strategy::automatic;
  if (name == "identity") return Strategy::identity;
  if (name == "q-augmented") return Strategy::q_augmented;
  if (name == "blend") return Strategy::blend;
  if (name == "user") return Strategy::user;
  throw Error(ErrorKind::Usage, "unknown strategy '" + std::string(name) + "'");
}

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::automatic: return "auto";
    case Strategy::identity: return "identity";
    case Strategy::q_augmented: return "q-augmented";
    case Strategy::blend: return "blend";
    case Strategy::user: return "user";
  }
  return "auto";
}

std::string_view to_string(Branch b) {
  return b == Branch::t_optimal ? "t-optimal" : "unit-scaling";
}

std::vector<Candidate> candidate_Ps(const Mat& a, const Mat& q, const CandidateOptions& opt) {
  const Tolerances& tol = opt.tol;
  const std::size_t d = a.rows();
  const bool want_all = opt.strategy == Strategy::automatic;
  const bool q_psd = is_psd(q, tol);
  std::vector<Candidate> out;

  auto t_optimal = [&](std::string label, Mat p) {
    out.push_back({std::move(label), Branch::t_optimal, generalized_lmax(q, p, tol), std::move(p)});
  };

  const Mat p0 = lyapunov_or_unstable(a, Mat::identity(d), tol, opt.exec);
  if (want_all || opt.strategy == Strategy::identity) t_optimal("lyapunov-identity", p0);

  std::optional<Mat> p1;
  if (q_psd && (want_all || opt.strategy == Strategy::q_augmented ||
                opt.strategy == Strategy::blend)) {
    Mat p = lyapunov_or_unstable(a, Mat::identity(d) + q, tol, opt.exec);
    p *= std::max(1.0, generalized_lmax(q, p, tol));
    p1 = std::move(p);
  }
  if (p1 && (want_all || opt.strategy == Strategy::q_augmented))
    out.push_back({"q-augmented", Branch::unit_scaling, 1.0, *p1});
  if (p1 && (want_all || opt.strategy == Strategy::blend)) {
    for (double theta : {0.25, 0.5, 0.75}) {
      std::ostringstream label;
      label << "blend-" << theta;
      t_optimal(label.str(), theta * p0 + (1.0 - theta) * *p1);
    }
  }

  if (opt.strategy == Strategy::user && !opt.user_P)
    throw Error(ErrorKind::Usage, "strategy 'user' requires a user-supplied P");
  if (opt.user_P && (want_all || opt.strategy == Strategy::user)) {
    const Mat& p = *opt.user_P;
    if (!p.square() || p.rows() != d)
      throw Error(ErrorKind::InvalidUserP, "user P has the wrong shape");
    if (!is_symmetric(p, tol.symmetry)) throw Error(ErrorKind::InvalidUserP, "user P is not symmetric");
    const Mat ps = symmetrized(p, tol);
    if (lambda_min(ps, tol) < -tol.psd) throw Error(ErrorKind::InvalidUserP, "user P is not PSD");
    const Mat lyap = ps - a.transpose() * ps * a - opt.epsilon * Mat::identity(d);
    const double margin = lambda_min(symmetrized(lyap, Tolerances{.symmetry = 1e-9}), tol);
    if (margin < -tol.feasibility) {
      std::ostringstream os;
      os << "user P violates P - A'PA >= " << opt.epsilon << " Id (lmin " << margin << ")";
      throw Error(ErrorKind::InvalidUserP, os.str());
    }
    t_optimal("user", ps);
    const double dominance = lambda_min(symmetrized(ps - q, Tolerances{.symmetry = 1e-9}), tol);
    if (dominance >= -tol.feasibility * std::max(1.0, q.frobenius_norm()))
      out.push_back({"user", Branch::unit_scaling, 1.0, ps});
  }
  return out;
}

std::array<double, 5> objective_scores(const Mat& p, const Mat& q, const InitialSet& init,
                                       const Tolerances& tol) {
  const Mat diff = p - q;
  double f0 = -std::numeric_limits<double>::infinity(), f1 = f0, f2 = 0.0, f3 = 0.0;
  for (const Vec& v : init.vertices()) {
    const double a = quad_form(p, v);
    const double b = quad_form(diff, v);
    f0 = std::max(f0, a);
    f1 = std::max(f1, b);
    f2 += a;
    f3 += b;
  }
  return {f0, f1, f2, f3, lambda_max(p, tol)};
}

HorizonBound best_K(const HorizonContext& ctx, const HorizonOptions& options) {
  const Tolerances& tol = options.candidates.tol;
  const auto candidates = candidate_Ps(ctx.A, ctx.Q, options.candidates);

  HorizonBound best;
  bool found = false;
  std::string last_error = "no candidates";
  for (const Candidate& c : candidates) {
    CandidateResult r{c.label, c.branch, c.t, std::nullopt, {},
                      objective_scores(c.P, ctx.Q, ctx.init, tol)};
    try {
      KEvaluation e = K_of(c.t, c.P, ctx, tol);
      r.K = e.K;
      if (!found || e.K < best.K) {
        best.K = e.K;
        best.scalars = e.scalars;
        best.certificate = std::move(e.certificate);
        best.strategy = c.label;
        best.branch = c.branch;
        found = true;
      }
    } catch (const Error& err) {
      r.error = std::string(to_string(err.kind())) + ": " + err.what();
      last_error = r.error;
    }
    best.candidates.push_back(std::move(r));
  }
  if (!found)
    throw Error(ErrorKind::InfeasiblePair, "no candidate pair produced a horizon (" + last_error + ")");
  return best;
}

HorizonBound best_K(const VerificationTask& task, const HorizonOptions& options) {
  return best_K(make_horizon_context(task, options.kstrict_cap, options.candidates.tol), options);
}

}  // namespace qreach
