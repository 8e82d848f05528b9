#include "qreach/cli.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "qreach/error.hpp"
#include "qreach/io.hpp"

namespace qreach::cli {

namespace {

constexpr int kFirstErrorCode = 3;

std::string format_vec(std::span<const double> v) {
  std::ostringstream os;
  os << std::setprecision(10) << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ")";
  return os.str();
}

VerifyOptions verify_options(const RunConfig& cfg) {
  VerifyOptions opt;
  opt.horizon_cap = cfg.horizon_cap;
  opt.horizon.kstrict_cap = cfg.kstrict_cap;
  opt.horizon.candidates.strategy = cfg.strategy;
  opt.horizon.candidates.epsilon = cfg.epsilon;
  opt.horizon.candidates.tol = cfg.tol;
  opt.horizon.candidates.exec = cfg.exec;
  if (cfg.user_P_path) opt.horizon.candidates.user_P = parse_matrix_file(*cfg.user_P_path);
  return opt;
}

void validate(const RunConfig& cfg) {
  if (cfg.horizon_cap == 0 || cfg.kstrict_cap == 0)
    throw Error(ErrorKind::Usage, "caps must be positive");
  if (!(cfg.epsilon > 0.0)) throw Error(ErrorKind::Usage, "epsilon must be positive");
  if (cfg.oracle_horizon && *cfg.oracle_horizon == 0)
    throw Error(ErrorKind::Usage, "oracle horizon must be positive");
}

void print_bound(std::ostream& out, const HorizonBound& b) {
  out << "horizon K: " << b.K << " (strategy " << b.strategy << ", " << to_string(b.branch)
      << ")\n";
  out << "  t = " << b.scalars.t << ", S = " << b.scalars.S << ", V = " << b.scalars.V
      << ", mu = " << b.scalars.mu << ", k_strict = " << b.scalars.k_strict
      << ", ||A||_P = " << b.certificate.norm_A_P << "\n";
}

void print_candidates(std::ostream& out, const HorizonBound& b) {
  out << "candidates:\n";
  for (const CandidateResult& c : b.candidates) {
    out << "  " << std::left << std::setw(18) << c.label << std::setw(13) << to_string(c.branch)
        << " t = " << std::setw(12) << c.t << " K = ";
    if (c.K)
      out << std::setw(8) << *c.K;
    else
      out << std::setw(8) << "-";
    out << " F0..F4 =";
    for (double f : c.scores) out << " " << f;
    if (!c.error.empty()) out << "  [" << c.error << "]";
    out << "\n";
  }
  out << std::right;
}

void print_verdict(std::ostream& out, const Verdict& v) {
  out << "status: " << to_string(v.status) << "\n";
  out << "alpha: " << v.alpha << "\n";
  if (v.optimum) {
    out << "optimum: " << v.optimum->value << " at k = " << v.optimum->arg_k << " from vertex "
        << format_vec(v.optimum->arg_vertex) << "\n";
    print_bound(out, v.optimum->bound);
  }
  if (v.tail) {
    out << "tail bound: U(" << v.tail->horizon << ") = " << v.tail->bound << " (" << v.tail->strategy
        << "), sampled max " << v.tail->sampled_max << " at k = " << v.tail->sampled_arg_k << "\n";
  }
  if (!v.witness.empty()) {
    out << "witness (" << v.witness.size() << " states):\n";
    for (std::size_t k = 0; k < v.witness.size(); ++k)
      out << "  x_" << k << " = " << format_vec(v.witness[k]) << "\n";
  }
  for (const std::string& n : v.notes) out << "note: " << n << "\n";
}

void print_oracle(std::ostream& out, const OracleReport& r) {
  auto opt = [](const std::optional<std::size_t>& v) {
    return v ? std::to_string(*v) : std::string("not found");
  };
  out << "horizon: " << r.horizon << "\n";
  out << "sup: " << r.sup_emp << " at k = " << r.arg_sup << "\n";
  out << "offset: " << r.offset << "\n";
  out << "k_strict: " << opt(r.k_strict_emp) << ", k_geq: " << opt(r.k_geq_emp)
      << ", K_strict: " << opt(r.K_strict_emp) << ", K_geq: " << opt(r.K_geq_emp) << "\n";
}

int verdict_code(Status s) {
  switch (s) {
    case Status::Proved:
    case Status::ProvedByTailBound: return 0;
    case Status::Disproved: return 1;
    case Status::Inconclusive: return 2;
  }
  return 2;
}

int dispatch(const RunConfig& cfg, std::ostream& out) {
  validate(cfg);
  VerificationTask task = parse_input(cfg.input);
  if (cfg.alpha_override) task.objective.alpha = cfg.alpha_override;
  const VerifyOptions opt = verify_options(cfg);
  const bool as_json = cfg.report == ReportFormat::json;

  if (cfg.command == "verify") {
    const Verdict v = verify(task, opt);
    if (as_json)
      out << json{{"command", "verify"}, {"verdict", v}}.dump(2) << "\n";
    else
      print_verdict(out, v);
    return verdict_code(v.status);
  }
  if (cfg.command == "bound") {
    const HorizonBound b = best_K(homogenize(task, cfg.tol), opt.horizon);
    if (as_json) {
      out << json{{"command", "bound"}, {"bound", b}}.dump(2) << "\n";
    } else {
      print_bound(out, b);
      print_candidates(out, b);
    }
    return 0;
  }
  if (cfg.command == "simulate") {
    std::size_t horizon = 1000;
    if (cfg.oracle_horizon) {
      horizon = *cfg.oracle_horizon;
    } else {
      try {
        const std::size_t K = best_K(homogenize(task, cfg.tol), opt.horizon).K;
        horizon = std::max(10 * K, K + 500);
      } catch (const Error&) {
      }
    }
    const OracleReport r = brute_force_oracle(task, horizon, cfg.tol);
    if (as_json)
      out << json{{"command", "simulate"}, {"oracle", r}}.dump(2) << "\n";
    else
      print_oracle(out, r);
    return 0;
  }
  if (cfg.command == "export") {
    out << export_problem(task, cfg.epsilon, cfg.tol).dump(2) << "\n";
    return 0;
  }
  throw Error(ErrorKind::Usage, "unknown command '" + cfg.command + "'");
}

}  // namespace

int exit_code(ErrorKind kind) { return kFirstErrorCode + static_cast<int>(kind); }

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(config, out);
  } catch (const Error& e) {
    if (config.report == ReportFormat::json)
      out << json{{"command", config.command},
                  {"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}}}
                 .dump(2)
          << "\n";
    else
      err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  }
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact verification of quadratic invariants for stable affine systems"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::string report = "text";
  std::string strategy = "auto";
  std::string user_p;
  double alpha = 0.0;
  std::vector<std::string> tol_overrides;
  bool serial = false;

  app.add_option("--horizon-cap", cfg.horizon_cap, "largest horizon evaluated")->capture_default_str();
  app.add_option("--kstrict-cap", cfg.kstrict_cap, "scan limit for the first positive step")
      ->capture_default_str();
  auto* oracle_opt = app.add_option("--oracle-horizon", "steps simulated by 'simulate'");
  app.add_option("--epsilon", cfg.epsilon, "Lyapunov margin required of a user P")
      ->capture_default_str();
  app.add_option("--report", report, "report format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_option("--strategy", strategy, "P candidate source")
      ->check(CLI::IsMember({"auto", "identity", "q-augmented", "blend", "user"}))
      ->capture_default_str();
  auto* user_opt = app.add_option("--user-P", user_p, "JSON file holding a candidate P");
  auto* alpha_opt = app.add_option("--alpha-override", alpha, "replace the property level");
  app.add_option("--tol", tol_overrides, "tolerance override, name=value (repeatable)");
  app.add_flag("--serial", serial, "use the serial reference kernels");

  for (const char* name : {"verify", "bound", "simulate", "export"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("input", cfg.input, "task JSON file")->required();
    sub->callback([&cfg, name] { cfg.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (report == "json")
      out << json{{"command", cfg.command},
                  {"error", {{"kind", to_string(ErrorKind::Usage)}, {"message", e.what()}}}}
                 .dump(2)
          << "\n";
    else
      err << "error: " << e.what() << "\n";
    return exit_code(ErrorKind::Usage);
  }

  cfg.report = report == "json" ? ReportFormat::json : ReportFormat::text;
  cfg.strategy = parse_strategy(strategy);
  cfg.exec = serial ? Exec::serial : Exec::parallel;
  if (*oracle_opt) cfg.oracle_horizon = oracle_opt->as<std::size_t>();
  if (*user_opt) cfg.user_P_path = user_p;
  if (*alpha_opt) cfg.alpha_override = alpha;
  for (const std::string& kv : tol_overrides) {
    const auto eq = kv.find('=');
    bool ok = eq != std::string::npos;
    if (ok) {
      try {
        ok = set_tolerance(cfg.tol, kv.substr(0, eq), std::stod(kv.substr(eq + 1)));
      } catch (const std::exception&) {
        ok = false;
      }
    }
    if (!ok) {
      err << "error: bad tolerance override '" << kv << "'\n";
      return exit_code(ErrorKind::Usage);
    }
  }
  return run(cfg, out, err);
}

}  // namespace qreach::cli
