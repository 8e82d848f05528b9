#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

#include "qreach/error.hpp"
#include "qreach/horizon.hpp"

namespace qreach::cli {

enum class ReportFormat { text, json };

struct RunConfig {
  std::string command;  // verify | bound | simulate | export
  std::string input;
  std::size_t horizon_cap = 10000;
  std::size_t kstrict_cap = 10000;
  std::optional<std::size_t> oracle_horizon;
  double epsilon = 0.01;
  Tolerances tol;
  ReportFormat report = ReportFormat::text;
  Strategy strategy = Strategy::automatic;
  std::optional<std::string> user_P_path;
  std::optional<double> alpha_override;
  Exec exec = Exec::parallel;
};

// Exit codes: 0 Proved / ProvedByTailBound (or success for non-verify
// commands), 1 Disproved, 2 Inconclusive, 3 + ErrorKind index for errors.
int exit_code(ErrorKind kind);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv with CLI11 and dispatches to run().
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace qreach::cli
