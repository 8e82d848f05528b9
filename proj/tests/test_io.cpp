#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "qreach/cli.hpp"
#include "qreach/error.hpp"
#include "qreach/io.hpp"

namespace qreach {
namespace {

std::string data(const std::string& name) { return std::string(QREACH_DATA_DIR) + "/" + name; }

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qreach");
  std::vector<char*> argv;
  for (std::string& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string parse_error_message(const json& doc) {
  try {
    parse_task(doc);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    return e.what();
  }
  ADD_FAILURE() << "no ParseError";
  return {};
}

json harmonic_doc() { return json::parse(std::ifstream(data("harmonic_norm.json"))); }

TEST(Parse, HarmonicFile) {
  const VerificationTask t = parse_input(data("harmonic_norm.json"));
  EXPECT_EQ(t.dim(), 2u);
  EXPECT_EQ(t.system.A, testing::harmonic_A());
  EXPECT_TRUE(t.system.linear());
  EXPECT_EQ(t.init.size(), 4u);
  EXPECT_EQ(t.objective.Q, Mat::identity(2));
  EXPECT_EQ(t.objective.alpha, 2.0);
}

TEST(Parse, LinearRangeMatchesConstructor) {
  const VerificationTask t = parse_input(data("harmonic_linear_range.json"));
  const QuadraticObjective f = linear_range_property({1, -0.5}, -2, 3);
  EXPECT_EQ(t.objective.Q, f.Q);
  EXPECT_EQ(t.objective.q, f.q);
  EXPECT_EQ(t.objective.alpha, f.alpha);
}

TEST(Parse, VerticesAndTranslation) {
  const VerificationTask t = parse_input(data("triangle_vertices.json"));
  EXPECT_EQ(t.init.size(), 3u);
  EXPECT_FALSE(t.init.box());
  EXPECT_EQ(parse_input(data("rotation_y2.json")).system.b, (Vec{1, -1}));
}

TEST(Parse, DimensionMismatch) {
  try {
    parse_input(data("bad_dimension.json"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
  json doc = harmonic_doc();
  doc["dimension"] = 3;
  EXPECT_THROW(parse_task(doc), Error);
}

TEST(Parse, FieldDiagnostics) {
  json doc = harmonic_doc();
  doc["property"]["Q"][1] = json::array({0, "x"});
  EXPECT_NE(parse_error_message(doc).find("$.property.Q[1][1]"), std::string::npos);
  doc = harmonic_doc();
  doc.erase("initial_set");
  EXPECT_NE(parse_error_message(doc).find("initial_set"), std::string::npos);
  doc = harmonic_doc();
  doc["initial_set"] = json::object();
  EXPECT_NE(parse_error_message(doc).find("$.initial_set"), std::string::npos);
  EXPECT_NE(parse_error_message(json::array()).find("$"), std::string::npos);
  try {
    parse_input(data("does_not_exist.json"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
  }
}

TEST(Parse, UserMatrixForms) {
  EXPECT_EQ(parse_matrix_file(data("identity_P.json")), Mat::identity(2));
  EXPECT_EQ(parse_matrix(json::parse("[[2, 0], [0, 3]]")), (Mat{{2, 0}, {0, 3}}));
}

TEST(Json, ReportsRoundTrip) {
  const Verdict proved = verify(testing::harmonic(Mat{{0, 0}, {0, 1}}, {0, 0}, 1.0));
  const Verdict disproved = verify(testing::rotation(Mat{{0, 0}, {0, 1}}, {0, 0}, 16.0));
  const Verdict tail = verify(testing::counterexample(0.1));
  for (const Verdict& v : {proved, disproved, tail}) {
    const json j = v;
    EXPECT_EQ(json::parse(j.dump()).get<Verdict>(), v);
  }
  const OracleReport r = brute_force_oracle(testing::counterexample(), 40);
  EXPECT_EQ(json::parse(json(r).dump()).get<OracleReport>(), r);
  const HorizonBound b = best_K(testing::harmonic(Mat::identity(2)));
  EXPECT_EQ(json::parse(json(b).dump()).get<HorizonBound>(), b);
  TailInfo unbounded;
  unbounded.bound = std::numeric_limits<double>::infinity();
  EXPECT_TRUE(json(unbounded)["bound"].is_null());
  EXPECT_EQ(json(unbounded).get<TailInfo>(), unbounded);
}

TEST(Export, ProblemStructure) {
  const json e = export_problem(parse_input(data("rotation_x2.json")), 0.01);
  EXPECT_EQ(e["format"], "qreach-sdp-export/1");
  EXPECT_EQ(e["dimension"], 2);
  EXPECT_EQ(e["vertices"].size(), 4u);
  EXPECT_EQ(e["shift"].size(), 2u);
  EXPECT_EQ(e["problems"]["unit_scaling"]["constraints"].size(), 3u);
  EXPECT_EQ(e["problems"]["t_optimal"]["constraints"].size(), 2u);
  for (const char* f : {"F0", "F1", "F2", "F3", "F4"}) EXPECT_TRUE(e["objectives"].contains(f));
  EXPECT_EQ(e["epsilon"], 0.01);
}

TEST(Cli, VerifyHarmonicV2Proved) {
  const CliResult r = run_cli({"verify", data("harmonic_v2.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("status: Proved"), std::string::npos);
  EXPECT_NE(r.out.find("optimum: 1 at k = 0"), std::string::npos);
  EXPECT_NE(r.out.find("horizon K:"), std::string::npos);
  EXPECT_NE(r.out.find("strategy"), std::string::npos);
}

TEST(Cli, VerifyRotationY2DisprovedWithWitness) {
  const CliResult r = run_cli({"--report", "json", "verify", data("rotation_y2.json")});
  EXPECT_EQ(r.code, 1);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["verdict"]["status"], "Disproved");
  EXPECT_EQ(j["verdict"]["witness"].size(), 5u);
  EXPECT_NEAR(j["verdict"]["optimum"]["value"].get<double>(), 21.1427, 1e-3);
  const CliResult text = run_cli({"verify", data("rotation_y2.json")});
  EXPECT_NE(text.out.find("witness (5 states)"), std::string::npos);
}

TEST(Cli, SimulateHarmonic) {
  const CliResult r =
      run_cli({"simulate", data("harmonic_norm.json"), "--oracle-horizon", "300", "--report", "json"});
  EXPECT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["oracle"]["nu_samples"].size(), 301u);
  EXPECT_NEAR(j["oracle"]["sup_emp"].get<double>(), 2.0, 1e-12);
  EXPECT_EQ(j["oracle"]["arg_sup"], 0);
}

TEST(Cli, BoundListsCandidates) {
  const CliResult r = run_cli({"bound", data("harmonic_x2.json"), "--report", "json"});
  EXPECT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_GE(j["bound"]["candidates"].size(), 2u);
  for (const json& c : j["bound"]["candidates"]) EXPECT_EQ(c["scores"].size(), 5u);
  const CliResult text = run_cli({"bound", data("harmonic_x2.json")});
  EXPECT_NE(text.out.find("lyapunov-identity"), std::string::npos);
  EXPECT_NE(text.out.find("q-augmented"), std::string::npos);
}

TEST(Cli, UserPAndOverrides) {
  const CliResult r = run_cli({"bound", data("rotation_linear_norm.json"), "--strategy", "user",
                               "--user-P", data("identity_P.json"), "--report", "json"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["bound"]["K"], 1);
  EXPECT_EQ(run_cli({"verify", data("harmonic_x2.json"), "--alpha-override", "2"}).code, 0);
  EXPECT_EQ(run_cli({"verify", data("harmonic_v2.json"), "--tol", "decision_slack=1e-6",
                     "--serial"}).code, 0);
}

TEST(Cli, ErrorsMapToDistinctCodes) {
  EXPECT_EQ(run_cli({"verify", data("unstable.json")}).code, cli::exit_code(ErrorKind::Unstable));
  EXPECT_EQ(run_cli({"verify", data("bad_dimension.json")}).code,
            cli::exit_code(ErrorKind::DimensionMismatch));
  const CliResult j = run_cli({"verify", data("unstable.json"), "--report", "json"});
  EXPECT_EQ(json::parse(j.out)["error"]["kind"], "Unstable");
  const CliResult bad_flag =
      run_cli({"--report", "json", "verify", data("harmonic_v2.json"), "--no-such-flag"});
  EXPECT_EQ(json::parse(bad_flag.out)["error"]["kind"], "Usage");
  const int usage = cli::exit_code(ErrorKind::Usage);
  EXPECT_EQ(run_cli({}).code, usage);
  EXPECT_EQ(run_cli({"verify", data("harmonic_v2.json"), "--epsilon", "0"}).code, usage);
  EXPECT_EQ(run_cli({"verify", data("harmonic_v2.json"), "--horizon-cap", "0"}).code, usage);
  EXPECT_EQ(run_cli({"verify", data("harmonic_v2.json"), "--tol", "nonsense=1"}).code, usage);
  EXPECT_EQ(run_cli({"verify", data("harmonic_v2.json"), "--strategy", "sdp"}).code, usage);
  EXPECT_EQ(run_cli({"verify", data("harmonic_v2.json"), "--strategy", "user"}).code, usage);
  EXPECT_EQ(run_cli({"bound", data("harmonic_v2.json"), "--user-P", data("identity_P.json"),
                     "--strategy", "user"}).code,
            cli::exit_code(ErrorKind::InvalidUserP));
  // Codes above 2 are all distinct.
  std::set<int> codes;
  for (int k = 0; k <= static_cast<int>(ErrorKind::Usage); ++k)
    codes.insert(cli::exit_code(static_cast<ErrorKind>(k)));
  EXPECT_EQ(codes.size(), static_cast<std::size_t>(ErrorKind::Usage) + 1);
  EXPECT_GT(*codes.begin(), 2);
}

TEST(Cli, ExitCodeDependsOnlyOnStatus) {
  EXPECT_EQ(run_cli({"verify", data("counterexample.json")}).code, 0);
  EXPECT_EQ(run_cli({"verify", data("counterexample_negative.json")}).code, 1);
  EXPECT_EQ(run_cli({"verify", data("harmonic_v2.json"), "--alpha-override", "0.9999999999"}).code, 2);
}

}  // namespace
}  // namespace qreach
