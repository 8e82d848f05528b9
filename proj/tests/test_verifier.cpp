#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "qreach/error.hpp"

namespace qreach {
namespace {

using testing::counterexample;
using testing::harmonic;
using testing::rotation;

void expect_orderings(const OracleReport& r, const std::string& name) {
  if (r.k_geq_emp && r.k_strict_emp) EXPECT_LE(*r.k_geq_emp, *r.k_strict_emp) << name;
  if (r.k_geq_emp && r.K_geq_emp) EXPECT_LE(*r.k_geq_emp, *r.K_geq_emp) << name;
  if (r.k_strict_emp && r.K_strict_emp) EXPECT_LE(*r.k_strict_emp, *r.K_strict_emp) << name;
  if (r.K_geq_emp && r.K_strict_emp) EXPECT_LE(*r.K_geq_emp, *r.K_strict_emp) << name;
  if (r.K_geq_emp) {
    double running = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k <= *r.K_geq_emp; ++k) running = std::max(running, r.nu_samples[k]);
    EXPECT_NEAR(running, r.sup_emp, 1e-12) << name;
  }
}

TEST(Trajectory, AffineSteps) {
  const AffineSystem s(Mat{{0.5}}, Vec{1.0});
  const auto tr = trajectory(s, Vec{0.0}, 3);
  ASSERT_EQ(tr.size(), 4u);
  EXPECT_EQ(tr[1][0], 1.0);
  EXPECT_EQ(tr[2][0], 1.5);
  EXPECT_EQ(tr[3][0], 1.75);
}

TEST(Optimize, HarmonicValues) {
  const Optimum norm = optimize(harmonic(Mat::identity(2)));
  EXPECT_NEAR(norm.value, 2.0, 1e-6);
  EXPECT_EQ(norm.arg_k, 0u);
  const Optimum x2 = optimize(harmonic(Mat{{1, 0}, {0, 0}}));
  EXPECT_NEAR(x2.value, 1.6488564, 1e-6);
  EXPECT_EQ(x2.arg_k, 61u);
  const Optimum v2 = optimize(harmonic(Mat{{0, 0}, {0, 1}}));
  EXPECT_NEAR(v2.value, 1.0, 1e-6);
  EXPECT_EQ(v2.arg_k, 0u);
  const Optimum range = optimize(harmonic(Mat{{1, -0.5}, {-0.5, 0.25}}, {-1, 0.5}));
  EXPECT_NEAR(range.value, 3.75, 1e-6);
  EXPECT_EQ(range.arg_k, 0u);
}

TEST(Optimize, RotationValues) {
  const Optimum x2 = optimize(rotation(Mat{{1, 0}, {0, 0}}));
  EXPECT_NEAR(x2.value, 10.148306, 1e-5);
  EXPECT_EQ(x2.arg_k, 1u);
  const Optimum y2 = optimize(rotation(Mat{{0, 0}, {0, 1}}));
  EXPECT_NEAR(y2.value, 21.14275, 1e-4);
  EXPECT_EQ(y2.arg_k, 4u);
  const Optimum printed = optimize(rotation(Mat{{0.25, -1}, {-1, 4}}, {-1, 4}));
  EXPECT_NEAR(printed.value, 73.2950083, 1e-5);
  EXPECT_EQ(printed.arg_k, 4u);
  // Arg vertex is reported in original coordinates, i.e. a corner of [-1, 2]^2.
  for (double c : printed.arg_vertex) EXPECT_TRUE(c == -1.0 || c == 2.0);
}

TEST(Optimize, RemarkFormulaObjectiveDiffersFromPrintedOne) {
  // q = -(alpha + beta) c for c = (0.5, -2), range [-7, 5].
  const QuadraticObjective f = linear_range_property({0.5, -2}, -7, 5);
  EXPECT_EQ(f.q, (Vec{1, -4}));
  const Optimum o = optimize(rotation(f.Q, f.q));
  EXPECT_NEAR(o.value, 111.77, 1e-2);
}

TEST(Optimize, HorizonCap) {
  VerifyOptions opt;
  opt.horizon_cap = 5;
  try {
    optimize(harmonic(Mat::identity(2)), opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::HorizonCapExceeded);
  }
}

TEST(Verify, HarmonicVerdicts) {
  const Verdict x2 = verify(harmonic(Mat{{1, 0}, {0, 0}}, {0, 0}, 1.0));
  EXPECT_EQ(x2.status, Status::Disproved);
  ASSERT_EQ(x2.witness.size(), 62u);
  EXPECT_GT(x2.witness.back()[0] * x2.witness.back()[0], 1.0);
  const Verdict v2 = verify(harmonic(Mat{{0, 0}, {0, 1}}, {0, 0}, 1.0));
  EXPECT_EQ(v2.status, Status::Proved);
  EXPECT_TRUE(v2.witness.empty());
  ASSERT_TRUE(v2.optimum);
  EXPECT_FALSE(v2.optimum->bound.strategy.empty());
  EXPECT_EQ(verify(harmonic(Mat{{1, -0.5}, {-0.5, 0.25}}, {-1, 0.5}, 6.0)).status, Status::Proved);
}

TEST(Verify, RotationVerdicts) {
  EXPECT_EQ(verify(rotation(Mat{{1, 0}, {0, 0}}, {0, 0}, 16.0)).status, Status::Proved);
  const Verdict y2 = verify(rotation(Mat{{0, 0}, {0, 1}}, {0, 0}, 16.0));
  EXPECT_EQ(y2.status, Status::Disproved);
  EXPECT_EQ(y2.witness.size(), 5u);
  EXPECT_EQ(verify(rotation(Mat{{0.25, -1}, {-1, 4}}, {-1, 4}, 35.0)).status, Status::Disproved);
}

TEST(Verify, SlackBandIsInconclusive) {
  const Verdict v = verify(harmonic(Mat{{0, 0}, {0, 1}}, {0, 0}, 1.0 - 1e-10));
  EXPECT_EQ(v.status, Status::Inconclusive);
  EXPECT_FALSE(v.notes.empty());
}

TEST(Verify, DisprovedWitnessesAreSelfCertifying) {
  const std::vector<VerificationTask> tasks{harmonic(Mat{{1, 0}, {0, 0}}, {0, 0}, 1.0),
                                            rotation(Mat{{0, 0}, {0, 1}}, {0, 0}, 16.0),
                                            rotation(Mat{{0.25, -1}, {-1, 4}}, {-1, 4}, 35.0),
                                            counterexample(-0.05)};
  for (const VerificationTask& t : tasks) {
    const Verdict v = verify(t);
    ASSERT_EQ(v.status, Status::Disproved);
    const auto replay = trajectory(t.system, v.witness.front(), v.witness.size() - 1);
    EXPECT_EQ(replay, v.witness);
    EXPECT_GT(t.objective(replay.back()), *t.objective.alpha);
  }
}

TEST(Verify, CounterexampleTailMode) {
  const Verdict proved = verify(counterexample(0.1));
  EXPECT_EQ(proved.status, Status::ProvedByTailBound);
  ASSERT_TRUE(proved.tail);
  EXPECT_LE(proved.tail->bound, 0.1);
  EXPECT_LT(proved.tail->sampled_max, 0.0);
  EXPECT_FALSE(proved.optimum);

  const Verdict disproved = verify(counterexample(-0.05));
  EXPECT_EQ(disproved.status, Status::Disproved);
  ASSERT_FALSE(disproved.witness.empty());
  // Level 0 is the non-attained limit itself; every sample stays below it.
  EXPECT_NE(verify(counterexample(0.0)).status, Status::Disproved);
}

TEST(Verify, RequiresAlphaAndPropagatesUnstable) {
  try {
    verify(harmonic(Mat::identity(2)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Usage);
  }
  const VerificationTask unstable(AffineSystem(Mat{{1.1, 0}, {0, 0.5}}),
                                  box_to_vertices({-1, -1}, {1, 1}),
                                  QuadraticObjective(Mat::identity(2), {0, 0}, 2.0));
  try {
    verify(unstable);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unstable);
  }
}

TEST(Verify, IndefiniteObjectiveIsNoted) {
  const Verdict v = verify(harmonic(Mat{{1, 0}, {0, -1}}, {0, 0}, 5.0));
  ASSERT_FALSE(v.notes.empty());
  EXPECT_NE(v.notes.front().find("indefinite"), std::string::npos);
}

TEST(Oracle, HarmonicX2) {
  const OracleReport r = brute_force_oracle(harmonic(Mat{{1, 0}, {0, 0}}), 1000);
  EXPECT_NEAR(r.sup_emp, 1.6489, 1e-3);
  EXPECT_EQ(r.arg_sup, 61u);
  ASSERT_TRUE(r.K_geq_emp);
  EXPECT_EQ(*r.K_geq_emp, 61u);
  EXPECT_EQ(r.nu_samples.size(), 1001u);
  expect_orderings(r, "harmonic x^2");
}

TEST(Oracle, CounterexampleIsNegativeAndIncreasing) {
  const OracleReport r = brute_force_oracle(counterexample(), 100);
  EXPECT_FALSE(r.k_strict_emp);
  EXPECT_FALSE(r.K_strict_emp);
  for (std::size_t k = 0; k <= 100; ++k) {
    EXPECT_LT(r.nu_samples[k], 0.0);
    if (k && r.nu_samples[k - 1] < -1e-15) EXPECT_GT(r.nu_samples[k], r.nu_samples[k - 1]) << k;
  }
  // u_k = (1/16) 4^-k - (1/4) 2^-k
  for (std::size_t k : {0u, 1u, 5u})
    EXPECT_NEAR(r.nu_samples[k], std::pow(0.25, k) / 16 - std::pow(0.5, k) / 4, 1e-15);
  expect_orderings(r, "counterexample");
}

TEST(Oracle, ConstantZeroObjective) {
  const OracleReport r = brute_force_oracle(harmonic(Mat(2, 2)), 50);
  for (double v : r.nu_samples) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(r.k_geq_emp, 0u);
  EXPECT_FALSE(r.k_strict_emp);
}

TEST(Oracle, OffsetIsObjectiveAtFixedPoint) {
  const VerificationTask t = rotation(Mat{{0, 0}, {0, 1}});
  const OracleReport r = brute_force_oracle(t, 300);
  EXPECT_NEAR(r.offset, 2.7802 * 2.7802, 1e-3);
  EXPECT_NEAR(r.nu_samples.back(), r.offset, 1e-9);
}

TEST(Exactness, OptimizeMatchesOracleOnRandomTasks) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t d = 1 + trial % 4;
    const VerificationTask t = testing::random_task(rng, d);
    Optimum o;
    try {
      o = optimize(t);
    } catch (const Error& e) {
      ASSERT_EQ(e.kind(), ErrorKind::AssumptionViolated) << e.what();
      continue;
    }
    const OracleReport r = brute_force_oracle(t, std::max(10 * o.bound.K, o.bound.K + 500));
    EXPECT_NEAR(o.value, r.sup_emp, 1e-9) << "trial " << trial;
    EXPECT_GE(o.bound.K, r.arg_sup);
    expect_orderings(r, "trial " + std::to_string(trial));
  }
}

TEST(Exec, SerialAndParallelVerdictsMatch) {
  VerifyOptions serial;
  serial.horizon.candidates.exec = Exec::serial;
  for (const auto& [name, task] : testing::reference_tasks()) {
    VerificationTask t = task;
    t.objective.alpha = 2.0;
    EXPECT_EQ(verify(t), verify(t, serial)) << name;
  }
}

}  // namespace
}  // namespace qreach
