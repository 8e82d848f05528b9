#pragma once

// Systems and random generators shared by the test binaries.

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "qreach/verifier.hpp"

namespace qreach::testing {

inline Mat harmonic_A(double h = 0.01) { return Mat{{1.0, h}, {-h, 1.0 - h}}; }

inline Mat rotation_A() {
  const double c = std::cos(std::numbers::pi / 6), s = std::sin(std::numbers::pi / 6);
  return Mat{{0.8 * c, 0.8 * s}, {-0.8 * s, 0.8 * c}};
}

inline VerificationTask harmonic(Mat Q, Vec q = {0.0, 0.0}, std::optional<double> alpha = {}) {
  return VerificationTask(AffineSystem(harmonic_A()), box_to_vertices({-1, -1}, {1, 1}),
                          QuadraticObjective(std::move(Q), std::move(q), alpha));
}

inline VerificationTask rotation(Mat Q, Vec q = {0.0, 0.0}, std::optional<double> alpha = {},
                                 bool translated = true) {
  Vec b = translated ? Vec{1.0, -1.0} : Vec{0.0, 0.0};
  return VerificationTask(AffineSystem(rotation_A(), b), box_to_vertices({-1, -1}, {2, 2}),
                          QuadraticObjective(std::move(Q), std::move(q), alpha));
}

inline VerificationTask counterexample(std::optional<double> alpha = {}) {
  return VerificationTask(AffineSystem(Mat{{0.5}}), box_to_vertices({0.25}, {0.5}),
                          QuadraticObjective(Mat{{1.0}}, Vec{-1.0}, alpha));
}

// The six reference tasks (harmonic: norm, x^2, v^2, linear range; rotation: x^2, y^2).
struct NamedTask {
  std::string name;
  VerificationTask task;
};

inline std::vector<NamedTask> reference_tasks() {
  return {
      {"harmonic |x|^2", harmonic(Mat::identity(2))},
      {"harmonic x^2", harmonic(Mat{{1, 0}, {0, 0}})},
      {"harmonic v^2", harmonic(Mat{{0, 0}, {0, 1}})},
      {"harmonic range", harmonic(Mat{{1, -0.5}, {-0.5, 0.25}}, {-1, 0.5})},
      {"rotation x^2", rotation(Mat{{1, 0}, {0, 0}})},
      {"rotation y^2", rotation(Mat{{0, 0}, {0, 1}})},
  };
}

inline Mat random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = n(rng);
  return m;
}

inline Mat random_symmetric(std::mt19937_64& rng, std::size_t d) {
  const Mat g = random_matrix(rng, d, d);
  return 0.5 * (g + g.transpose());
}

// B B' with rank drawn in 1..d, so the PSD cone boundary is exercised too.
inline Mat random_psd(std::mt19937_64& rng, std::size_t d) {
  const std::size_t rank = std::uniform_int_distribution<std::size_t>(1, d)(rng);
  const Mat b = random_matrix(rng, d, rank);
  return b * b.transpose();
}

// Random matrix scaled so that rho(A) <= target. ||A^64||_2^(1/64) is an upper
// bound on rho(A) (Gelfand), so non-normal matrices with ||A||_2 > 1 survive.
inline Mat random_stable(std::mt19937_64& rng, std::size_t d) {
  std::uniform_real_distribution<double> target(0.3, 0.95);
  Mat a = random_matrix(rng, d, d);
  a *= 1.0 / std::sqrt(lambda_max(a.transpose() * a));
  const Mat p = mat_pow(a, 64);
  const double rho_bound = std::pow(std::sqrt(lambda_max(p.transpose() * p)), 1.0 / 64.0);
  a *= target(rng) / std::max(rho_bound, 1e-3);
  return a;
}

inline Vec random_vec(std::mt19937_64& rng, std::size_t d, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Vec v(d);
  for (double& x : v) x = n(rng);
  return v;
}

inline InitialSet random_box(std::mt19937_64& rng, std::size_t d) {
  std::uniform_real_distribution<double> u(-2.0, 2.0), w(0.1, 2.0);
  Vec lo(d), hi(d);
  for (std::size_t i = 0; i < d; ++i) {
    lo[i] = u(rng);
    hi[i] = lo[i] + w(rng);
  }
  return box_to_vertices(lo, hi);
}

// Stable affine task with Q >= 0, random q and a box initial set.
inline VerificationTask random_task(std::mt19937_64& rng, std::size_t d) {
  Mat a = random_stable(rng, d);
  Vec b = random_vec(rng, d, 0.5);
  return VerificationTask(AffineSystem(std::move(a), std::move(b)), random_box(rng, d),
                          QuadraticObjective(random_psd(rng, d), random_vec(rng, d)));
}

}  // namespace qreach::testing
