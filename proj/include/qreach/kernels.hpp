#pragma once

// Data-parallel kernels. Each has a serial reference and an OpenMP version;
// the two must agree bit for bit (per-row and per-vertex arithmetic is
// identical, and the reductions are max with lowest-index tie-breaking).

#include <cstddef>
#include <span>
#include <vector>

#include "qreach/matcore.hpp"

namespace qreach::kernels {

// Gaussian elimination with partial pivoting on a dense square system.
// A pivot below pivot_tol * max|m| throws SingularSystem.
Vec gaussian_solve_serial(Mat m, Vec rhs, double pivot_tol);
Vec gaussian_solve_omp(Mat m, Vec rhs, double pivot_tol);

// Per-step maxima of x'Qx + q'x + constant over vertex trajectories
// y_{k+1} = A y_k, for k = 0..horizon.
struct NuSequence {
  std::vector<double> values;
  std::vector<std::size_t> argmax_vertex;  // lowest index on ties
};

NuSequence nu_sequence_serial(const Mat& a, std::span<const Vec> vertices,
                              const Mat& q_mat, std::span<const double> q_vec,
                              double constant, std::size_t horizon);
NuSequence nu_sequence_omp(const Mat& a, std::span<const Vec> vertices,
                           const Mat& q_mat, std::span<const double> q_vec,
                           double constant, std::size_t horizon);

inline NuSequence nu_sequence(Exec exec, const Mat& a, std::span<const Vec> vertices,
                              const Mat& q_mat, std::span<const double> q_vec,
                              double constant, std::size_t horizon) {
  return exec == Exec::parallel
             ? nu_sequence_omp(a, vertices, q_mat, q_vec, constant, horizon)
             : nu_sequence_serial(a, vertices, q_mat, q_vec, constant, horizon);
}

}  // namespace qreach::kernels
