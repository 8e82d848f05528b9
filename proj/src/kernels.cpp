#include "qreach/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "qreach/error.hpp"

namespace qreach::kernels {

namespace {

constexpr double kMinusInf = -std::numeric_limits<double>::infinity();

std::size_t select_pivot(const Mat& m, std::size_t col) {
  std::size_t best = col;
  double best_abs = std::abs(m(col, col));
  for (std::size_t r = col + 1; r < m.rows(); ++r) {
    const double v = std::abs(m(r, col));
    if (v > best_abs) {
      best_abs = v;
      best = r;
    }
  }
  return best;
}

void swap_rows(Mat& m, Vec& rhs, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
  std::swap(rhs[a], rhs[b]);
}

void eliminate_row(Mat& m, Vec& rhs, std::size_t pivot_row, std::size_t r) {
  const std::size_t n = m.cols();
  const double f = m(r, pivot_row) / m(pivot_row, pivot_row);
  if (f == 0.0) return;
  m(r, pivot_row) = 0.0;
  for (std::size_t j = pivot_row + 1; j < n; ++j) m(r, j) -= f * m(pivot_row, j);
  rhs[r] -= f * rhs[pivot_row];
}

Vec back_substitute(const Mat& m, Vec rhs) {
  const std::size_t n = m.rows();
  for (std::size_t ii = n; ii-- > 0;) {
    double s = rhs[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= m(ii, j) * rhs[j];
    rhs[ii] = s / m(ii, ii);
  }
  return rhs;
}

double pivot_floor(const Mat& m, double pivot_tol) {
  const double scale = m.max_abs();
  if (scale == 0.0) throw Error(ErrorKind::SingularSystem, "linear system matrix is zero");
  return pivot_tol * scale;
}

[[noreturn]] void singular(std::size_t col) {
  throw Error(ErrorKind::SingularSystem,
              "linear system is numerically singular at column " + std::to_string(col));
}

void check_nu_inputs(const Mat& a, std::span<const Vec> vertices, const Mat& q_mat,
                     std::span<const double> q_vec) {
  const std::size_t d = a.rows();
  if (!a.square() || q_mat.rows() != d || q_mat.cols() != d || q_vec.size() != d)
    throw Error(ErrorKind::DimensionMismatch, "nu_sequence: inconsistent dimensions");
  if (vertices.empty()) throw Error(ErrorKind::DimensionMismatch, "nu_sequence: no vertices");
  for (const Vec& v : vertices)
    if (v.size() != d) throw Error(ErrorKind::DimensionMismatch, "nu_sequence: vertex length");
}

// Writes objective values of one vertex trajectory into out[0..horizon].
// Shared by both kernels so their arithmetic is identical.
void trajectory_values(const Mat& a, const Vec& start, const Mat& q_mat,
                       std::span<const double> q_vec, double constant, std::size_t horizon,
                       Vec& y, Vec& next, std::span<double> out) {
  y = start;
  for (std::size_t k = 0;; ++k) {
    out[k] = quad_form(q_mat, y) + dot(q_vec, y) + constant;
    if (k == horizon) break;
    for (std::size_t i = 0; i < y.size(); ++i) next[i] = dot(a.row(i), y);
    std::swap(y, next);
  }
}

void merge_max(std::span<const double> vals, std::size_t vertex, NuSequence& acc) {
  for (std::size_t k = 0; k < vals.size(); ++k) {
    if (vals[k] > acc.values[k] ||
        (vals[k] == acc.values[k] && vertex < acc.argmax_vertex[k])) {
      acc.values[k] = vals[k];
      acc.argmax_vertex[k] = vertex;
    }
  }
}

NuSequence empty_sequence(std::size_t horizon) {
  return NuSequence{std::vector<double>(horizon + 1, kMinusInf),
                    std::vector<std::size_t>(horizon + 1, std::numeric_limits<std::size_t>::max())};
}

}  // namespace

Vec gaussian_solve_serial(Mat m, Vec rhs, double pivot_tol) {
  const std::size_t n = m.rows();
  const double floor = pivot_floor(m, pivot_tol);
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t p = select_pivot(m, col);
    if (std::abs(m(p, col)) <= floor) singular(col);
    swap_rows(m, rhs, col, p);
    for (std::size_t r = col + 1; r < n; ++r) eliminate_row(m, rhs, col, r);
  }
  return back_substitute(m, std::move(rhs));
}

Vec gaussian_solve_omp(Mat m, Vec rhs, double pivot_tol) {
  const std::size_t n = m.rows();
  const double floor = pivot_floor(m, pivot_tol);
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t p = select_pivot(m, col);
    if (std::abs(m(p, col)) <= floor) singular(col);
    swap_rows(m, rhs, col, p);
    const auto first = static_cast<std::ptrdiff_t>(col + 1);
    const auto last = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (n - col > 64)
    for (std::ptrdiff_t r = first; r < last; ++r)
      eliminate_row(m, rhs, col, static_cast<std::size_t>(r));
  }
  return back_substitute(m, std::move(rhs));
}

NuSequence nu_sequence_serial(const Mat& a, std::span<const Vec> vertices, const Mat& q_mat,
                              std::span<const double> q_vec, double constant,
                              std::size_t horizon) {
  check_nu_inputs(a, vertices, q_mat, q_vec);
  NuSequence acc = empty_sequence(horizon);
  Vec y, next(a.rows()), vals(horizon + 1);
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    trajectory_values(a, vertices[v], q_mat, q_vec, constant, horizon, y, next, vals);
    merge_max(vals, v, acc);
  }
  return acc;
}

NuSequence nu_sequence_omp(const Mat& a, std::span<const Vec> vertices, const Mat& q_mat,
                           std::span<const double> q_vec, double constant,
                           std::size_t horizon) {
  check_nu_inputs(a, vertices, q_mat, q_vec);
  NuSequence acc = empty_sequence(horizon);
  const auto count = static_cast<std::ptrdiff_t>(vertices.size());
#pragma omp parallel if (count > 1)
  {
    NuSequence local = empty_sequence(horizon);
    Vec y, next(a.rows()), vals(horizon + 1);
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t v = 0; v < count; ++v) {
      trajectory_values(a, vertices[static_cast<std::size_t>(v)], q_mat, q_vec, constant,
                        horizon, y, next, vals);
      merge_max(vals, static_cast<std::size_t>(v), local);
    }
#pragma omp critical(qreach_nu_merge)
    for (std::size_t k = 0; k <= horizon; ++k) {
      if (local.values[k] > acc.values[k] ||
          (local.values[k] == acc.values[k] && local.argmax_vertex[k] < acc.argmax_vertex[k])) {
        acc.values[k] = local.values[k];
        acc.argmax_vertex[k] = local.argmax_vertex[k];
      }
    }
  }
  return acc;
}

}  // namespace qreach::kernels
