#include "qreach/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qreach/error.hpp"
#include "qreach/kernels.hpp"

namespace qreach {

namespace {

void require_square(const Mat& m, const char* what) {
  if (!m.square() || m.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
}

void require_same_shape(const Mat& a, const Mat& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << what << ": shape mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows()
       << "x" << b.cols();
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
}

// Products like P^{-1/2} M P^{-1/2} are symmetric up to rounding only.
Mat force_symmetric(const Mat& m) {
  Mat out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = 0.5 * (m(i, j) + m(j, i));
  return out;
}

}  // namespace

Mat::Mat(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Mat::Mat(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != rows_ * cols_)
    throw Error(ErrorKind::DimensionMismatch, "Mat: entry count does not match shape");
}

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "Mat: ragged rows");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::diagonal(std::span<const double> entries) {
  Mat m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

Mat Mat::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty())
    throw Error(ErrorKind::DimensionMismatch, "matrix has no entries");
  const std::size_t cols = rows.front().size();
  std::vector<double> data;
  data.reserve(rows.size() * cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      std::ostringstream os;
      os << "row " << i << " has " << rows[i].size() << " entries, expected " << cols;
      throw Error(ErrorKind::DimensionMismatch, os.str());
    }
    for (double x : rows[i]) {
      if (!std::isfinite(x)) throw Error(ErrorKind::NonFinite, "matrix entry is not finite");
      data.push_back(x);
    }
  }
  return Mat(rows.size(), cols, std::move(data));
}

Mat Mat::transpose() const {
  Mat t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Mat::frobenius_norm() const {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return std::sqrt(s);
}

double Mat::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

bool Mat::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

std::vector<std::vector<double>> Mat::to_rows() const {
  std::vector<std::vector<double>> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i].assign(row(i).begin(), row(i).end());
  return out;
}

Mat& Mat::operator+=(const Mat& other) {
  require_same_shape(*this, other, "operator+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& other) {
  require_same_shape(*this, other, "operator-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Mat& Mat::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

Mat operator+(Mat lhs, const Mat& rhs) { return lhs += rhs; }
Mat operator-(Mat lhs, const Mat& rhs) { return lhs -= rhs; }
Mat operator*(Mat lhs, double s) { return lhs *= s; }
Mat operator*(double s, Mat rhs) { return rhs *= s; }

Mat operator*(const Mat& lhs, const Mat& rhs) {
  if (lhs.cols() != rhs.rows())
    throw Error(ErrorKind::DimensionMismatch, "operator*: inner dimensions differ");
  Mat out(lhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i)
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const double a = lhs(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

Vec operator*(const Mat& m, std::span<const double> v) {
  if (m.cols() != v.size())
    throw Error(ErrorKind::DimensionMismatch, "operator*: vector length differs");
  Vec out(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) out[i] = dot(m.row(i), v);
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

Mat outer(std::span<const double> a, std::span<const double> b) {
  Mat m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * b[j];
  return m;
}

double quad_form(const Mat& m, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) s += x[i] * dot(m.row(i), x);
  return s;
}

bool is_symmetric(const Mat& m, double relative_tol) {
  if (!m.square()) return false;
  const double scale = std::max(1.0, m.frobenius_norm());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > relative_tol * scale) return false;
  return true;
}

Mat symmetrized(const Mat& m, const Tolerances& tol) {
  require_square(m, "symmetrized");
  if (!is_symmetric(m, tol.symmetry))
    throw Error(ErrorKind::NotSymmetric, "matrix is not symmetric within tolerance");
  return force_symmetric(m);
}

SymEig sym_eig(const Mat& m, const Tolerances& tol) {
  Mat a = symmetrized(m, tol);
  const std::size_t n = a.rows();
  Mat v = Mat::identity(n);
  const double threshold = tol.jacobi_offdiag * a.frobenius_norm();

  for (int sweep = 0; sweep < tol.jacobi_max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) off += a(i, j) * a(i, j);
    if (std::sqrt(off) <= threshold) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SymEig out{Vec(n), Mat(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = v(k, order[j]);
  }
  return out;
}

double lambda_min(const Mat& m, const Tolerances& tol) { return sym_eig(m, tol).min(); }
double lambda_max(const Mat& m, const Tolerances& tol) { return sym_eig(m, tol).max(); }

bool is_positive_definite(const Mat& m, const Tolerances& tol) {
  const SymEig e = sym_eig(m, tol);
  return e.min() > tol.positive_definite * std::max(1.0, e.max());
}

Vec solve(const Mat& m, std::span<const double> rhs, const Tolerances& tol, Exec exec) {
  require_square(m, "solve");
  if (rhs.size() != m.rows())
    throw Error(ErrorKind::DimensionMismatch, "solve: right-hand side length differs");
  Vec b(rhs.begin(), rhs.end());
  return exec == Exec::parallel ? kernels::gaussian_solve_omp(m, std::move(b), tol.singular_pivot)
                                : kernels::gaussian_solve_serial(m, std::move(b), tol.singular_pivot);
}

Mat lyapunov_solve(const Mat& a, const Mat& c, const Tolerances& tol, Exec exec) {
  require_square(a, "lyapunov_solve");
  require_same_shape(a, c, "lyapunov_solve");
  const Mat cs = symmetrized(c, tol);
  const std::size_t d = a.rows();
  const std::size_t n = d * d;

  // Row (i,j), column (k,l): delta_ik delta_jl - A_ki A_lj.
  Mat system(n, n);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t r = i * d + j;
      for (std::size_t k = 0; k < d; ++k) {
        const double aki = a(k, i);
        for (std::size_t l = 0; l < d; ++l) system(r, k * d + l) = -aki * a(l, j);
      }
      system(r, r) += 1.0;
    }

  const Vec vec_p = solve(system, cs.data(), tol, exec);
  Mat p(d, d, vec_p);
  p = force_symmetric(p);

  const Mat at = a.transpose();
  const double residual = (p - at * p * a - cs).frobenius_norm();
  if (!p.all_finite() || residual > tol.lyapunov_residual * (1.0 + cs.frobenius_norm())) {
    std::ostringstream os;
    os << "lyapunov_solve: residual " << residual << " exceeds tolerance";
    throw Error(ErrorKind::SingularSystem, os.str());
  }
  return p;
}

Mat inv_sqrt(const Mat& p, const Tolerances& tol) {
  const SymEig e = sym_eig(p, tol);
  if (!(e.min() > tol.positive_definite * std::max(1.0, e.max())))
    throw Error(ErrorKind::NotPositiveDefinite, "inv_sqrt: matrix is not positive definite");
  const std::size_t n = p.rows();
  Mat out(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const double w = 1.0 / std::sqrt(e.values[j]);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t s = 0; s < n; ++s)
        out(r, s) += e.vectors(r, j) * w * e.vectors(s, j);
  }
  return force_symmetric(out);
}

Mat mat_pow(const Mat& a, std::size_t k) {
  require_square(a, "mat_pow");
  Mat result = Mat::identity(a.rows());
  Mat base = a;
  while (k > 0) {
    if (k & 1U) result = result * base;
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return result;
}

double weighted_opnorm(const Mat& a, const Mat& p, const Tolerances& tol) {
  require_same_shape(a, p, "weighted_opnorm");
  const Mat w = inv_sqrt(p, tol);
  const Mat inner = force_symmetric(w * (a.transpose() * p * a) * w);
  return std::sqrt(std::max(0.0, lambda_max(inner, tol)));
}

double generalized_lmax(const Mat& q, const Mat& p, const Tolerances& tol) {
  require_same_shape(q, p, "generalized_lmax");
  const Mat w = inv_sqrt(p, tol);
  return lambda_max(force_symmetric(w * symmetrized(q, tol) * w), tol);
}

}  // namespace qreach
