#pragma once

// Dense real linear algebra for the small systems the verifier handles
// (d up to a few dozen). Row-major storage, value semantics throughout.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "qreach/tolerances.hpp"

namespace qreach {

using Vec = std::vector<double>;

enum class Exec { serial, parallel };

class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0);
  Mat(std::size_t rows, std::size_t cols, std::vector<double> row_major);
  Mat(std::initializer_list<std::initializer_list<double>> rows);

  static Mat identity(std::size_t n);
  static Mat diagonal(std::span<const double> entries);
  // Throws NonFinite / DimensionMismatch for ragged or non-finite input.
  static Mat from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * cols_, cols_);
  }

  Mat transpose() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;
  std::vector<std::vector<double>> to_rows() const;

  Mat& operator+=(const Mat& other);
  Mat& operator-=(const Mat& other);
  Mat& operator*=(double s);

  friend bool operator==(const Mat&, const Mat&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Mat operator+(Mat lhs, const Mat& rhs);
Mat operator-(Mat lhs, const Mat& rhs);
Mat operator*(Mat lhs, double s);
Mat operator*(double s, Mat rhs);
Mat operator*(const Mat& lhs, const Mat& rhs);
Vec operator*(const Mat& m, std::span<const double> v);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
Mat outer(std::span<const double> a, std::span<const double> b);
// x' M x
double quad_form(const Mat& m, std::span<const double> x);

// Returns (M + M') / 2 after checking relative asymmetry against tol.symmetry.
Mat symmetrized(const Mat& m, const Tolerances& tol = {});
bool is_symmetric(const Mat& m, double relative_tol);

struct SymEig {
  Vec values;  // ascending
  Mat vectors; // column j pairs with values[j]

  double min() const { return values.front(); }
  double max() const { return values.back(); }
};

// Cyclic Jacobi rotations. Throws NotSymmetric.
SymEig sym_eig(const Mat& m, const Tolerances& tol = {});

double lambda_min(const Mat& m, const Tolerances& tol = {});
double lambda_max(const Mat& m, const Tolerances& tol = {});

// lmin > tol.positive_definite * max(1, lmax)
bool is_positive_definite(const Mat& m, const Tolerances& tol = {});

// Dense solve with partial pivoting. Throws SingularSystem.
Vec solve(const Mat& m, std::span<const double> rhs, const Tolerances& tol = {},
          Exec exec = Exec::serial);

// P with P - A'PA = C, through the d^2 x d^2 Kronecker system.
// Throws SingularSystem.
Mat lyapunov_solve(const Mat& a, const Mat& c, const Tolerances& tol = {},
                   Exec exec = Exec::parallel);

// P^{-1/2} from the spectral decomposition. Throws NotPositiveDefinite.
Mat inv_sqrt(const Mat& p, const Tolerances& tol = {});

Mat mat_pow(const Mat& a, std::size_t k);

// ||A||_P = sqrt(lmax(P^{-1/2} A'PA P^{-1/2})).
double weighted_opnorm(const Mat& a, const Mat& p, const Tolerances& tol = {});

// lmax(P^{-1/2} Q P^{-1/2}), the least t with tP - Q >= 0.
double generalized_lmax(const Mat& q, const Mat& p, const Tolerances& tol = {});

}  // namespace qreach
