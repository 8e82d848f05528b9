#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qreach/matcore.hpp"

namespace qreach {

// x_{k+1} = A x_k + b
struct AffineSystem {
  Mat A;
  Vec b;

  AffineSystem() = default;
  AffineSystem(Mat a, Vec b);  // throws DimensionMismatch
  explicit AffineSystem(Mat a);

  std::size_t dim() const noexcept { return A.rows(); }
  bool linear() const;
};

// Axis-aligned box, kept alongside the vertices when the initial set came
// from one so the interior of the set is known without an LP.
struct Box {
  Vec lower;
  Vec upper;

  bool has_interior() const;
  bool contains_origin_in_interior() const;
};

// Polytope given by its extreme points. Vertices are deduplicated after
// rounding to 12 significant digits.
class InitialSet {
 public:
  InitialSet() = default;
  explicit InitialSet(std::vector<Vec> vertices);  // throws DimensionMismatch
  InitialSet(std::vector<Vec> vertices, Box box);

  std::size_t dim() const { return vertices_.front().size(); }
  std::size_t size() const { return vertices_.size(); }
  const std::vector<Vec>& vertices() const { return vertices_; }
  const std::optional<Box>& box() const { return box_; }

  InitialSet translated(std::span<const double> offset) const;

 private:
  std::vector<Vec> vertices_;
  std::optional<Box> box_;
};

// x'Qx + q'x + constant, optionally paired with the sublevel bound alpha.
struct QuadraticObjective {
  Mat Q;
  Vec q;
  std::optional<double> alpha;
  double constant = 0.0;

  QuadraticObjective() = default;
  QuadraticObjective(Mat q_mat, Vec q_vec, std::optional<double> alpha = std::nullopt,
                     double constant = 0.0);  // throws NotSymmetric, DimensionMismatch

  std::size_t dim() const noexcept { return Q.rows(); }
  double operator()(std::span<const double> x) const;
};

struct VerificationTask {
  AffineSystem system;
  InitialSet init;
  QuadraticObjective objective;

  VerificationTask() = default;
  VerificationTask(AffineSystem system, InitialSet init, QuadraticObjective objective);

  std::size_t dim() const noexcept { return system.dim(); }
};

// Corners of [lower, upper]; a degenerate axis contributes one value.
// Throws EmptyBox, DimensionTooLarge (d > 24), DimensionMismatch.
InitialSet box_to_vertices(const Vec& lower, const Vec& upper);

// {alpha <= c'x <= beta} as {x'(cc')x - (alpha+beta)c'x <= -alpha*beta}.
// Throws DegenerateRange.
QuadraticObjective linear_range_property(const Vec& c, double alpha, double beta);

// Fixed point (Id - A)^{-1} b. Throws SingularShift.
Vec affine_shift(const AffineSystem& system, const Tolerances& tol = {});

// Equivalent task with b = 0 in the coordinates y = x - shift. The objective
// picks up q' = 2Q shift + q and the constant shift'Q shift + q'shift.
VerificationTask homogenize(const VerificationTask& task, const Tolerances& tol = {});

}  // namespace qreach
