#include "qreach/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

#include "qreach/error.hpp"

namespace qreach {

namespace {

constexpr std::size_t kMaxBoxDimension = 24;

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x))
      throw Error(ErrorKind::NonFinite, std::string(what) + " has a non-finite entry");
}

// 12 significant digits; -0 folds onto +0.
double canonical(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.11e", x);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

std::vector<Vec> dedup(std::vector<Vec> vertices) {
  std::set<Vec> seen;
  std::vector<Vec> out;
  out.reserve(vertices.size());
  for (Vec& v : vertices) {
    Vec key(v.size());
    std::transform(v.begin(), v.end(), key.begin(), canonical);
    if (seen.insert(std::move(key)).second) out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

AffineSystem::AffineSystem(Mat a, Vec b_vec) : A(std::move(a)), b(std::move(b_vec)) {
  if (!A.square() || A.rows() == 0)
    throw Error(ErrorKind::DimensionMismatch, "system matrix A must be square");
  if (b.size() != A.rows())
    throw Error(ErrorKind::DimensionMismatch, "translation b must have length d");
  require_finite(A.data(), "A");
  require_finite(b, "b");
}

AffineSystem::AffineSystem(Mat a) : AffineSystem(a, Vec(a.rows(), 0.0)) {}

bool AffineSystem::linear() const {
  return std::all_of(b.begin(), b.end(), [](double x) { return x == 0.0; });
}

bool Box::has_interior() const {
  for (std::size_t i = 0; i < lower.size(); ++i)
    if (!(lower[i] < upper[i])) return false;
  return true;
}

bool Box::contains_origin_in_interior() const {
  for (std::size_t i = 0; i < lower.size(); ++i)
    if (!(lower[i] < 0.0 && 0.0 < upper[i])) return false;
  return true;
}

InitialSet::InitialSet(std::vector<Vec> vertices) {
  if (vertices.empty()) throw Error(ErrorKind::DimensionMismatch, "initial set has no vertices");
  const std::size_t d = vertices.front().size();
  if (d == 0) throw Error(ErrorKind::DimensionMismatch, "initial set vertices are empty");
  for (const Vec& v : vertices) {
    if (v.size() != d)
      throw Error(ErrorKind::DimensionMismatch, "initial set vertices differ in length");
    require_finite(v, "vertex");
  }
  vertices_ = dedup(std::move(vertices));
}

InitialSet::InitialSet(std::vector<Vec> vertices, Box box) : InitialSet(std::move(vertices)) {
  if (box.lower.size() != dim() || box.upper.size() != dim())
    throw Error(ErrorKind::DimensionMismatch, "box bounds differ in length from vertices");
  box_ = std::move(box);
}

InitialSet InitialSet::translated(std::span<const double> offset) const {
  std::vector<Vec> moved = vertices_;
  for (Vec& v : moved)
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += offset[i];
  if (!box_) return InitialSet(std::move(moved));
  Box b = *box_;
  for (std::size_t i = 0; i < b.lower.size(); ++i) {
    b.lower[i] += offset[i];
    b.upper[i] += offset[i];
  }
  return InitialSet(std::move(moved), std::move(b));
}

QuadraticObjective::QuadraticObjective(Mat q_mat, Vec q_vec, std::optional<double> level,
                                       double offset)
    : q(std::move(q_vec)), alpha(level), constant(offset) {
  if (!q_mat.square() || q_mat.rows() == 0)
    throw Error(ErrorKind::DimensionMismatch, "objective matrix Q must be square");
  if (q.size() != q_mat.rows())
    throw Error(ErrorKind::DimensionMismatch, "objective vector q must have length d");
  require_finite(q_mat.data(), "Q");
  require_finite(q, "q");
  if (alpha && !std::isfinite(*alpha)) throw Error(ErrorKind::NonFinite, "alpha is not finite");
  Q = symmetrized(q_mat);
}

double QuadraticObjective::operator()(std::span<const double> x) const {
  return quad_form(Q, x) + dot(q, x) + constant;
}

VerificationTask::VerificationTask(AffineSystem sys, InitialSet initial,
                                   QuadraticObjective obj)
    : system(std::move(sys)), init(std::move(initial)), objective(std::move(obj)) {
  const std::size_t d = system.dim();
  if (init.dim() != d || objective.dim() != d) {
    std::ostringstream os;
    os << "dimension mismatch: system " << d << ", initial set " << init.dim()
       << ", objective " << objective.dim();
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
}

InitialSet box_to_vertices(const Vec& lower, const Vec& upper) {
  if (lower.size() != upper.size() || lower.empty())
    throw Error(ErrorKind::DimensionMismatch, "box bounds must be non-empty and equal length");
  const std::size_t d = lower.size();
  if (d > kMaxBoxDimension)
    throw Error(ErrorKind::DimensionTooLarge,
                "box dimension " + std::to_string(d) + " exceeds " +
                    std::to_string(kMaxBoxDimension));
  require_finite(lower, "box lower bound");
  require_finite(upper, "box upper bound");
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < d; ++i) {
    if (lower[i] > upper[i])
      throw Error(ErrorKind::EmptyBox, "box lower bound exceeds upper on axis " + std::to_string(i));
    if (lower[i] < upper[i]) open.push_back(i);
  }
  std::vector<Vec> vertices;
  const std::size_t count = std::size_t{1} << open.size();
  vertices.reserve(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    Vec v = lower;
    for (std::size_t bit = 0; bit < open.size(); ++bit) {
      const std::size_t axis = open[open.size() - 1 - bit];
      if (mask & (std::size_t{1} << bit)) v[axis] = upper[axis];
    }
    vertices.push_back(std::move(v));
  }
  return InitialSet(std::move(vertices), Box{lower, upper});
}

QuadraticObjective linear_range_property(const Vec& c, double alpha, double beta) {
  if (!(alpha < beta)) throw Error(ErrorKind::DegenerateRange, "linear range needs lower < upper");
  if (std::all_of(c.begin(), c.end(), [](double x) { return x == 0.0; }))
    throw Error(ErrorKind::DegenerateRange, "linear range direction c is zero");
  Vec q(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) q[i] = -(alpha + beta) * c[i];
  return QuadraticObjective(outer(c, c), std::move(q), -alpha * beta);
}

Vec affine_shift(const AffineSystem& system, const Tolerances& tol) {
  const std::size_t d = system.dim();
  if (system.linear()) return Vec(d, 0.0);
  try {
    return solve(Mat::identity(d) - system.A, system.b, tol);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularSystem) throw;
    throw Error(ErrorKind::SingularShift, "Id - A is numerically singular");
  }
}

VerificationTask homogenize(const VerificationTask& task, const Tolerances& tol) {
  if (task.system.linear()) return task;
  const Vec shift = affine_shift(task.system, tol);
  const QuadraticObjective& obj = task.objective;

  const Vec q_shift = obj.Q * std::span<const double>(shift);
  Vec q_new(obj.q.size());
  for (std::size_t i = 0; i < q_new.size(); ++i) q_new[i] = 2.0 * q_shift[i] + obj.q[i];
  const double constant = obj.constant + dot(shift, q_shift) + dot(obj.q, shift);

  Vec negated(shift.size());
  std::transform(shift.begin(), shift.end(), negated.begin(), [](double x) { return -x; });
  return VerificationTask(AffineSystem(task.system.A), task.init.translated(negated),
                          QuadraticObjective(obj.Q, std::move(q_new), obj.alpha, constant));
}

}  // namespace qreach
