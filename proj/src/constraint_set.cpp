#include "gstar/constraint_set.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gstar {

namespace {

// Points within this relative slack of the sphere are treated as members so
// that project() is bitwise idempotent after the rescaling round-off.
constexpr double kBallSlack = 16 * std::numeric_limits<double>::epsilon();

}  // namespace

ConstraintSet ConstraintSet::ball(Vec center, double radius) {
  require_finite(center, "Ball center");
  if (!(radius > 0) || !std::isfinite(radius))
    throw std::invalid_argument("Ball radius must be positive and finite");
  return ConstraintSet(Ball{std::move(center), radius});
}

ConstraintSet ConstraintSet::box(Vec lower, Vec upper) {
  require_finite(lower, "Box lower");
  require_finite(upper, "Box upper");
  require_same_dim(lower.size(), upper.size(), "Box bounds");
  if ((lower.array() > upper.array()).any())
    throw std::invalid_argument("Box requires lower <= upper elementwise");
  return ConstraintSet(Box{std::move(lower), std::move(upper)});
}

ConstraintSet ConstraintSet::interval(double lower, double upper) {
  return box(Vec::Constant(1, lower), Vec::Constant(1, upper));
}

Index ConstraintSet::dim() const {
  if (const auto* b = as_ball()) return b->center.size();
  return std::get<Box>(shape_).lower.size();
}

double ConstraintSet::diameter() const {
  if (const auto* b = as_ball()) return 2.0 * b->radius;
  const auto& box = std::get<Box>(shape_);
  return (box.upper - box.lower).norm();
}

Vec ConstraintSet::center() const {
  if (const auto* b = as_ball()) return b->center;
  const auto& box = std::get<Box>(shape_);
  return 0.5 * (box.lower + box.upper);
}

Vec ConstraintSet::project(const Vec& x) const {
  require_same_dim(dim(), x.size(), "project");
  if (const auto* b = as_ball()) {
    Vec d = x - b->center;
    const double r = d.norm();
    if (r <= b->radius + kBallSlack * (b->radius + b->center.norm())) return x;
    return b->center + (b->radius / r) * d;
  }
  const auto& box = std::get<Box>(shape_);
  return x.cwiseMax(box.lower).cwiseMin(box.upper);
}

bool ConstraintSet::contains(const Vec& x, double tol) const {
  return distance(x) <= tol;
}

double ConstraintSet::distance(const Vec& x) const {
  require_same_dim(dim(), x.size(), "distance");
  if (const auto* b = as_ball()) return std::max(0.0, (x - b->center).norm() - b->radius);
  return (x - project(x)).norm();
}

std::pair<double, double> ConstraintSet::linear_range(const Vec& a) const {
  require_same_dim(dim(), a.size(), "linear_range");
  if (const auto* b = as_ball()) {
    const double mid = a.dot(b->center);
    const double spread = b->radius * a.norm();
    return {mid - spread, mid + spread};
  }
  const auto& box = std::get<Box>(shape_);
  double lo = 0.0, hi = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    const double u = a[i] * box.lower[i];
    const double v = a[i] * box.upper[i];
    lo += std::min(u, v);
    hi += std::max(u, v);
  }
  return {lo, hi};
}

ConstraintSet ConstraintSet::inflated(double mu) const {
  if (mu < 0) throw std::invalid_argument("inflated: negative radius");
  if (const auto* b = as_ball()) return ball(b->center, b->radius + mu);
  const auto& box = std::get<Box>(shape_);
  return ConstraintSet::box(box.lower.array() - mu, box.upper.array() + mu);
}

}  // namespace gstar
