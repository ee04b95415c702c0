#ifndef GSTAR_CONSTRAINT_SET_HPP_
#define GSTAR_CONSTRAINT_SET_HPP_

#include "gstar/vec.hpp"

#include <utility>
#include <variant>

namespace gstar {

struct Ball {
  Vec center;
  double radius;
};

/// Axis-aligned box, used for the 1-D constructions X = [-1, 1] and [1, 2].
struct Box {
  Vec lower;
  Vec upper;
};

/**
 * Closed convex feasible set with an exact Euclidean projection.
 * Immutable after construction.
 */
class ConstraintSet {
 public:
  static ConstraintSet ball(Vec center, double radius);
  static ConstraintSet ball(Index dim, double radius) { return ball(Vec::Zero(dim), radius); }
  static ConstraintSet box(Vec lower, Vec upper);
  static ConstraintSet interval(double lower, double upper);

  Index dim() const;
  double diameter() const;
  Vec center() const;

  /// Nearest point of the set. Fixed point on members (within rounding slack).
  Vec project(const Vec& x) const;
  bool contains(const Vec& x, double tol = 1e-12) const;
  double distance(const Vec& x) const;

  /// [min, max] of <a, x> over the set.
  std::pair<double, double> linear_range(const Vec& a) const;

  /// Minkowski sum with a ball of radius mu (for a Box, the bounding box of it).
  ConstraintSet inflated(double mu) const;

  const Ball* as_ball() const { return std::get_if<Ball>(&shape_); }
  const Box* as_box() const { return std::get_if<Box>(&shape_); }

 private:
  explicit ConstraintSet(std::variant<Ball, Box> shape) : shape_(std::move(shape)) {}
  std::variant<Ball, Box> shape_;
};

inline Vec project(const ConstraintSet& set, const Vec& x) { return set.project(x); }

}  // namespace gstar

#endif  // GSTAR_CONSTRAINT_SET_HPP_
