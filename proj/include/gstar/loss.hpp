#ifndef GSTAR_LOSS_HPP_
#define GSTAR_LOSS_HPP_

#include "gstar/constraint_set.hpp"
#include "gstar/vec.hpp"

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace gstar {

/// |<a, x> - b|^p / p, p >= 2.
struct LpRegression {
  Vec a;
  double b;
  double p;
};

/// log(1 + exp(-y <a, x>)), y in {-1, +1}.
struct CrossEntropy {
  Vec a;
  double y;
};

/// exp(-<a, x>).
struct Exponential {
  Vec a;
};

/// (a x)^2 / 2 on the real line.
struct ScaledQuadratic {
  double a;
};

/// (a x - b)^2 / 2 on the real line.
struct QuadraticResidual {
  double a;
  double b;
};

/// <g, x>. Has no infimum.
struct Linear {
  Vec g;
};

/// ||x - center||^2 / 2.
struct SquaredDistance {
  Vec center;
};

/**
 * Smooth convex loss. A closed set of variants so that values, gradients and
 * smoothness constants are all closed-form. Immutable.
 */
class LossFn {
 public:
  using Variant = std::variant<LpRegression, CrossEntropy, Exponential, ScaledQuadratic,
                               QuadraticResidual, Linear, SquaredDistance>;

  LossFn(LpRegression f);
  LossFn(CrossEntropy f);
  LossFn(Exponential f);
  LossFn(ScaledQuadratic f);
  LossFn(QuadraticResidual f);
  LossFn(Linear f);
  LossFn(SquaredDistance f);

  Index dim() const;
  double value(const Vec& x) const;
  Vec grad(const Vec& x) const;
  /// out += weight * grad(x), without allocating.
  void accumulate_grad(const Vec& x, double weight, Vec& out) const;

  /**
   * An L for which the dual strong convexity inequality holds for all pairs
   * in `set`. For lp (p > 2) and exponential losses this is the Hessian bound
   * over the set; the other variants are globally smooth.
   */
  double smoothness(const ConstraintSet& set) const;

  /// inf over R^n; absent for Linear.
  std::optional<double> infimum() const;
  /// min over `set`, exact.
  double minimum_over(const ConstraintSet& set) const;

  std::string kind() const;
  const Variant& variant() const { return f_; }

 private:
  Variant f_;
};

double loss_value(const LossFn& f, const Vec& x);
Vec loss_grad(const LossFn& f, const Vec& x);
double smoothness_constant(const LossFn& f, const ConstraintSet& set);

/// max_t L_t over the sequence.
double common_smoothness(std::span<const LossFn> losses, const ConstraintSet& set);

double cumulative_loss(std::span<const LossFn> losses, const Vec& x);

}  // namespace gstar

#endif  // GSTAR_LOSS_HPP_
