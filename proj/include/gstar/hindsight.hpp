#ifndef GSTAR_HINDSIGHT_HPP_
#define GSTAR_HINDSIGHT_HPP_

#include "gstar/constraint_set.hpp"
#include "gstar/loss.hpp"
#include "gstar/vec.hpp"

#include <optional>
#include <span>
#include <vector>

namespace gstar {

/// Comparator in hindsight and the problem-dependent quantities at it.
struct HindsightReport {
  Vec x_star;
  std::optional<double> L_star;  // absent iff some loss has no infimum
  double G_star = 0.0;
  /// Projected-gradient-mapping norm at exit (solver) or final grid cell (brute force).
  double solver_residual = 0.0;
  long iterations = 0;
  bool converged = false;
};

struct HindsightOptions {
  double tol = 1e-10;
  long max_iterations = 1'000'000;
};

/// G_T(x) = sum_t ||grad l_t(x)||^2.
double cumulative_nonstationarity(std::span<const LossFn> losses, const Vec& x);
/// L_T(x) = sum_t [l_t(x) - inf l_t]; absent if some infimum is undefined.
std::optional<double> cumulative_excess_loss(std::span<const LossFn> losses, const Vec& x);

/**
 * argmin over the set of the cumulative loss by projected gradient descent on
 * the average loss, fixed step 1/L_avg, stopped on the gradient-mapping norm.
 * Non-convergence is reported through `converged` and `solver_residual`.
 */
HindsightReport solve_hindsight(std::span<const LossFn> losses, const ConstraintSet& set,
                                const HindsightOptions& opts = {});

/**
 * Grid search for dim <= 2: an exhaustive grid over the bounding box (points
 * outside the set are projected onto it), followed by zoomed re-gridding
 * around the incumbent. Derivative-free; used to cross-check solve_hindsight.
 */
HindsightReport brute_force_hindsight(std::span<const LossFn> losses, const ConstraintSet& set,
                                      int grid_points, int zoom_levels = 4);

/// V_T = sum_{t>=2} max_x |l_t'(x) - l_{t-1}'(x)|^2 on a grid; dim 1 only.
double gradient_variation_1d(std::span<const LossFn> losses, const ConstraintSet& set, int grid = 10'000);

// ---------------------------------------------------------------------------

struct ComparatorPath {
  std::vector<Vec> points;
  double path_length = 0.0;
};

/// Validates feasibility and computes sum_{t>=2} ||x_t - x_{t-1}||.
ComparatorPath make_comparator_path(std::vector<Vec> points, const ConstraintSet& set, double tol = 1e-12);

/// Piecewise-constant comparator: the hindsight minimizer of each of `segments` equal blocks.
ComparatorPath piecewise_comparator(std::span<const LossFn> losses, const ConstraintSet& set, int segments,
                                    const HindsightOptions& opts = {});

/// Dynamic analogues along a comparator path.
struct DynamicMeasures {
  double path_length;
  double G_hat;
  std::optional<double> L_hat;
};

DynamicMeasures dynamic_measures(std::span<const LossFn> losses, const ComparatorPath& path);

// ---------------------------------------------------------------------------

struct RoundRecord {
  Vec x;
  double loss;
  double grad_norm_sq;
};

/**
 * Per-round trace of an online run. Cumulative quantities are sums of the
 * stored per-round fields; verify() replays the iterates through the losses.
 */
class RegretLedger {
 public:
  static RegretLedger record(std::span<const LossFn> losses, std::vector<Vec> iterates);

  const std::vector<RoundRecord>& rounds() const { return rounds_; }
  int horizon() const { return static_cast<int>(rounds_.size()); }
  double cumulative_loss() const { return cumulative_loss_; }
  /// sum_t ||grad l_t(x^t)||^2
  double cumulative_grad_norm_sq() const { return cumulative_grad_sq_; }

  /// rho_T(x) = sum_t l_t(x^t) - sum_t l_t(x).
  double regret(std::span<const LossFn> losses, const Vec& comparator) const;
  /// sum_t l_t(x^t) - l_t(xhat_t).
  double dynamic_regret(std::span<const LossFn> losses, const ComparatorPath& path) const;

  bool verify(std::span<const LossFn> losses, double rel_tol = 1e-9) const;

  std::optional<double> gradient_variation;  // 1-D fixtures only

 private:
  std::vector<RoundRecord> rounds_;
  double cumulative_loss_ = 0.0;
  double cumulative_grad_sq_ = 0.0;
};

}  // namespace gstar

#endif  // GSTAR_HINDSIGHT_HPP_
