#ifndef GSTAR_ALGORITHMS_HPP_
#define GSTAR_ALGORITHMS_HPP_

#include "gstar/constraint_set.hpp"
#include "gstar/loss.hpp"
#include "gstar/vec.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace gstar {

// ---------------------------------------------------------------------------
// Online gradient descent with a constant step.

struct OgdState {
  Vec x;
  double eta;
};

OgdState ogd_step(const OgdState& state, const Vec& grad, const ConstraintSet& set);

// ---------------------------------------------------------------------------
// AdaGrad-Norm: eta_t = alpha / sqrt(sum of squared gradient norms so far).

struct AdaGradNormState {
  Vec x;
  double alpha;
  double sum_sq = 0.0;
  /// Step used by the most recent non-skipped update (0 before the first).
  double last_eta = 0.0;
};

/// Rounds with a zero gradient are skipped and leave the state untouched.
AdaGradNormState adagrad_norm_step(const AdaGradNormState& state, const Vec& grad,
                                   const ConstraintSet& set);

/// Same update with no projection (X = R^n).
AdaGradNormState adagrad_norm_step_unconstrained(const AdaGradNormState& state, const Vec& grad);

// ---------------------------------------------------------------------------
// AdaFTRL on linearized losses with r(x) = lambda ||x||^2 / 2 on a centered ball.

/**
 * Fenchel conjugate h of r + indicator(ball of radius B), r = lambda ||x||^2 / 2:
 *   h(theta) = ||theta||^2 / (2 lambda)       if ||theta|| <= lambda B
 *            = B ||theta|| - lambda B^2 / 2    otherwise,
 * with grad h(theta) = Proj_ball(theta / lambda).
 */
struct BallQuadraticConjugate {
  double lambda;
  double radius;

  double value(const Vec& theta) const;
  Vec grad(const Vec& theta) const;
  /// Bregman divergence V_h(x, y) = h(x) - h(y) - <grad h(y), x - y>.
  double bregman(const Vec& x, const Vec& y) const;
  /// a V_h(-l_new / a, -l_old / a) for a > 0.
  double scaled_bregman(double a, const Vec& l_new, const Vec& l_old) const;
  /// Closed-form limit of scaled_bregman as a -> 0+.
  double scaled_bregman_limit(const Vec& l_new, const Vec& l_old) const;
};

struct AdaFtrlState {
  Vec cum_grad;
  double delta = 0.0;
  double lambda;
  ConstraintSet ball;
  Vec x;
};

/// Rejects non-centered or non-ball sets and lambda < 1 / (2 D^2).
AdaFtrlState make_adaftrl(const ConstraintSet& ball, double lambda);
/// lambda = 1 / (2 D^2), the smallest value the regret guarantee admits.
AdaFtrlState make_adaftrl(const ConstraintSet& ball);

AdaFtrlState adaftrl_step(const AdaFtrlState& state, const Vec& grad);

/// R = max_x r(x) + 1 = lambda B^2 / 2 + 1.
double adaftrl_regularizer_range(const AdaFtrlState& state);

// ---------------------------------------------------------------------------
// Sword_small: exponentiated-gradient meta learner over an OGD step-size grid.

struct FixedDelta {
  double delta;
};
struct TimeVaryingDelta {};

struct SwordConfig {
  int horizon;
  double grad_bound;  // M
  double smoothness;  // L
  double diameter;    // D
  std::variant<FixedDelta, TimeVaryingDelta> delta_mode = TimeVaryingDelta{};

  double eta_min() const;
  /// max(1, ceil(log2(M sqrt(2T) / (L D)))).
  int grid_size() const;
  /// eta_i = min(2^(i-1) eta_min, 1/(4L)), i = 1..N.
  std::vector<double> step_sizes() const;
  /// Number of grid entries capped at 1/(4L).
  int clipped_count() const;
  void validate() const;
};

struct SwordState {
  std::vector<OgdState> experts;
  Vec weights;
  Vec log_weights;
  Vec x;
  double grad_sq_sum = 0.0;
  double last_delta = 0.0;
};

SwordState make_sword(const SwordConfig& cfg, const Vec& x1);
SwordState sword_step(const SwordState& state, const SwordConfig& cfg, const Vec& grad_at_x,
                      const ConstraintSet& set);
/// The meta step size for Fixed, or the time-varying schedule given the running sum.
double sword_delta(const SwordConfig& cfg, int grid_size, double grad_sq_sum);

// ---------------------------------------------------------------------------
// Lower-bound adversary: Rademacher linear losses of norm M along e_1.

std::vector<LossFn> lower_bound_adversary(int T, double M, int dim, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Uniform driver used by the harness.

class Learner {
 public:
  using State = std::variant<OgdState, AdaGradNormState, AdaFtrlState, SwordState>;

  static Learner ogd(const ConstraintSet& set, Vec x1, double eta);
  static Learner adagrad_norm(const ConstraintSet& set, Vec x1, double alpha);
  static Learner adaftrl(const ConstraintSet& ball, double lambda);
  static Learner sword(const ConstraintSet& set, Vec x1, SwordConfig cfg);

  const Vec& play() const;
  void observe(const Vec& grad);
  std::string name() const;
  const State& state() const { return state_; }

 private:
  Learner(ConstraintSet set, State state, std::variant<std::monostate, SwordConfig> cfg)
      : set_(std::move(set)), state_(std::move(state)), cfg_(std::move(cfg)) {}
  ConstraintSet set_;
  State state_;
  std::variant<std::monostate, SwordConfig> cfg_;
};

/// Full-information play: returns x^1..x^T (the iterate played at each round).
std::vector<Vec> play_online(std::span<const LossFn> losses, Learner& learner);

/**
 * Oracle meta step for a full run: the fixed point of
 *   delta = sqrt((2 + log N) / (D^2 sum_t |grad l_t(x^t)|^2)),
 * x^t being the play under delta. Starts from the time-varying schedule;
 * at most 20 passes, relative tolerance 1e-6. Zero if every gradient vanishes.
 */
double sword_oracle_delta(std::span<const LossFn> losses, const ConstraintSet& set, const Vec& x1, SwordConfig cfg);

}  // namespace gstar

#endif  // GSTAR_ALGORITHMS_HPP_
