#ifndef GSTAR_BANDIT_HPP_
#define GSTAR_BANDIT_HPP_

#include "gstar/constraint_set.hpp"
#include "gstar/hindsight.hpp"
#include "gstar/loss.hpp"
#include "gstar/rng.hpp"
#include "gstar/vec.hpp"

#include <cstdint>
#include <span>
#include <variant>

namespace gstar {

/// Uniform direction on the unit sphere (normalized Gaussian).
Vec sample_sphere(Index dim, CounterRng& rng);

struct TwoPointSample {
  Vec s;
  Vec y_plus;
  Vec y_minus;
  Vec g_hat;  // (n / (2 mu)) (l(y+) - l(y-)) s
};

TwoPointSample two_point_estimate(const LossFn& f, const Vec& x, double mu, CounterRng& rng);

struct MonteCarloEstimate {
  double mean;
  double std_error;
};

/// E_s l(x + mu s) by Monte Carlo over the sphere. Testing utility.
MonteCarloEstimate smoothed_value(const LossFn& f, const Vec& x, double mu, int samples, CounterRng& rng);

struct ConstantRate {
  double eta;
};
struct AdaNormRate {
  double alpha;
};

struct BanditConfig {
  double mu;
  int dim;
  std::variant<ConstantRate, AdaNormRate> learning;
  std::uint64_t seed = 0;

  /// n >= 8, mu > 0; a constant eta must lie in (0, 1/(4 n L)).
  void validate(double smoothness) const;
};

/**
 * Two-point bandit gradient descent from the set center. Round t draws its
 * direction from round_rng(seed, t). Losses are charged at the decision point
 * x^t; the query points x^t +- mu s may leave the set.
 */
RegretLedger bgd_run(std::span<const LossFn> losses, const ConstraintSet& set, const BanditConfig& cfg);

}  // namespace gstar

#endif  // GSTAR_BANDIT_HPP_
