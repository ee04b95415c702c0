#ifndef GSTAR_STOCHASTIC_HPP_
#define GSTAR_STOCHASTIC_HPP_

#include "gstar/algorithms.hpp"
#include "gstar/constraint_set.hpp"
#include "gstar/loss.hpp"
#include "gstar/rng.hpp"
#include "gstar/vec.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>

namespace gstar {

/// f(x) = E_xi f(x, xi), with one LossFn drawn per call to `sampler`.
struct StochasticProblem {
  std::string name;
  std::function<LossFn(CounterRng&)> sampler;
  ConstraintSet set;
  std::optional<Vec> known_x_star;
  double L;
  /// Closed-form f when available; otherwise estimated by fresh samples.
  std::function<double(const Vec&)> objective;
  std::optional<double> sigma_f_exact;
  std::optional<double> sigma_g_exact;
  /// grad f(x*, xi) = 0 for every xi.
  bool surely_interpolating = false;
  /// Every sample is L-smooth on all of R^n (not only on `set`).
  bool globally_smooth = false;
};

/// 1/2 (<a,x> - <a,x*>)^2 with a ~ U[-1,1]^n. f = |x - x*|^2 / 6, L = n.
StochasticProblem consistent_least_squares(const Vec& x_star, const ConstraintSet& set);
/// 1/2 (<a,x> - <a,x*> - sigma eps)^2, eps ~ N(0,1). sigma_g^2 = sigma^2 n / 3, sigma_f = sigma^2 / 2.
StochasticProblem noisy_least_squares(const Vec& x_star, double sigma, const ConstraintSet& set);
/// 1/4 (<a,x> - <a,x*> - sigma eps)^4, eps Rademacher. sigma_g^2 = sigma^6 n / 3, sigma_f = sigma^4 / 4.
StochasticProblem l4_regression(const Vec& x_star, double sigma, const ConstraintSet& set);

/// Monte Carlo estimate of f(x) from `samples` fresh draws.
double sampled_objective(const StochasticProblem& p, const Vec& x, int samples, std::uint64_t seed);

struct SigmaEstimate {
  double sigma_f, sigma_g;
  double se_f, se_g;
};

SigmaEstimate estimate_sigmas(const StochasticProblem& p, int samples, std::uint64_t seed);

struct InterpolationReport {
  double sigma_f = 0.0;
  double sigma_g = 0.0;
  Vec x_bar;
  double avg_iterate_gap = 0.0;  // f(x_bar) - f(x*)
  double mean_iterate_gap = 0.0; // (1/T) sum_t f(x^t) - f(x*)
  bool gap_exact = false;
  std::map<std::string, double> bound_values;
  // Unconstrained AdaGrad-Norm diagnostics.
  double g1_norm = 0.0;
  double d_hat = 0.0;
  double max_dist_sq = 0.0;
  bool iterates_bounded = true;
};

/// Plays `learner` on T i.i.d. samples (round t keyed by (seed, t)) and evaluates the average iterate.
InterpolationReport online_to_batch(const StochasticProblem& p, Learner learner, int T, std::uint64_t seed);

/// Unconstrained AdaGrad-Norm from x1 on a surely interpolating, globally smooth problem.
InterpolationReport adanorm_unconstrained_run(const StochasticProblem& p, double alpha, const Vec& x1, int T,
                                              std::uint64_t seed);

}  // namespace gstar

#endif  // GSTAR_STOCHASTIC_HPP_
