#include "gstar/bandit.hpp"

#include <cmath>
#include <stdexcept>

namespace gstar {

Vec sample_sphere(Index dim, CounterRng& rng) {
  if (dim < 1) throw std::invalid_argument("sample_sphere: dim must be >= 1");
  for (;;) {
    Vec v = rng.normal_vec(dim);
    const double n = v.norm();
    if (n > 0) return v / n;
  }
}

TwoPointSample two_point_estimate(const LossFn& f, const Vec& x, double mu, CounterRng& rng) {
  if (!(mu > 0)) throw std::invalid_argument("two_point_estimate: mu must be positive");
  require_same_dim(f.dim(), x.size(), "two_point_estimate");
  TwoPointSample out;
  out.s = sample_sphere(x.size(), rng);
  out.y_plus = x + mu * out.s;
  out.y_minus = x - mu * out.s;
  const double scale = static_cast<double>(x.size()) / (2.0 * mu);
  out.g_hat = (scale * (f.value(out.y_plus) - f.value(out.y_minus))) * out.s;
  return out;
}

MonteCarloEstimate smoothed_value(const LossFn& f, const Vec& x, double mu, int samples, CounterRng& rng) {
  if (samples < 1) throw std::invalid_argument("smoothed_value: samples must be >= 1");
  if (!(mu >= 0)) throw std::invalid_argument("smoothed_value: mu must be non-negative");
  // Welford accumulation.
  double mean = 0.0, m2 = 0.0;
  for (int i = 1; i <= samples; ++i) {
    const double v = f.value(x + mu * sample_sphere(x.size(), rng));
    const double d = v - mean;
    mean += d / i;
    m2 += d * (v - mean);
  }
  const double var = samples > 1 ? m2 / (samples - 1) : 0.0;
  return {mean, std::sqrt(var / samples)};
}

void BanditConfig::validate(double smoothness) const {
  if (dim < 8) throw std::invalid_argument("BanditConfig: dimension must be >= 8");
  if (!(mu > 0)) throw std::invalid_argument("BanditConfig: mu must be positive");
  if (const auto* c = std::get_if<ConstantRate>(&learning)) {
    if (!(c->eta > 0)) throw std::invalid_argument("BanditConfig: eta must be positive");
    if (smoothness > 0 && !(c->eta < 1.0 / (4.0 * dim * smoothness)))
      throw std::invalid_argument("BanditConfig: eta must be below 1/(4 n L)");
  } else if (!(std::get<AdaNormRate>(learning).alpha > 0)) {
    throw std::invalid_argument("BanditConfig: alpha must be positive");
  }
}

RegretLedger bgd_run(std::span<const LossFn> losses, const ConstraintSet& set, const BanditConfig& cfg) {
  require_same_dim(set.dim(), cfg.dim, "bgd_run");
  cfg.validate(common_smoothness(losses, set.inflated(cfg.mu)));

  std::vector<Vec> iterates;
  iterates.reserve(losses.size());
  Vec x = set.center();
  double sum_sq = 0.0;
  for (std::size_t t = 0; t < losses.size(); ++t) {
    iterates.push_back(x);
    CounterRng rng = round_rng(cfg.seed, t);
    const Vec g = two_point_estimate(losses[t], x, cfg.mu, rng).g_hat;
    if (const auto* c = std::get_if<ConstantRate>(&cfg.learning)) {
      x = set.project(x - c->eta * g);
    } else {
      const double g2 = g.squaredNorm();
      if (g2 == 0.0) continue;
      sum_sq += g2;
      x = set.project(x - std::get<AdaNormRate>(cfg.learning).alpha / std::sqrt(sum_sq) * g);
    }
  }
  return RegretLedger::record(losses, std::move(iterates));
}

}  // namespace gstar
