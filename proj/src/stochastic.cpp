#include "gstar/stochastic.hpp"

#include "gstar/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace gstar {

namespace {

Vec uniform_box_vec(Index n, CounterRng& rng) {
  Vec a(n);
  for (Index i = 0; i < n; ++i) a[i] = 2.0 * rng.uniform() - 1.0;
  return a;
}

void check_x_star(const Vec& x_star, const ConstraintSet& set) {
  require_finite(x_star, "x_star");
  require_same_dim(set.dim(), x_star.size(), "x_star");
  if (!set.contains(x_star, 1e-12)) throw std::invalid_argument("x_star must lie in the set");
}

}  // namespace

StochasticProblem consistent_least_squares(const Vec& x_star, const ConstraintSet& set) {
  check_x_star(x_star, set);
  const Index n = x_star.size();
  StochasticProblem p{"consistent_least_squares",
                      [x_star, n](CounterRng& rng) {
                        Vec a = uniform_box_vec(n, rng);
                        const double b = a.dot(x_star);
                        return LossFn(LpRegression{std::move(a), b, 2.0});
                      },
                      set,
                      x_star,
                      static_cast<double>(n),
                      [x_star](const Vec& x) { return (x - x_star).squaredNorm() / 6.0; },
                      0.0,
                      0.0,
                      true,
                      true};
  return p;
}

StochasticProblem noisy_least_squares(const Vec& x_star, double sigma, const ConstraintSet& set) {
  check_x_star(x_star, set);
  if (!(sigma >= 0)) throw std::invalid_argument("noisy_least_squares: sigma must be non-negative");
  const Index n = x_star.size();
  StochasticProblem p{"noisy_least_squares",
                      [x_star, n, sigma](CounterRng& rng) {
                        Vec a = uniform_box_vec(n, rng);
                        const double b = a.dot(x_star) + sigma * rng.normal();
                        return LossFn(LpRegression{std::move(a), b, 2.0});
                      },
                      set,
                      x_star,
                      static_cast<double>(n),
                      [x_star, sigma](const Vec& x) { return (x - x_star).squaredNorm() / 6.0 + 0.5 * sigma * sigma; },
                      0.5 * sigma * sigma,
                      sigma * std::sqrt(static_cast<double>(n) / 3.0),
                      sigma == 0.0,
                      true};
  return p;
}

StochasticProblem l4_regression(const Vec& x_star, double sigma, const ConstraintSet& set) {
  check_x_star(x_star, set);
  if (!(sigma >= 0)) throw std::invalid_argument("l4_regression: sigma must be non-negative");
  const Index n = x_star.size();
  const double nd = static_cast<double>(n);
  const double r = std::sqrt(nd) * set.diameter() + sigma;
  StochasticProblem p{"l4_regression",
                      [x_star, n, sigma](CounterRng& rng) {
                        Vec a = uniform_box_vec(n, rng);
                        const double b = a.dot(x_star) + sigma * rng.rademacher();
                        return LossFn(LpRegression{std::move(a), b, 4.0});
                      },
                      set,
                      x_star,
                      3.0 * nd * r * r,
                      [x_star, sigma](const Vec& x) {
                        const Vec d = x - x_star;
                        const double s2 = d.squaredNorm();
                        const double s4 = d.array().pow(4).sum();
                        const double u4 = s4 / 5.0 + (s2 * s2 - s4) / 3.0;
                        const double u2 = s2 / 3.0;
                        const double e2 = sigma * sigma;
                        return 0.25 * (u4 + 6.0 * e2 * u2 + e2 * e2);
                      },
                      std::pow(sigma, 4) / 4.0,
                      std::pow(sigma, 3) * std::sqrt(nd / 3.0),
                      sigma == 0.0,
                      false};
  return p;
}

double sampled_objective(const StochasticProblem& p, const Vec& x, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("sampled_objective: samples must be >= 1");
  CounterRng rng(seed, 0x0b7);
  double s = 0.0;
  for (int i = 0; i < samples; ++i) s += p.sampler(rng).value(x);
  return s / samples;
}

SigmaEstimate estimate_sigmas(const StochasticProblem& p, int samples, std::uint64_t seed) {
  if (!p.known_x_star) throw std::invalid_argument("estimate_sigmas: problem has no known x*");
  if (samples < 2) throw std::invalid_argument("estimate_sigmas: need at least 2 samples");
  const Vec& xs = *p.known_x_star;
  CounterRng rng(seed, 0x5165);
  double sf = 0.0, sf2 = 0.0, sg = 0.0, sg2 = 0.0;
  for (int i = 0; i < samples; ++i) {
    const LossFn f = p.sampler(rng);
    const auto inf = f.infimum();
    if (!inf) throw std::invalid_argument("estimate_sigmas: sampled loss has no infimum");
    const double v = f.value(xs) - *inf;
    const double g = f.grad(xs).squaredNorm();
    sf += v, sf2 += v * v, sg += g, sg2 += g * g;
  }
  const double m = samples;
  const double mf = sf / m, mg = sg / m;
  const double var_f = std::max(0.0, (sf2 - m * mf * mf) / (m - 1));
  const double var_g = std::max(0.0, (sg2 - m * mg * mg) / (m - 1));
  SigmaEstimate e;
  e.sigma_f = mf;
  e.se_f = std::sqrt(var_f / m);
  e.sigma_g = std::sqrt(mg);
  // Delta method for the square root.
  e.se_g = e.sigma_g > 0 ? std::sqrt(var_g / m) / (2.0 * e.sigma_g) : 0.0;
  return e;
}

namespace {

double objective_at(const StochasticProblem& p, const Vec& x, std::uint64_t seed) {
  return p.objective ? p.objective(x) : sampled_objective(p, x, 10'000, seed);
}

void fill_sigmas(const StochasticProblem& p, InterpolationReport& rep, std::uint64_t seed) {
  if (p.sigma_f_exact && p.sigma_g_exact) {
    rep.sigma_f = *p.sigma_f_exact;
    rep.sigma_g = *p.sigma_g_exact;
  } else {
    const auto e = estimate_sigmas(p, 10'000, seed);
    rep.sigma_f = e.sigma_f;
    rep.sigma_g = e.sigma_g;
  }
}

}  // namespace

InterpolationReport online_to_batch(const StochasticProblem& p, Learner learner, int T, std::uint64_t seed) {
  if (T < 1) throw std::invalid_argument("online_to_batch: T must be >= 1");
  if (!p.known_x_star) throw std::invalid_argument("online_to_batch: problem has no known x*");
  const std::string algo = learner.name();
  if (algo == "sword") throw std::invalid_argument("online_to_batch: algorithm must be OGD, AdaGrad-Norm or AdaFTRL");

  const Vec& xs = *p.known_x_star;
  const Vec x1 = learner.play();
  Vec sum = Vec::Zero(xs.size());
  double iterate_obj = 0.0;
  for (int t = 0; t < T; ++t) {
    CounterRng rng = round_rng(seed, static_cast<std::uint64_t>(t));
    const LossFn f = p.sampler(rng);
    const Vec& x = learner.play();
    sum += x;
    if (p.objective) iterate_obj += p.objective(x);
    learner.observe(f.grad(x));
  }

  InterpolationReport rep;
  rep.x_bar = sum / static_cast<double>(T);
  rep.gap_exact = static_cast<bool>(p.objective);
  const double f_star = objective_at(p, xs, seed ^ 0xf00d);
  rep.avg_iterate_gap = objective_at(p, rep.x_bar, seed ^ 0xf00d) - f_star;
  rep.mean_iterate_gap = p.objective ? iterate_obj / T - f_star : rep.avg_iterate_gap;
  fill_sigmas(p, rep, seed ^ 0x516);

  BoundInputs in;
  in.L = p.L;
  in.D = p.set.diameter();
  in.T = T;
  in.sigma_g = rep.sigma_g;
  in.x1_dist_sq = (x1 - xs).squaredNorm();
  if (const auto* s = std::get_if<OgdState>(&learner.state())) {
    in.eta = s->eta;
    if (s->eta * p.L < 1.0) rep.bound_values["batch_ogd"] = bound_value(BoundKind::BatchOgd, in);
  } else if (std::holds_alternative<AdaGradNormState>(learner.state())) {
    rep.bound_values["batch_adagrad_norm"] = bound_value(BoundKind::BatchAdaGradNorm, in);
  } else {
    in.R = adaftrl_regularizer_range(std::get<AdaFtrlState>(learner.state()));
    rep.bound_values["batch_adaftrl"] = bound_value(BoundKind::BatchAdaFtrl, in);
  }
  // The same rate with sigma_g replaced by its self-bounded majorant sqrt(2 L sigma_f).
  BoundInputs via_f = in;
  via_f.sigma_g = std::sqrt(2.0 * p.L * rep.sigma_f);
  rep.bound_values["batch_adagrad_norm_via_sigma_f"] = bound_value(BoundKind::BatchAdaGradNorm, via_f);
  rep.bound_values["noise_term_sigma_g"] = std::sqrt(2.0) * *in.D * rep.sigma_g / std::sqrt(double(T));
  rep.bound_values["noise_term_sigma_f"] = std::sqrt(2.0) * *in.D * *via_f.sigma_g / std::sqrt(double(T));
  return rep;
}

InterpolationReport adanorm_unconstrained_run(const StochasticProblem& p, double alpha, const Vec& x1, int T,
                                              std::uint64_t seed) {
  if (!p.surely_interpolating) throw std::invalid_argument("adanorm_unconstrained_run: problem is not surely interpolating");
  if (!p.globally_smooth) throw std::invalid_argument("adanorm_unconstrained_run: samples must be globally smooth");
  if (!p.known_x_star) throw std::invalid_argument("adanorm_unconstrained_run: problem has no known x*");
  if (T < 1) throw std::invalid_argument("adanorm_unconstrained_run: T must be >= 1");
  const Vec& xs = *p.known_x_star;
  require_same_dim(xs.size(), x1.size(), "adanorm_unconstrained_run");

  AdaGradNormState s{x1, alpha};
  Vec sum = Vec::Zero(x1.size());
  std::vector<double> dist_sq;
  dist_sq.reserve(static_cast<std::size_t>(T));
  double g1 = 0.0;
  double iterate_obj = 0.0;
  for (int t = 0; t < T; ++t) {
    CounterRng rng = round_rng(seed, static_cast<std::uint64_t>(t));
    const LossFn f = p.sampler(rng);
    sum += s.x;
    dist_sq.push_back((s.x - xs).squaredNorm());
    if (p.objective) iterate_obj += p.objective(s.x);
    const Vec g = f.grad(s.x);
    if (g1 == 0.0) g1 = g.norm();
    s = adagrad_norm_step_unconstrained(s, g);
  }

  InterpolationReport rep;
  rep.x_bar = sum / static_cast<double>(T);
  rep.gap_exact = static_cast<bool>(p.objective);
  const double f_star = objective_at(p, xs, seed ^ 0xf00d);
  rep.avg_iterate_gap = objective_at(p, rep.x_bar, seed ^ 0xf00d) - f_star;
  rep.mean_iterate_gap = p.objective ? iterate_obj / T - f_star : rep.avg_iterate_gap;
  fill_sigmas(p, rep, seed ^ 0x516);
  rep.g1_norm = g1;

  BoundInputs in;
  in.L = p.L;
  in.alpha = alpha;
  in.T = T;
  in.x1_dist_sq = (x1 - xs).squaredNorm();
  in.g1_norm = g1;
  rep.bound_values["interpolation"] = bound_value(BoundKind::Interpolation, in);

  if (g1 > 0) {
    rep.d_hat = interpolation_dhat(*in.x1_dist_sq, alpha, p.L, g1);
    for (double d : dist_sq) {
      rep.max_dist_sq = std::max(rep.max_dist_sq, d);
      if (d > rep.d_hat * (1.0 + 1e-12)) rep.iterates_bounded = false;
    }
  } else {
    // No gradient ever observed: the iterate never moved.
    rep.d_hat = *in.x1_dist_sq;
    rep.max_dist_sq = *in.x1_dist_sq;
  }
  return rep;
}

}  // namespace gstar
