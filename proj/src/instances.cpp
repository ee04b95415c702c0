#include "gstar/harness.hpp"

#include "gstar/algorithms.hpp"
#include "gstar/rng.hpp"
#include "gstar/stochastic.hpp"

#include <cmath>

namespace gstar {

namespace {

void check_T(int T, const char* what) {
  if (T < 1) throw std::invalid_argument(std::string(what) + ": T must be >= 1");
}

// Streams above every round index, for per-instance draws.
constexpr std::uint64_t kInstanceStream = ~std::uint64_t{0};

}  // namespace

LpInstance generate_lp_instance(int T, double sigma, std::uint64_t seed, int dim, double p) {
  check_T(T, "generate_lp_instance");
  if (!(sigma >= 0)) throw std::invalid_argument("generate_lp_instance: sigma must be non-negative");
  if (dim < 1) throw std::invalid_argument("generate_lp_instance: dim must be >= 1");
  const double sd = std::sqrt(0.1);
  CounterRng inst(seed, kInstanceStream);
  LpInstance out;
  out.x_bar = sd * inst.normal_vec(dim);
  out.losses.reserve(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    CounterRng rng = round_rng(seed, static_cast<std::uint64_t>(t));
    Vec a = sd * rng.normal_vec(dim);
    const double b = a.dot(out.x_bar) + sigma * rng.normal();
    out.losses.emplace_back(LpRegression{std::move(a), b, p});
  }
  return out;
}

std::vector<LossFn> generate_ce_instance(int T, double delta, std::uint64_t seed, int dim) {
  check_T(T, "generate_ce_instance");
  if (!(delta >= 0.0 && delta <= 1.0)) throw std::invalid_argument("generate_ce_instance: delta must be in [0, 1]");
  std::vector<LossFn> losses;
  losses.reserve(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    CounterRng rng = round_rng(seed, static_cast<std::uint64_t>(t));
    Vec a(dim);
    for (int i = 0; i < dim; ++i) a[i] = rng.uniform();
    const double y = rng.uniform() < delta ? 1.0 : -1.0;
    losses.emplace_back(CrossEntropy{std::move(a), y});
  }
  return losses;
}

std::vector<LossFn> prop1_case2(int T, double p) {
  check_T(T, "prop1_case2");
  std::vector<LossFn> losses;
  for (int t = 1; t <= T; ++t) losses.emplace_back(ScaledQuadratic{std::pow(static_cast<double>(t), -p)});
  return losses;
}

std::vector<LossFn> prop1_case3(int T) {
  check_T(T, "prop1_case3");
  std::vector<LossFn> losses;
  for (int t = 1; t <= T; ++t) losses.emplace_back(QuadraticResidual{0.5 - static_cast<double>(t - 1) / T, 1.0});
  return losses;
}

std::vector<LossFn> prop1_case4(int T) {
  check_T(T, "prop1_case4");
  std::vector<LossFn> losses;
  for (int t = 1; t <= T; ++t) {
    const double v = t % 2 == 0 ? 1.0 : 0.5;
    losses.emplace_back(QuadraticResidual{v, v});
  }
  return losses;
}

ClosedForm prop1_case3_closed_form(int T) {
  const double t = T, t2 = t * t;
  return ClosedForm{6.0 * t / (t2 + 2.0), t * (t2 - 1.0) / (2.0 * (t2 + 2.0)),
                    (-32.0 + 60.0 * t2 - 33.0 * t2 * t2 + 5.0 * t2 * t2 * t2) / (60.0 * t * (2.0 + t2) * (2.0 + t2))};
}

ConstraintSet natural_set(const InstanceSpec& inst, int dim) {
  if (inst.kind == "prop1_case2") return ConstraintSet::interval(1.0, 2.0);
  if (inst.kind == "prop1_case3" || inst.kind == "prop1_case4") return ConstraintSet::interval(-1.0, 1.0);
  return ConstraintSet::ball(dim, 1.0);
}

std::vector<LossFn> build_instance(const InstanceSpec& inst, int T, int dim, const ConstraintSet& set,
                                   std::uint64_t seed) {
  const auto& k = inst.kind;
  if (k == "lp_regression") return generate_lp_instance(T, inst.sigma, seed, dim, inst.p).losses;
  if (k == "cross_entropy") return generate_ce_instance(T, inst.delta, seed, dim);
  if (k == "prop1_case2") return prop1_case2(T, inst.p);
  if (k == "prop1_case3") return prop1_case3(T);
  if (k == "prop1_case4") return prop1_case4(T);
  if (k == "lower_bound") return lower_bound_adversary(T, inst.M, dim, seed);
  if (k.rfind("stochastic_", 0) == 0) {
    // x* drawn inside the middle half of the set.
    CounterRng rng(seed, kInstanceStream);
    const Vec dir = rng.normal_vec(dim).normalized();
    const double r = 0.25 * set.diameter() * rng.uniform();
    const Vec xs = set.project(set.center() + r * dir);
    StochasticProblem prob = k == "stochastic_least_squares"         ? consistent_least_squares(xs, set)
                             : k == "stochastic_noisy_least_squares" ? noisy_least_squares(xs, inst.sigma, set)
                             : k == "stochastic_l4"                  ? l4_regression(xs, inst.sigma, set)
                                                                     : throw ConfigError("unknown instance kind: " + k);
    std::vector<LossFn> losses;
    for (int t = 0; t < T; ++t) {
      CounterRng r2 = round_rng(seed, static_cast<std::uint64_t>(t));
      losses.push_back(prob.sampler(r2));
    }
    return losses;
  }
  throw ConfigError("unknown instance kind: " + k);
}

}  // namespace gstar
