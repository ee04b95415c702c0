#include "gstar/bandit.hpp"
#include "gstar/bounds.hpp"
#include "gstar/harness.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace gstar;

namespace {

struct VecMean {
  Vec mean, se;
};

// Coordinate-wise mean and standard error of the two-point estimator at x.
VecMean estimator_mean(const LossFn& f, const Vec& x, double mu, int samples, std::uint64_t seed) {
  const Index n = x.size();
  Vec sum = Vec::Zero(n), sq = Vec::Zero(n);
  CounterRng rng(seed);
  for (int i = 0; i < samples; ++i) {
    const Vec g = two_point_estimate(f, x, mu, rng).g_hat;
    sum += g;
    sq += g.cwiseProduct(g);
  }
  const Vec m = sum / samples;
  const Vec var = (sq / samples - m.cwiseProduct(m)) * (double(samples) / (samples - 1));
  return {m, (var / samples).cwiseSqrt()};
}

std::vector<Vec> iterates(const RegretLedger& l) {
  std::vector<Vec> out;
  for (const auto& r : l.rounds()) out.push_back(r.x);
  return out;
}

}  // namespace

TEST_SUITE("bandit") {

TEST_CASE("sphere sampling: unit norm, zero mean, isotropic") {
  CounterRng rng(1);
  const int n = 8, draws = 100000;
  Vec mean = Vec::Zero(n);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < draws; ++i) {
    const Vec s = sample_sphere(n, rng);
    CHECK(std::abs(s.norm() - 1.0) <= 1e-12);
    mean += s / draws;
    cov += s * s.transpose() / draws;
  }
  CHECK(mean.cwiseAbs().maxCoeff() <= 5e-3);
  CHECK((cov - Eigen::MatrixXd::Identity(n, n) / n).cwiseAbs().maxCoeff() <= 5e-3);
  CHECK_THROWS_AS(sample_sphere(0, rng), std::invalid_argument);
}

TEST_CASE("two-point estimator: exact cases") {
  CounterRng rng(2);
  const int n = 8;
  const Vec x = Vec::Constant(n, 0.1);
  const Vec g = make_vec({1, -2, 0.5, 0, 3, -1, 0.25, 2});
  // Linear: n <g, s> s, mean g.
  const auto lin = estimator_mean(LossFn(Linear{g}), x, 0.05, 100000, 3);
  for (Index i = 0; i < n; ++i) CHECK(std::abs(lin.mean[i] - g[i]) <= 4 * lin.se[i]);
  // Constant loss: identically zero.
  const LossFn zero(Linear{Vec::Zero(n)});
  for (int i = 0; i < 100; ++i) CHECK(two_point_estimate(zero, x, 0.1, rng).g_hat.norm() == 0.0);
  // 1/2 |x|^2: mean x exactly (the smoothing adds only a constant).
  const auto q = estimator_mean(LossFn(SquaredDistance{Vec::Zero(n)}), x, 0.3, 100000, 4);
  for (Index i = 0; i < n; ++i) CHECK(std::abs(q.mean[i] - x[i]) <= 4 * q.se[i]);

  const auto s = two_point_estimate(LossFn(Linear{g}), x, 0.5, rng);
  CHECK((s.y_plus - x - 0.5 * s.s).norm() <= 1e-15);
  CHECK((s.y_minus - x + 0.5 * s.s).norm() <= 1e-15);
  CHECK_THROWS_AS(two_point_estimate(zero, x, 0.0, rng), std::invalid_argument);
}

TEST_CASE("smoothed value: closed forms and sandwich") {
  CounterRng rng(5);
  const int n = 8;
  const Vec x = Vec::LinSpaced(n, -0.3, 0.4);
  const double mu = 0.2;
  const LossFn q(SquaredDistance{Vec::Zero(n)});
  const auto mq = smoothed_value(q, x, mu, 100000, rng);
  // The sphere keeps |s| = 1, so the value is exactly 1/2 |x|^2 + mu^2 / 2 and the spread is small.
  CHECK(std::abs(mq.mean - (0.5 * x.squaredNorm() + 0.5 * mu * mu)) <= 3 * mq.std_error + 1e-12);
  const LossFn lin(Linear{x});
  const auto ml = smoothed_value(lin, x, mu, 100000, rng);
  CHECK(std::abs(ml.mean - x.squaredNorm()) <= 4 * ml.std_error);

  // l <= l_mu <= l + L mu^2 / 2 for convex L-smooth l.
  const auto set = ConstraintSet::ball(n, 1.0);
  const auto losses = generate_ce_instance(5, 0.9, 7, n);
  for (const auto& f : losses) {
    const double L = f.smoothness(set.inflated(mu));
    const Vec y = testing::random_point(set, rng);
    const auto m = smoothed_value(f, y, mu, 20000, rng);
    CHECK(m.mean >= f.value(y) - 4 * m.std_error);
    CHECK(m.mean <= f.value(y) + L * mu * mu / 2 + 4 * m.std_error);
  }
}

TEST_CASE("estimator: second moment and bias") {
  const int n = 8;
  const auto set = ConstraintSet::ball(n, 1.0);
  const auto losses = generate_ce_instance(4, 0.9, 11, n);
  CounterRng rng(12);
  for (const auto& f : losses) {
    const double mu = 0.1;
    const double L = f.smoothness(set.inflated(mu));
    const Vec x = testing::random_point(set, rng);
    // E|g_hat|^2 <= 2n |grad l(x)|^2 + n^2 L^2 mu^2 / 2 (variance control with smoothness).
    double m2 = 0, m4 = 0;
    const int S = 50000;
    for (int i = 0; i < S; ++i) {
      const double v = two_point_estimate(f, x, mu, rng).g_hat.squaredNorm();
      m2 += v / S, m4 += v * v / S;
    }
    const double se = std::sqrt((m4 - m2 * m2) / S);
    CHECK(m2 <= 2.0 * n * f.grad(x).squaredNorm() + 0.5 * n * n * L * L * mu * mu + 3 * se);
    // |E g_hat - grad l(x)| <= L mu.
    const auto est = estimator_mean(f, x, mu, S, 13);
    CHECK((est.mean - f.grad(x)).norm() <= L * mu + 3 * est.se.norm());
  }
}

TEST_CASE("bgd_run: zero losses, determinism, validation") {
  const int n = 8;
  const auto set = ConstraintSet::ball(n, 1.0);
  const std::vector<LossFn> zero(50, LossFn(Linear{Vec::Zero(n)}));
  for (const BanditConfig& cfg : {BanditConfig{0.1, n, ConstantRate{0.01}, 1}, BanditConfig{0.1, n, AdaNormRate{1.0}, 1}}) {
    const auto ledger = bgd_run(zero, set, cfg);
    for (const auto& x : iterates(ledger)) CHECK(x == set.center());
    CHECK(ledger.regret(zero, set.center()) == 0.0);
  }

  const auto losses = generate_ce_instance(200, 0.9, 2, n);
  const BanditConfig cfg{0.05, n, AdaNormRate{0.5}, 9};
  const auto a = bgd_run(losses, set, cfg), b = bgd_run(losses, set, cfg);
  CHECK(iterates(a) == iterates(b));
  BanditConfig other = cfg;
  other.seed = 10;
  CHECK(iterates(bgd_run(losses, set, other)) != iterates(a));
  for (const auto& x : iterates(a)) CHECK(set.contains(x, 1e-12));

  const auto small = ConstraintSet::ball(4, 1.0);
  CHECK_THROWS_AS(BanditConfig({0.1, 4, ConstantRate{0.01}, 0}).validate(1.0), std::invalid_argument);
  CHECK_THROWS_AS(BanditConfig({0.0, n, ConstantRate{0.01}, 0}).validate(1.0), std::invalid_argument);
  CHECK_THROWS_AS(BanditConfig({0.1, n, ConstantRate{1.0 / 32}, 0}).validate(1.0), std::invalid_argument);
  CHECK_NOTHROW(BanditConfig({0.1, n, ConstantRate{0.9 / 32}, 0}).validate(1.0));
  CHECK_THROWS_AS(BanditConfig({0.1, n, AdaNormRate{0.0}, 0}).validate(1.0), std::invalid_argument);
  CHECK_THROWS_AS(bgd_run(generate_ce_instance(5, 0.9, 1, 4), small, BanditConfig{0.1, 4, AdaNormRate{1.0}, 0}),
                  std::invalid_argument);
}

TEST_CASE("bgd_run: mean regret below the tuned and adaptive bounds") {
  const int n = 8, T = 2000, seeds = 20;
  const auto set = ConstraintSet::ball(n, 1.0);
  const double D = set.diameter();
  const auto losses = generate_ce_instance(T, 0.9, 21, n);
  const auto hs = solve_hindsight(losses, set);
  const double mu = bandit_tuned_mu(D, n, T);
  const double L = common_smoothness(losses, set.inflated(mu));
  const double eta = bandit_tuned_step(L, D, hs.G_star, n);

  const double mu_ada = D / (n * std::sqrt(double(T)));
  const double L_ada = common_smoothness(losses, set.inflated(mu_ada));
  double tuned = 0, ada = 0;
  for (int s = 0; s < seeds; ++s) {
    tuned += bgd_run(losses, set, BanditConfig{mu, n, ConstantRate{eta}, std::uint64_t(s)}).regret(losses, hs.x_star) / seeds;
    ada += bgd_run(losses, set, BanditConfig{mu_ada, n, AdaNormRate{D / std::sqrt(2.0)}, std::uint64_t(s)})
               .regret(losses, hs.x_star) / seeds;
  }
  BoundInputs in;
  in.L = L, in.D = D, in.G = hs.G_star, in.n = n, in.T = T, in.eta = eta, in.mu = mu;
  CHECK(check_bound(BoundKind::BanditGeneral, tuned, in).pass);
  CHECK(check_bound(BoundKind::BanditTuned, tuned, in).pass);
  in.L = L_ada;
  CHECK(check_bound(BoundKind::BanditAdaNorm, ada, in).pass);
}

}  // TEST_SUITE
