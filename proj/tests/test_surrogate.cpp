#include "gstar/algorithms.hpp"
#include "gstar/bounds.hpp"
#include "gstar/harness.hpp"
#include "gstar/hindsight.hpp"
#include "gstar/surrogate.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace gstar;

TEST_SUITE("surrogate") {

TEST_CASE("prox and envelope: closed forms") {
  const auto big = ConstraintSet::ball(3, 10.0);
  CounterRng rng(1);
  for (double gamma : {0.5, 1.0, 4.0}) {
    const EnvelopeLoss e{LossFn(SquaredDistance{Vec::Zero(3)}), big, gamma};
    for (int i = 0; i < 20; ++i) {
      const Vec x = rng.normal_vec(3);
      CHECK((prox(e, x) - gamma * x / (1 + gamma)).norm() <= 1e-8);
      CHECK(envelope_value(e, x) == doctest::Approx(gamma / (2 * (1 + gamma)) * x.squaredNorm()).epsilon(1e-10));
    }
  }
  // Linear loss: prox(x) = Pi(x - g / gamma).
  const auto ball = ConstraintSet::ball(2, 1.0);
  const Vec g = make_vec({0.7, -1.2});
  for (double gamma : {0.3, 2.0}) {
    const EnvelopeLoss e{LossFn(Linear{g}), ball, gamma};
    for (int i = 0; i < 20; ++i) {
      const Vec x = 2.0 * rng.normal_vec(2);
      CHECK((prox(e, x) - ball.project(x - g / gamma)).norm() <= 1e-8);
    }
  }
}

TEST_CASE("envelope: large gamma recovers the base loss on the set") {
  const auto ball = ConstraintSet::ball(2, 1.0);
  const auto losses = generate_lp_instance(5, 0.1, 2).losses;
  CounterRng rng(3);
  for (const auto& f : losses) {
    const EnvelopeLoss e{f, ball, 1e6};
    for (int i = 0; i < 10; ++i) {
      const Vec x = testing::random_point(ball, rng);
      const double gap = f.value(x) - envelope_value(e, x);
      CHECK(gap >= -1e-12);
      CHECK(gap <= f.grad(x).squaredNorm() / (2 * 1e6) + 1e-12);
    }
  }
}

TEST_CASE("envelope gradient matches finite differences") {
  CounterRng rng(4);
  for (const auto& [f, set] : testing::every_variant(rng)) {
    const EnvelopeLoss e{f, set, 2.0, 1e-13};
    for (int i = 0; i < 10; ++i) {
      // Points inside and outside the set.
      const Vec x = set.center() + 0.8 * set.diameter() * rng.normal_vec(set.dim()) / std::sqrt(double(set.dim()));
      const Vec fd = testing::central_difference([&](const Vec& y) { return envelope_value(e, y); }, x);
      CHECK_MESSAGE((envelope_grad(e, x) - fd).norm() <= 1e-5 * std::max(1.0, fd.norm()), f.kind());
    }
  }
}

TEST_CASE("envelope: below the base, gamma-smooth, self-bounded") {
  CounterRng rng(5);
  for (const auto& [f, set] : testing::every_variant(rng)) {
    const double gamma = 1.5;
    const EnvelopeLoss e{f, set, gamma};
    // Per-loss minimum over the set.
    const auto hs = solve_hindsight(std::span<const LossFn>(&f, 1), set);
    const double fmin = f.value(hs.x_star);
    for (int i = 0; i < 50; ++i) {
      const Vec x = testing::random_point(set, rng);
      const Vec y = set.center() + set.diameter() * rng.normal_vec(set.dim());
      CHECK(envelope_value(e, x) <= f.value(x) + 1e-12);
      CHECK((envelope_grad(e, x) - envelope_grad(e, y)).norm() <= gamma * (x - y).norm() * (1 + 1e-8) + 1e-9);
      CHECK_MESSAGE(envelope_grad(e, x).squaredNorm() <= 2 * gamma * (f.value(x) - fmin) + 1e-8, f.kind());
    }
  }
}

TEST_CASE("constrained measures: G^X <= 2 gamma L^X") {
  const auto ball = ConstraintSet::ball(2, 1.0);
  CounterRng rng(6);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto losses = generate_lp_instance(30, 0.2, s).losses;
    for (double gamma : {0.1, 1.0, 10.0}) {
      const Vec x = testing::random_point(ball, rng);
      const auto m = constrained_measures(losses, ball, gamma, x);
      BoundInputs in;
      in.gamma = gamma, in.L_T = m.L_X;
      CHECK(check_bound(BoundKind::EnvelopeSelfBounded, m.G_X, in).pass);
      CHECK(m.L_X >= 0);
    }
  }
  CHECK_THROWS_AS(constrained_measures(generate_lp_instance(3, 0.1, 0).losses, ball, 1.0, make_vec({2.0, 0.0})),
                  std::invalid_argument);
}

TEST_CASE("boundary optimum: G^X vanishes where G_T does not") {
  // 1/2 (x - 2)^2 on [-1, 1]: the constrained minimizer 1 has gradient -1 every round.
  const auto iv = ConstraintSet::interval(-1, 1);
  const std::vector<LossFn> losses(25, LossFn(QuadraticResidual{1.0, 2.0}));
  const auto hs = solve_hindsight(losses, iv);
  CHECK(hs.x_star[0] == doctest::Approx(1.0));
  CHECK(hs.G_star == doctest::Approx(25.0));
  const auto m = constrained_measures(losses, iv, 1.0, hs.x_star);
  CHECK(m.G_X <= 1e-16);
  CHECK(m.L_X <= 1e-16);
}

TEST_CASE("OGD and AdaGrad-Norm on envelopes: regret within the gamma-smooth bounds") {
  const auto ball = ConstraintSet::ball(2, 1.0);
  const double D = ball.diameter();
  for (std::uint64_t s = 0; s < 4; ++s) {
    const auto losses = generate_lp_instance(150, 0.2, s).losses;
    const double gamma = common_smoothness(losses, ball);
    std::vector<EnvelopeLoss> env;
    for (const auto& f : losses) env.push_back(EnvelopeLoss{f, ball, gamma});
    const Vec x = solve_hindsight(losses, ball).x_star;
    const auto m = constrained_measures(losses, ball, gamma, x);

    auto regret = [&](Learner l) {
      double r = 0;
      for (const auto& e : env) {
        const Vec xt = l.play();
        r += envelope_value(e, xt) - envelope_value(e, x);
        l.observe(envelope_grad(e, xt));
      }
      return r;
    };
    BoundInputs in;
    in.L = gamma, in.D = D, in.G = m.G_X;
    CHECK(check_bound(BoundKind::OgdTuned, regret(Learner::ogd(ball, ball.center(), ogd_tuned_step(gamma, D, m.G_X))), in).pass);
    CHECK(check_bound(BoundKind::AdaGradNorm, regret(Learner::adagrad_norm(ball, ball.center(), D / std::sqrt(2.0))), in).pass);
  }
}

TEST_CASE("prox: iteration cap and argument errors") {
  const auto ball = ConstraintSet::ball(2, 1.0);
  const LossFn f(LpRegression{make_vec({1.0, 1.0}), 0.5, 4.0});
  CHECK_THROWS_AS(prox(EnvelopeLoss{f, ball, 1.0, 1e-14, 1}, make_vec({0.3, 0.3})), ProxNotConverged);
  CHECK_THROWS_AS(prox(EnvelopeLoss{f, ball, 0.0}, make_vec({0.3, 0.3})), std::invalid_argument);
  CHECK_THROWS_AS(prox(EnvelopeLoss{f, ball, 1.0}, make_vec({0.3})), std::invalid_argument);
}

}  // TEST_SUITE
