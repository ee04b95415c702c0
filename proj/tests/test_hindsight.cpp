#include "gstar/harness.hpp"
#include "gstar/hindsight.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace gstar;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += std::log(x[i]) / x.size(), my += std::log(y[i]) / y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

}  // namespace

TEST_SUITE("hindsight") {

TEST_CASE("solve_hindsight: Case 3 at T = 7 matches the closed forms") {
  const auto set = ConstraintSet::interval(-1, 1);
  const auto losses = prop1_case3(7);
  const auto rep = solve_hindsight(losses, set);
  // Independent oracle: the closed-form minimizer of a 1-D quadratic sum_t (a_t x - 1)^2 / 2.
  double sa = 0, sa2 = 0;
  for (int t = 1; t <= 7; ++t) {
    const double a = 0.5 - (t - 1) / 7.0;
    sa += a, sa2 += a * a;
  }
  const double xs = sa / sa2;
  double Ls = 0, Gs = 0;
  for (int t = 1; t <= 7; ++t) {
    const double a = 0.5 - (t - 1) / 7.0, r = a * xs - 1;
    Ls += 0.5 * r * r, Gs += a * a * r * r;
  }
  CHECK(rep.converged);
  CHECK(rel(xs, 14.0 / 17.0) <= 1e-14);
  CHECK(rel(rep.x_star[0], 14.0 / 17.0) <= 1e-8);
  CHECK(rel(*rep.L_star, 56.0 / 17.0) <= 1e-8);
  CHECK(rel(rep.G_star, 511920.0 / 1092420.0) <= 1e-8);
  CHECK(rel(rep.G_star, Gs) <= 1e-8);
  CHECK(rel(*rep.L_star, Ls) <= 1e-8);
  const auto cf = prop1_case3_closed_form(7);
  CHECK(rel(cf.G_star, Gs) <= 1e-12);
  CHECK(rep.G_star == doctest::Approx(0.46861).epsilon(1e-5));
}

TEST_CASE("solve_hindsight: Case 4 and a boundary minimizer") {
  const auto set = ConstraintSet::interval(-1, 1);
  const auto rep = solve_hindsight(prop1_case4(20), set);
  CHECK(rep.x_star[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(*rep.L_star) <= 1e-10);
  CHECK(std::abs(rep.G_star) <= 1e-10);

  const std::vector<LossFn> lin{LossFn(Linear{make_vec({1.0})})};
  const auto r2 = solve_hindsight(lin, set);
  CHECK(r2.x_star[0] == -1.0);
  CHECK_FALSE(r2.L_star.has_value());
  CHECK(r2.G_star == 1.0);
  CHECK_THROWS_AS(solve_hindsight(std::vector<LossFn>{}, set), std::invalid_argument);
}

TEST_CASE("solve_hindsight: non-convergence is reported") {
  const auto set = ConstraintSet::ball(2, 1.0);
  const auto losses = generate_lp_instance(100, 0.1, 3).losses;
  const auto rep = solve_hindsight(losses, set, HindsightOptions{1e-10, 1});
  CHECK_FALSE(rep.converged);
  CHECK(rep.solver_residual > 1e-10);
}

TEST_CASE("brute force agrees with the solver") {
  SUBCASE("Case 3, 10^5 grid points") {
    const auto set = ConstraintSet::interval(-1, 1);
    const auto losses = prop1_case3(7);
    const auto bf = brute_force_hindsight(losses, set, 100001, 0);
    const auto sv = solve_hindsight(losses, set);
    CHECK(std::abs(bf.x_star[0] - sv.x_star[0]) <= 2 * bf.solver_residual);
    CHECK(rel(*bf.L_star, *sv.L_star) <= 1e-4);
    CHECK(rel(bf.G_star, sv.G_star) <= 1e-4);
  }
  SUBCASE("2-D fixtures") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto set = seed % 2 ? ConstraintSet::ball(2, 0.3) : ConstraintSet::box(make_vec({-0.2, 0.1}), make_vec({0.4, 0.5}));
      const auto losses = seed < 2 ? generate_lp_instance(50, 0.2, seed).losses : generate_ce_instance(50, 0.9, seed);
      const auto bf = brute_force_hindsight(losses, set, 201, 5);
      const auto sv = solve_hindsight(losses, set);
      // Two grid cells plus the solver's own stopping accuracy.
      CHECK((bf.x_star - sv.x_star).norm() <= 2 * std::sqrt(2.0) * bf.solver_residual + 1e-8);
      CHECK(rel(*bf.L_star, *sv.L_star) <= 1e-4);
      CHECK(rel(bf.G_star, sv.G_star) <= 1e-4);
    }
  }
  SUBCASE("constant losses: zero objective spread") {
    const auto set = ConstraintSet::ball(2, 1.0);
    const std::vector<LossFn> zero{LossFn(Linear{Vec::Zero(2)}), LossFn(Linear{Vec::Zero(2)})};
    const auto bf = brute_force_hindsight(zero, set, 11);
    CHECK(set.contains(bf.x_star));
    CounterRng rng(1);
    for (int i = 0; i < 20; ++i) CHECK(cumulative_loss(zero, testing::random_point(set, rng)) == cumulative_loss(zero, bf.x_star));
  }
  SUBCASE("Case 4: exact on a grid containing 1") {
    const auto bf = brute_force_hindsight(prop1_case4(10), ConstraintSet::interval(-1, 1), 11);
    CHECK(bf.x_star[0] == 1.0);
    CHECK(*bf.L_star == 0.0);
    CHECK(bf.G_star == 0.0);
  }
  CHECK_THROWS_AS(brute_force_hindsight(prop1_case3(7), ConstraintSet::ball(3, 1.0), 10), std::invalid_argument);
}

TEST_CASE("G* <= 2 L L* on fixtures") {
  const auto iv = ConstraintSet::interval(-1, 1);
  for (int T : {7, 9, 51}) {
    const auto losses = prop1_case3(T);
    const auto r = solve_hindsight(losses, iv);
    CHECK(r.G_star <= 2 * common_smoothness(losses, iv) * *r.L_star);
  }
  const auto losses = prop1_case3(7);
  CHECK(common_smoothness(losses, iv) == 0.25);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto set = ConstraintSet::ball(2, 1.0);
    for (const auto& fs : {generate_lp_instance(200, 0.1, s).losses, generate_ce_instance(200, 0.95, s)}) {
      const auto r = solve_hindsight(fs, set);
      CHECK(r.G_star <= 2 * common_smoothness(fs, set) * *r.L_star);
    }
  }
}

TEST_CASE("gradient_variation_1d") {
  const auto iv = ConstraintSet::interval(-1, 1);
  for (int T : {7, 21, 101}) CHECK(gradient_variation_1d(prop1_case3(T), iv) <= 4.0 / T);
  const std::vector<LossFn> same(5, LossFn(QuadraticResidual{0.7, 0.2}));
  CHECK(gradient_variation_1d(same, iv) == 0.0);
  for (int T : {10, 100, 1000}) {
    const double v = gradient_variation_1d(prop1_case4(T), iv, 1001);
    CHECK(v / T >= 2.0);
    CHECK(v / T <= 2.25);
  }
  CHECK_THROWS_AS(gradient_variation_1d(same, ConstraintSet::ball(2, 1.0)), std::invalid_argument);
}

TEST_CASE("Example 4 scaling: slopes 2/3 and 1/3") {
  const auto set = ConstraintSet::interval(1, 2);
  std::vector<double> Ts, Ls, Gs;
  for (double e : {2.0, 2.5, 3.0, 3.5, 4.0}) {
    const int T = static_cast<int>(std::lround(std::pow(10.0, e)));
    const auto r = solve_hindsight(prop1_case2(T), set);
    CHECK(r.x_star[0] == 1.0);
    Ts.push_back(T), Ls.push_back(*r.L_star), Gs.push_back(r.G_star);
  }
  CHECK(std::abs(loglog_slope(Ts, Ls) - 2.0 / 3.0) <= 0.05);
  CHECK(std::abs(loglog_slope(Ts, Gs) - 1.0 / 3.0) <= 0.05);
}

TEST_CASE("regret ledger: recompute, regret, dynamic regret") {
  const auto set = ConstraintSet::ball(2, 1.0);
  const auto losses = generate_lp_instance(300, 0.2, 5).losses;
  auto learner = Learner::adagrad_norm(set, set.center(), 1.0);
  const auto iterates = play_online(losses, learner);
  const auto ledger = RegretLedger::record(losses, iterates);
  CHECK(ledger.horizon() == 300);
  CHECK(ledger.verify(losses));

  double lsum = 0, gsum = 0;
  for (std::size_t t = 0; t < losses.size(); ++t) {
    lsum += losses[t].value(iterates[t]);
    gsum += losses[t].grad(iterates[t]).squaredNorm();
  }
  CHECK(rel(ledger.cumulative_loss(), lsum) <= 1e-9);
  CHECK(rel(ledger.cumulative_grad_norm_sq(), gsum) <= 1e-9);
  const Vec x = make_vec({0.1, -0.2});
  CHECK(rel(ledger.regret(losses, x), lsum - cumulative_loss(losses, x)) <= 1e-9);

  // Tampered losses fail verification.
  auto other = losses;
  other[3] = LossFn(Linear{make_vec({1.0, 1.0})});
  CHECK_FALSE(ledger.verify(other));

  const auto path = piecewise_comparator(losses, set, 5);
  double expect_len = 0;
  for (std::size_t t = 1; t < path.points.size(); ++t) expect_len += (path.points[t] - path.points[t - 1]).norm();
  CHECK(rel(path.path_length, expect_len) <= 1e-12);
  double dyn = lsum;
  for (std::size_t t = 0; t < losses.size(); ++t) dyn -= losses[t].value(path.points[t]);
  CHECK(rel(ledger.dynamic_regret(losses, path), dyn) <= 1e-9);
  const auto m = dynamic_measures(losses, path);
  CHECK(m.path_length == path.path_length);
  CHECK(m.L_hat.has_value());
  CHECK(m.G_hat >= 0);

  // Static path: the dynamic quantities collapse to the static ones.
  const auto hs = solve_hindsight(losses, set);
  const auto flat = make_comparator_path(std::vector<Vec>(losses.size(), hs.x_star), set);
  CHECK(flat.path_length == 0.0);
  CHECK(rel(dynamic_measures(losses, flat).G_hat, hs.G_star) <= 1e-12);

  CHECK_THROWS_AS(make_comparator_path({make_vec({2.0, 0.0})}, set), std::invalid_argument);
  CHECK_THROWS_AS(RegretLedger::record(losses, {}), std::invalid_argument);
}

}  // TEST_SUITE
