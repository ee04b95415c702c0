#include "gstar/algorithms.hpp"
#include "gstar/bounds.hpp"
#include "gstar/harness.hpp"
#include "gstar/hindsight.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace gstar;

TEST_SUITE("bounds") {

TEST_CASE("plug-in examples") {
  BoundInputs in;
  in.L = 1.0, in.D = 2.0, in.G = 0.0;
  CHECK(bound_value(BoundKind::OgdTuned, in) == 8.0);
  in.G = 2.0;
  CHECK(bound_value(BoundKind::AdaGradNorm, in) == doctest::Approx(8.0).epsilon(1e-15));
  // sqrt(2 * 50) * 2 = 20 > 8.
  in.G = 50.0;
  CHECK(bound_value(BoundKind::OgdTuned, in) == doctest::Approx(20.0));
  in.G = 16.0;
  CHECK(bound_value(BoundKind::LowerBound, in) == 2.0);

  // Case 3 at T = 7: G* = 0.46861 <= 2 * (1/4) * 56/17.
  BoundInputs c3;
  c3.L = 0.25, c3.L_T = 56.0 / 17.0;
  const auto chk = check_bound(BoundKind::SelfBounded, 0.46861, c3);
  CHECK(chk.pass);
  CHECK(chk.bound == doctest::Approx(1.6470588235294117));

  BoundInputs sw;
  sw.L = 1.0, sw.D = 1.0, sw.path_length = 0.0, sw.G_hat = 4.0, sw.N = 1;
  CHECK(bound_value(BoundKind::Sword, sw) == doctest::Approx(8 * std::sqrt(3.0) * 2 + 24));
}

TEST_CASE("missing constants raise; audit lists them") {
  BoundInputs in;
  in.D = 1.0;
  CHECK_THROWS_AS(bound_value(BoundKind::AdaGradNorm, in), MissingConstant);
  CHECK_THROWS_AS(bound_value(BoundKind::Sword, in), MissingConstant);
  in.G = 1.0, in.L = 1.0;
  const BoundKind kinds[] = {BoundKind::AdaGradNorm, BoundKind::AdaFtrl, BoundKind::OgdTuned, BoundKind::BanditTuned};
  const auto audit = audit_bounds(kinds, 0.5, in);
  CHECK(audit.checks.size() == 2);
  CHECK(audit.all_pass());
  CHECK(audit.not_applicable == std::vector<std::string>{"adaftrl", "bandit_tuned"});
  in.eta = 2.0;
  CHECK_THROWS_AS(bound_value(BoundKind::OgdGeneral, in), std::invalid_argument);
  CHECK_FALSE(check_bound(BoundKind::LowerBound, 0.1, in).pass);
  CHECK(check_bound(BoundKind::LowerBound, 0.25, in).pass);
}

TEST_CASE("explicit forms") {
  CHECK(ogd_tuned_step(1.0, 2.0, 0.0) == 0.5);
  CHECK(ogd_tuned_step(0.0, 2.0, 16.0) == 0.5);
  CHECK_THROWS_AS(ogd_tuned_step(0.0, 1.0, 0.0), std::invalid_argument);
  CHECK(bandit_tuned_mu(2.0, 8, 100) == doctest::Approx(2.0 / 40.0));
  CHECK_THROWS_AS(bandit_general_bound(1.0, 0.1, 1.0, 1.0, 1.0, 8, 10), std::invalid_argument);

  // D_hat reduces to |x1-x*|^2 + alpha g1/L + 2 alpha^2 log(alpha L / (sqrt(e) g1)) when alpha L >= g1 ...
  for (double g1 : {0.01, 0.1, 0.5, 1.0}) {
    const double a = 1.0, L = 1.0, x = 0.3;
    const double ref = x + a * g1 / L + 2 * a * a * std::log(a * L / (std::sqrt(std::exp(1.0)) * g1));
    CHECK(interpolation_dhat(x, a, L, g1) == doctest::Approx(ref).epsilon(1e-12));
  }
  // ... and never drops below |x1-x*|^2 for the alpha L < g1 regime.
  for (double g1 : {1.5, 3.0, 10.0}) CHECK(interpolation_dhat(0.3, 1.0, 1.0, g1) >= 0.3 - 1e-15);
  BoundInputs in;
  in.L = 1.0, in.alpha = 1.0, in.T = 10, in.x1_dist_sq = 1.0, in.g1_norm = 0.0;
  CHECK(std::isinf(bound_value(BoundKind::Interpolation, in)));
}

TEST_CASE("regret of full-information learners stays under its bound") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto set = seed % 3 == 0 ? ConstraintSet::ball(2, 0.5) : ConstraintSet::ball(2, 1.0);
    const auto losses = seed % 2 ? generate_lp_instance(400, 0.1, seed).losses : generate_ce_instance(400, 0.9, seed);
    const double L = common_smoothness(losses, set), D = set.diameter();
    const auto hs = solve_hindsight(losses, set);
    BoundInputs in;
    in.L = L, in.D = D, in.G = hs.G_star, in.L_T = hs.L_star;

    auto regret = [&](Learner l) {
      const auto it = play_online(losses, l);
      return RegretLedger::record(losses, it).regret(losses, hs.x_star);
    };
    CHECK(check_bound(BoundKind::OgdTuned, regret(Learner::ogd(set, set.center(), ogd_tuned_step(L, D, hs.G_star))), in).pass);
    CHECK(check_bound(BoundKind::AdaGradNorm, regret(Learner::adagrad_norm(set, set.center(), D / std::sqrt(2.0))), in).pass);
    const double lambda = 1.0 / (2 * D * D);
    in.R = 0.5 * lambda * (D / 2) * (D / 2) + 1.0;
    CHECK(check_bound(BoundKind::AdaFtrl, regret(Learner::adaftrl(set, lambda)), in).pass);
    in.eta = 0.5 / L;
    CHECK(check_bound(BoundKind::OgdGeneral, regret(Learner::ogd(set, set.center(), 0.5 / L)), in).pass);
    in.eta = 1.5 / L, in.x1_dist_sq = (set.center() - hs.x_star).squaredNorm();
    CHECK(check_bound(BoundKind::OgdLargeStep, regret(Learner::ogd(set, set.center(), 1.5 / L)), in).pass);
    CHECK(check_bound(BoundKind::SelfBounded, hs.G_star, in).pass);
  }
}

}  // TEST_SUITE
