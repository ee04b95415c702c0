#ifndef GSTAR_TESTS_TEST_UTIL_HPP_
#define GSTAR_TESTS_TEST_UTIL_HPP_

#include "gstar/constraint_set.hpp"
#include "gstar/loss.hpp"
#include "gstar/rng.hpp"

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace gstar::testing {

/// Uniform point in a ball or box.
inline Vec random_point(const ConstraintSet& set, CounterRng& rng) {
  if (const Ball* b = set.as_ball()) {
    const Index n = b->center.size();
    Vec d = rng.normal_vec(n).normalized();
    const double r = b->radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(n));
    return set.project(b->center + r * d);
  }
  const Box* b = set.as_box();
  Vec x(b->lower.size());
  for (Index i = 0; i < x.size(); ++i) x[i] = b->lower[i] + (b->upper[i] - b->lower[i]) * rng.uniform();
  return x;
}

inline Vec central_difference(const std::function<double(const Vec&)>& f, const Vec& x, double h = 1e-6) {
  Vec g(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    Vec p = x, m = x;
    p[i] += h;
    m[i] -= h;
    g[i] = (f(p) - f(m)) / (2 * h);
  }
  return g;
}

inline Vec central_difference(const LossFn& f, const Vec& x, double h = 1e-6) {
  return central_difference([&](const Vec& y) { return f.value(y); }, x, h);
}

struct Fixture {
  LossFn f;
  ConstraintSet set;
};

/// One instance of every loss variant on a set it is meant for.
inline std::vector<Fixture> every_variant(CounterRng& rng) {
  const auto ball = ConstraintSet::ball(3, 1.0);
  const auto interval = ConstraintSet::interval(-1.0, 2.0);
  std::vector<Fixture> out;
  out.push_back({LossFn(LpRegression{rng.normal_vec(3), rng.normal(), 2.0}), ball});
  out.push_back({LossFn(LpRegression{rng.normal_vec(3), rng.normal(), 4.0}), ball});
  out.push_back({LossFn(LpRegression{rng.normal_vec(3), rng.normal(), 3.0}), ball});
  out.push_back({LossFn(CrossEntropy{rng.normal_vec(3), 1.0}), ball});
  out.push_back({LossFn(CrossEntropy{rng.normal_vec(3), -1.0}), ball});
  out.push_back({LossFn(Exponential{rng.normal_vec(3)}), ball});
  out.push_back({LossFn(ScaledQuadratic{rng.normal()}), interval});
  out.push_back({LossFn(QuadraticResidual{rng.normal(), rng.normal()}), interval});
  out.push_back({LossFn(Linear{rng.normal_vec(3)}), ball});
  out.push_back({LossFn(SquaredDistance{rng.normal_vec(3)}), ball});
  return out;
}

inline double rel_err(const Vec& got, const Vec& want) {
  return (got - want).norm() / std::max(want.norm(), 1.0);
}

}  // namespace gstar::testing

#endif  // GSTAR_TESTS_TEST_UTIL_HPP_
