#include "gstar/surrogate.hpp"

#include <string>

namespace gstar {

namespace {

void check(const EnvelopeLoss& e, const Vec& x) {
  if (!(e.gamma > 0)) throw std::invalid_argument("envelope: gamma must be positive");
  if (!(e.prox_tol > 0)) throw std::invalid_argument("envelope: prox_tol must be positive");
  require_same_dim(e.set.dim(), x.size(), "envelope");
  require_same_dim(e.set.dim(), e.base.dim(), "envelope base loss");
}

}  // namespace

Vec prox(const EnvelopeLoss& e, const Vec& x) {
  check(e, x);
  const double step = 1.0 / (e.base.smoothness(e.set) + e.gamma);
  Vec y = e.set.project(x);
  Vec g(x.size());
  for (long it = 0; it < e.max_iterations; ++it) {
    g = e.base.grad(y);
    g.noalias() += e.gamma * (y - x);
    Vec next = e.set.project(y - step * g);
    const double moved = (next - y).norm();
    y = std::move(next);
    if (moved <= e.prox_tol) return y;
  }
  throw ProxNotConverged("prox: no convergence within " + std::to_string(e.max_iterations) + " iterations");
}

double envelope_value(const EnvelopeLoss& e, const Vec& x) {
  const Vec p = prox(e, x);
  return e.base.value(p) + 0.5 * e.gamma * (p - x).squaredNorm();
}

Vec envelope_grad(const EnvelopeLoss& e, const Vec& x) { return e.gamma * (x - prox(e, x)); }

ConstrainedMeasures constrained_measures(std::span<const LossFn> losses, const ConstraintSet& set, double gamma,
                                         const Vec& x) {
  if (!set.contains(x, 1e-9)) throw std::invalid_argument("constrained_measures: x must be feasible");
  ConstrainedMeasures m{0.0, 0.0};
  for (const auto& f : losses) {
    m.L_X += f.value(x) - f.minimum_over(set);
    m.G_X += envelope_grad(EnvelopeLoss{f, set, gamma}, x).squaredNorm();
  }
  return m;
}

}  // namespace gstar
