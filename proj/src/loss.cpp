#include "gstar/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gstar {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double softplus(double u) { return std::max(u, 0.0) + std::log1p(std::exp(-std::abs(u))); }

// 1 / (1 + exp(u)), stable for large |u|.
double logistic_tail(double u) {
  if (u >= 0) {
    const double e = std::exp(-u);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(u));
}

double scalar_arg(const Vec& x, const char* what) {
  require_same_dim(1, x.size(), what);
  return x[0];
}

void check_vec_param(const Vec& v, const char* what) { require_finite(v, what); }

}  // namespace

LossFn::LossFn(LpRegression f) : f_(std::move(f)) {
  const auto& g = std::get<LpRegression>(f_);
  check_vec_param(g.a, "LpRegression.a");
  if (!(g.p >= 2.0) || !std::isfinite(g.p)) throw std::invalid_argument("LpRegression requires p >= 2");
  if (!std::isfinite(g.b)) throw std::invalid_argument("LpRegression.b must be finite");
}

LossFn::LossFn(CrossEntropy f) : f_(std::move(f)) {
  const auto& g = std::get<CrossEntropy>(f_);
  check_vec_param(g.a, "CrossEntropy.a");
  if (g.y != 1.0 && g.y != -1.0) throw std::invalid_argument("CrossEntropy label must be +1 or -1");
}

LossFn::LossFn(Exponential f) : f_(std::move(f)) {
  check_vec_param(std::get<Exponential>(f_).a, "Exponential.a");
}

LossFn::LossFn(ScaledQuadratic f) : f_(f) {
  if (!std::isfinite(f.a)) throw std::invalid_argument("ScaledQuadratic.a must be finite");
}

LossFn::LossFn(QuadraticResidual f) : f_(f) {
  if (!std::isfinite(f.a) || !std::isfinite(f.b))
    throw std::invalid_argument("QuadraticResidual parameters must be finite");
}

LossFn::LossFn(Linear f) : f_(std::move(f)) { check_vec_param(std::get<Linear>(f_).g, "Linear.g"); }

LossFn::LossFn(SquaredDistance f) : f_(std::move(f)) {
  check_vec_param(std::get<SquaredDistance>(f_).center, "SquaredDistance.center");
}

Index LossFn::dim() const {
  return std::visit(Overloaded{
                        [](const LpRegression& f) { return f.a.size(); },
                        [](const CrossEntropy& f) { return f.a.size(); },
                        [](const Exponential& f) { return f.a.size(); },
                        [](const ScaledQuadratic&) { return Index{1}; },
                        [](const QuadraticResidual&) { return Index{1}; },
                        [](const Linear& f) { return f.g.size(); },
                        [](const SquaredDistance& f) { return f.center.size(); },
                    },
                    f_);
}

double LossFn::value(const Vec& x) const {
  require_same_dim(dim(), x.size(), "loss value");
  return std::visit(Overloaded{
                        [&](const LpRegression& f) {
                          const double r = f.a.dot(x) - f.b;
                          return std::pow(std::abs(r), f.p) / f.p;
                        },
                        [&](const CrossEntropy& f) { return softplus(-f.y * f.a.dot(x)); },
                        [&](const Exponential& f) { return std::exp(-f.a.dot(x)); },
                        [&](const ScaledQuadratic& f) {
                          const double u = f.a * scalar_arg(x, "ScaledQuadratic");
                          return 0.5 * u * u;
                        },
                        [&](const QuadraticResidual& f) {
                          const double u = f.a * scalar_arg(x, "QuadraticResidual") - f.b;
                          return 0.5 * u * u;
                        },
                        [&](const Linear& f) { return f.g.dot(x); },
                        [&](const SquaredDistance& f) { return 0.5 * (x - f.center).squaredNorm(); },
                    },
                    f_);
}

void LossFn::accumulate_grad(const Vec& x, double weight, Vec& out) const {
  require_same_dim(dim(), x.size(), "loss grad");
  require_same_dim(dim(), out.size(), "loss grad output");
  std::visit(Overloaded{
                 [&](const LpRegression& f) {
                   const double r = f.a.dot(x) - f.b;
                   const double s = f.p == 2.0 ? r : std::pow(std::abs(r), f.p - 2.0) * r;
                   out.noalias() += (weight * s) * f.a;
                 },
                 [&](const CrossEntropy& f) {
                   out.noalias() += (-weight * f.y * logistic_tail(f.y * f.a.dot(x))) * f.a;
                 },
                 [&](const Exponential& f) { out.noalias() += (-weight * std::exp(-f.a.dot(x))) * f.a; },
                 [&](const ScaledQuadratic& f) { out[0] += weight * f.a * f.a * x[0]; },
                 [&](const QuadraticResidual& f) { out[0] += weight * f.a * (f.a * x[0] - f.b); },
                 [&](const Linear& f) { out.noalias() += weight * f.g; },
                 [&](const SquaredDistance& f) { out.noalias() += weight * (x - f.center); },
             },
             f_);
}

Vec LossFn::grad(const Vec& x) const {
  Vec g = Vec::Zero(dim());
  accumulate_grad(x, 1.0, g);
  return g;
}

double LossFn::smoothness(const ConstraintSet& set) const {
  require_same_dim(dim(), set.dim(), "smoothness");
  return std::visit(Overloaded{
                        [&](const LpRegression& f) {
                          const double a2 = f.a.squaredNorm();
                          if (f.p == 2.0) return a2;
                          const auto [lo, hi] = set.linear_range(f.a);
                          const double rmax = std::max(std::abs(lo - f.b), std::abs(hi - f.b));
                          return (f.p - 1.0) * std::pow(rmax, f.p - 2.0) * a2;
                        },
                        [&](const CrossEntropy& f) { return 0.25 * f.a.squaredNorm(); },
                        [&](const Exponential& f) {
                          const auto [lo, hi] = set.linear_range(f.a);
                          return std::exp(-lo) * f.a.squaredNorm();
                        },
                        [](const ScaledQuadratic& f) { return f.a * f.a; },
                        [](const QuadraticResidual& f) { return f.a * f.a; },
                        [](const Linear&) { return 0.0; },
                        [](const SquaredDistance&) { return 1.0; },
                    },
                    f_);
}

std::optional<double> LossFn::infimum() const {
  return std::visit(Overloaded{
                        [](const LpRegression& f) -> std::optional<double> {
                          if (f.a.squaredNorm() > 0) return 0.0;
                          return std::pow(std::abs(f.b), f.p) / f.p;
                        },
                        [](const CrossEntropy& f) -> std::optional<double> {
                          return f.a.squaredNorm() > 0 ? 0.0 : std::log(2.0);
                        },
                        [](const Exponential& f) -> std::optional<double> {
                          return f.a.squaredNorm() > 0 ? 0.0 : 1.0;
                        },
                        [](const ScaledQuadratic&) -> std::optional<double> { return 0.0; },
                        [](const QuadraticResidual& f) -> std::optional<double> {
                          return f.a != 0.0 ? 0.0 : 0.5 * f.b * f.b;
                        },
                        [](const Linear&) -> std::optional<double> { return std::nullopt; },
                        [](const SquaredDistance&) -> std::optional<double> { return 0.0; },
                    },
                    f_);
}

double LossFn::minimum_over(const ConstraintSet& set) const {
  require_same_dim(set.dim(), dim(), "minimum_over");
  // Every variant but SquaredDistance is a convex function of one linear form <a, x>,
  // so its minimum over the set is a 1-D minimum over linear_range(a).
  auto clamp = [&](const Vec& a, double target) {
    const auto [lo, hi] = set.linear_range(a);
    return std::clamp(target, lo, hi);
  };
  return std::visit(Overloaded{
                        [&](const LpRegression& f) {
                          return std::pow(std::abs(clamp(f.a, f.b) - f.b), f.p) / f.p;
                        },
                        [&](const CrossEntropy& f) {
                          const auto [lo, hi] = set.linear_range(f.a);
                          return std::log1p(std::exp(-f.y * (f.y > 0 ? hi : lo)));
                        },
                        [&](const Exponential& f) { return std::exp(-set.linear_range(f.a).second); },
                        [&](const ScaledQuadratic& f) {
                          const double u = clamp(Vec::Constant(1, f.a), 0.0);
                          return 0.5 * u * u;
                        },
                        [&](const QuadraticResidual& f) {
                          const double r = clamp(Vec::Constant(1, f.a), f.b) - f.b;
                          return 0.5 * r * r;
                        },
                        [&](const Linear& f) { return set.linear_range(f.g).first; },
                        [&](const SquaredDistance& f) {
                          const double d = set.distance(f.center);
                          return 0.5 * d * d;
                        },
                    },
                    f_);
}

std::string LossFn::kind() const {
  return std::visit(Overloaded{
                        [](const LpRegression&) { return std::string("lp_regression"); },
                        [](const CrossEntropy&) { return std::string("cross_entropy"); },
                        [](const Exponential&) { return std::string("exponential"); },
                        [](const ScaledQuadratic&) { return std::string("scaled_quadratic"); },
                        [](const QuadraticResidual&) { return std::string("quadratic_residual"); },
                        [](const Linear&) { return std::string("linear"); },
                        [](const SquaredDistance&) { return std::string("squared_distance"); },
                    },
                    f_);
}

double loss_value(const LossFn& f, const Vec& x) { return f.value(x); }
Vec loss_grad(const LossFn& f, const Vec& x) { return f.grad(x); }
double smoothness_constant(const LossFn& f, const ConstraintSet& set) { return f.smoothness(set); }

double common_smoothness(std::span<const LossFn> losses, const ConstraintSet& set) {
  double L = 0.0;
  for (const auto& f : losses) L = std::max(L, f.smoothness(set));
  return L;
}

double cumulative_loss(std::span<const LossFn> losses, const Vec& x) {
  double s = 0.0;
  for (const auto& f : losses) s += f.value(x);
  return s;
}

}  // namespace gstar
