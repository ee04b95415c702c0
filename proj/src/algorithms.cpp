#include "gstar/algorithms.hpp"

#include "gstar/rng.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace gstar {

OgdState ogd_step(const OgdState& state, const Vec& grad, const ConstraintSet& set) {
  if (!(state.eta > 0)) throw std::invalid_argument("ogd_step: eta must be positive");
  require_same_dim(state.x.size(), grad.size(), "ogd_step");
  return OgdState{set.project(state.x - state.eta * grad), state.eta};
}

namespace {

template <class Project>
AdaGradNormState adagrad_update(const AdaGradNormState& state, const Vec& grad, Project&& proj) {
  if (!(state.alpha > 0)) throw std::invalid_argument("adagrad_norm_step: alpha must be positive");
  require_same_dim(state.x.size(), grad.size(), "adagrad_norm_step");
  const double g2 = grad.squaredNorm();
  if (g2 == 0.0) return state;
  AdaGradNormState next = state;
  next.sum_sq = state.sum_sq + g2;
  next.last_eta = state.alpha / std::sqrt(next.sum_sq);
  next.x = proj(state.x - next.last_eta * grad);
  return next;
}

}  // namespace

AdaGradNormState adagrad_norm_step(const AdaGradNormState& state, const Vec& grad,
                                   const ConstraintSet& set) {
  return adagrad_update(state, grad, [&](const Vec& y) { return set.project(y); });
}

AdaGradNormState adagrad_norm_step_unconstrained(const AdaGradNormState& state, const Vec& grad) {
  return adagrad_update(state, grad, [](const Vec& y) { return y; });
}

// ---------------------------------------------------------------------------

double BallQuadraticConjugate::value(const Vec& theta) const {
  const double n = theta.norm();
  if (n <= lambda * radius) return theta.squaredNorm() / (2.0 * lambda);
  return radius * n - 0.5 * lambda * radius * radius;
}

Vec BallQuadraticConjugate::grad(const Vec& theta) const {
  const double n = theta.norm();
  if (n <= lambda * radius) return theta / lambda;
  return (radius / n) * theta;
}

double BallQuadraticConjugate::bregman(const Vec& x, const Vec& y) const {
  return value(x) - value(y) - grad(y).dot(x - y);
}

double BallQuadraticConjugate::scaled_bregman(double a, const Vec& l_new, const Vec& l_old) const {
  return a * bregman(-l_new / a, -l_old / a);
}

double BallQuadraticConjugate::scaled_bregman_limit(const Vec& l_new, const Vec& l_old) const {
  const double n_new = l_new.norm();
  const double n_old = l_old.norm();
  if (n_old == 0.0) return radius * n_new;
  return radius * (n_new - l_old.dot(l_new) / n_old);
}

namespace {

const Ball& centered_ball(const ConstraintSet& set) {
  const Ball* b = set.as_ball();
  if (b == nullptr) throw std::invalid_argument("AdaFTRL requires a Ball constraint set");
  if (b->center.squaredNorm() != 0.0) throw std::invalid_argument("AdaFTRL requires a ball centered at the origin");
  return *b;
}

Vec ftrl_argmin(const Vec& cum_grad, double delta, double lambda, double radius) {
  const double n = cum_grad.norm();
  if (n == 0.0) return Vec::Zero(cum_grad.size());
  const double scale = delta > 0 ? std::min(n / (delta * lambda), radius) : radius;
  return (-scale / n) * cum_grad;
}

}  // namespace

AdaFtrlState make_adaftrl(const ConstraintSet& ball, double lambda) {
  const Ball& b = centered_ball(ball);
  const double D = ball.diameter();
  if (!(lambda >= 1.0 / (2.0 * D * D)))
    throw std::invalid_argument("AdaFTRL: lambda must be at least 1 / (2 D^2)");
  const Index n = b.center.size();
  return AdaFtrlState{Vec::Zero(n), 0.0, lambda, ball, Vec::Zero(n)};
}

AdaFtrlState make_adaftrl(const ConstraintSet& ball) {
  const double D = ball.diameter();
  return make_adaftrl(ball, 1.0 / (2.0 * D * D));
}

AdaFtrlState adaftrl_step(const AdaFtrlState& state, const Vec& grad) {
  const Ball& b = centered_ball(state.ball);
  require_same_dim(state.cum_grad.size(), grad.size(), "adaftrl_step");
  const BallQuadraticConjugate h{state.lambda, b.radius};

  AdaFtrlState next = state;
  next.cum_grad = state.cum_grad + grad;
  const double increment = state.delta > 0 ? h.scaled_bregman(state.delta, next.cum_grad, state.cum_grad)
                                           : h.scaled_bregman_limit(next.cum_grad, state.cum_grad);
  // V_h >= 0 by convexity; clamp the round-off.
  next.delta = state.delta + std::max(0.0, increment);
  next.x = ftrl_argmin(next.cum_grad, next.delta, state.lambda, b.radius);
  return next;
}

double adaftrl_regularizer_range(const AdaFtrlState& state) {
  const Ball& b = centered_ball(state.ball);
  return 0.5 * state.lambda * b.radius * b.radius + 1.0;
}

// ---------------------------------------------------------------------------

void SwordConfig::validate() const {
  if (horizon < 1) throw std::invalid_argument("SwordConfig: horizon must be >= 1");
  if (!(grad_bound > 0)) throw std::invalid_argument("SwordConfig: grad_bound must be positive");
  if (!(smoothness > 0)) throw std::invalid_argument("SwordConfig: smoothness must be positive");
  if (!(diameter > 0)) throw std::invalid_argument("SwordConfig: diameter must be positive");
  if (const auto* f = std::get_if<FixedDelta>(&delta_mode); f && !(f->delta >= 0))
    throw std::invalid_argument("SwordConfig: fixed delta must be non-negative");
}

double SwordConfig::eta_min() const { return diameter / grad_bound * std::sqrt(1.0 / (2.0 * horizon)); }

int SwordConfig::grid_size() const {
  const double ratio = grad_bound * std::sqrt(2.0 * horizon) / (smoothness * diameter);
  const double n = std::ceil(std::log(ratio) / std::log(2.0));
  return n < 1 ? 1 : static_cast<int>(n);
}

std::vector<double> SwordConfig::step_sizes() const {
  const int N = grid_size();
  const double cap = 1.0 / (4.0 * smoothness);
  std::vector<double> etas(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) etas[static_cast<std::size_t>(i)] = std::min(std::ldexp(eta_min(), i), cap);
  return etas;
}

int SwordConfig::clipped_count() const {
  const double cap = 1.0 / (4.0 * smoothness);
  int c = 0;
  for (int i = 0; i < grid_size(); ++i)
    if (std::ldexp(eta_min(), i) > cap) ++c;
  return c;
}

double sword_delta(const SwordConfig& cfg, int grid_size, double grad_sq_sum) {
  if (const auto* f = std::get_if<FixedDelta>(&cfg.delta_mode)) return f->delta;
  if (grad_sq_sum <= 0.0) return 0.0;
  return std::sqrt((2.0 + std::log(static_cast<double>(grid_size))) /
                   (cfg.diameter * cfg.diameter * grad_sq_sum));
}

SwordState make_sword(const SwordConfig& cfg, const Vec& x1) {
  cfg.validate();
  const auto etas = cfg.step_sizes();
  const auto N = static_cast<Index>(etas.size());
  SwordState s;
  s.experts.reserve(etas.size());
  for (double eta : etas) s.experts.push_back(OgdState{x1, eta});
  s.weights = Vec::Constant(N, 1.0 / static_cast<double>(N));
  s.log_weights = s.weights.array().log();
  s.x = x1;
  return s;
}

SwordState sword_step(const SwordState& state, const SwordConfig& cfg, const Vec& grad_at_x,
                      const ConstraintSet& set) {
  require_same_dim(state.x.size(), grad_at_x.size(), "sword_step");
  const auto N = static_cast<Index>(state.experts.size());
  SwordState next = state;
  next.grad_sq_sum = state.grad_sq_sum + grad_at_x.squaredNorm();
  const double delta = sword_delta(cfg, static_cast<int>(N), next.grad_sq_sum);
  next.last_delta = delta;

  if (delta > 0.0 && grad_at_x.squaredNorm() > 0.0) {
    for (Index i = 0; i < N; ++i)
      next.log_weights[i] -= delta * grad_at_x.dot(state.experts[static_cast<std::size_t>(i)].x);
    const double top = next.log_weights.maxCoeff();
    // Floor keeps every weight strictly positive in double precision.
    next.weights = (next.log_weights.array() - top).max(-700.0).exp();
    next.weights /= next.weights.sum();
    next.log_weights = next.weights.array().log();
  }

  for (auto& e : next.experts) e = ogd_step(e, grad_at_x, set);

  next.x = Vec::Zero(state.x.size());
  for (Index i = 0; i < N; ++i) next.x.noalias() += next.weights[i] * next.experts[static_cast<std::size_t>(i)].x;
  // The convex combination of feasible points is feasible; absorb round-off.
  next.x = set.project(next.x);
  return next;
}

// ---------------------------------------------------------------------------

std::vector<LossFn> lower_bound_adversary(int T, double M, int dim, std::uint64_t seed) {
  if (!(M > 0)) throw std::invalid_argument("lower_bound_adversary: M must be positive");
  if (T < 1 || dim < 1) throw std::invalid_argument("lower_bound_adversary: T and dim must be >= 1");
  CounterRng rng(seed, 0x1b);
  std::vector<LossFn> losses;
  losses.reserve(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    Vec g = Vec::Zero(dim);
    g[0] = M * rng.rademacher();
    losses.emplace_back(Linear{std::move(g)});
  }
  return losses;
}

// ---------------------------------------------------------------------------

Learner Learner::ogd(const ConstraintSet& set, Vec x1, double eta) {
  if (!(eta > 0)) throw std::invalid_argument("OGD: eta must be positive");
  Vec x = set.project(x1);
  return Learner(set, OgdState{std::move(x), eta}, std::monostate{});
}

Learner Learner::adagrad_norm(const ConstraintSet& set, Vec x1, double alpha) {
  if (!(alpha > 0)) throw std::invalid_argument("AdaGrad-Norm: alpha must be positive");
  Vec x = set.project(x1);
  return Learner(set, AdaGradNormState{std::move(x), alpha}, std::monostate{});
}

Learner Learner::adaftrl(const ConstraintSet& ball, double lambda) {
  return Learner(ball, make_adaftrl(ball, lambda), std::monostate{});
}

Learner Learner::sword(const ConstraintSet& set, Vec x1, SwordConfig cfg) {
  Vec x = set.project(x1);
  auto state = make_sword(cfg, x);
  return Learner(set, std::move(state), std::move(cfg));
}

const Vec& Learner::play() const {
  return std::visit([](const auto& s) -> const Vec& { return s.x; }, state_);
}

void Learner::observe(const Vec& grad) {
  if (auto* s = std::get_if<OgdState>(&state_)) {
    *s = ogd_step(*s, grad, set_);
  } else if (auto* s = std::get_if<AdaGradNormState>(&state_)) {
    *s = adagrad_norm_step(*s, grad, set_);
  } else if (auto* s = std::get_if<AdaFtrlState>(&state_)) {
    *s = adaftrl_step(*s, grad);
  } else {
    auto& sw = std::get<SwordState>(state_);
    sw = sword_step(sw, std::get<SwordConfig>(cfg_), grad, set_);
  }
}

std::string Learner::name() const {
  switch (state_.index()) {
    case 0: return "ogd";
    case 1: return "adagrad_norm";
    case 2: return "adaftrl";
    default: return "sword";
  }
}

std::vector<Vec> play_online(std::span<const LossFn> losses, Learner& learner) {
  std::vector<Vec> iterates;
  iterates.reserve(losses.size());
  for (const auto& f : losses) {
    iterates.push_back(learner.play());
    learner.observe(f.grad(iterates.back()));
  }
  return iterates;
}

double sword_oracle_delta(std::span<const LossFn> losses, const ConstraintSet& set, const Vec& x1, SwordConfig cfg) {
  const int N = cfg.grid_size();
  const double D = cfg.diameter;
  cfg.delta_mode = TimeVaryingDelta{};
  std::optional<double> delta;
  for (int pass = 0; pass < 20; ++pass) {
    Learner l = Learner::sword(set, x1, cfg);
    const auto xs = play_online(losses, l);
    double s = 0.0;
    for (std::size_t t = 0; t < losses.size(); ++t) s += losses[t].grad(xs[t]).squaredNorm();
    const double next = s > 0 ? std::sqrt((2.0 + std::log(double(N))) / (D * D * s)) : 0.0;
    const bool settled = delta && std::abs(*delta - next) <= 1e-6 * next;
    delta = next;
    if (settled) break;
    cfg.delta_mode = FixedDelta{next};
  }
  return *delta;
}

}  // namespace gstar
