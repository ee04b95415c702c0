#include "gstar/hindsight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gstar {

double cumulative_nonstationarity(std::span<const LossFn> losses, const Vec& x) {
  double s = 0.0;
  for (const auto& f : losses) s += f.grad(x).squaredNorm();
  return s;
}

std::optional<double> cumulative_excess_loss(std::span<const LossFn> losses, const Vec& x) {
  double s = 0.0;
  for (const auto& f : losses) {
    const auto inf = f.infimum();
    if (!inf) return std::nullopt;
    s += f.value(x) - *inf;
  }
  return s;
}

namespace {

HindsightReport finish_report(std::span<const LossFn> losses, Vec x, double residual, long iters, bool converged) {
  HindsightReport r;
  r.L_star = cumulative_excess_loss(losses, x);
  r.G_star = cumulative_nonstationarity(losses, x);
  r.x_star = std::move(x);
  r.solver_residual = residual;
  r.iterations = iters;
  r.converged = converged;
  return r;
}

void average_grad(std::span<const LossFn> losses, const Vec& x, Vec& out) {
  out.setZero();
  const double w = 1.0 / static_cast<double>(losses.size());
  for (const auto& f : losses) f.accumulate_grad(x, w, out);
}

}  // namespace

HindsightReport solve_hindsight(std::span<const LossFn> losses, const ConstraintSet& set,
                                const HindsightOptions& opts) {
  if (losses.empty()) throw std::invalid_argument("solve_hindsight: need T >= 1 losses");
  for (const auto& f : losses) require_same_dim(set.dim(), f.dim(), "solve_hindsight");

  double L_avg = 0.0;
  for (const auto& f : losses) L_avg += f.smoothness(set);
  L_avg /= static_cast<double>(losses.size());

  Vec x = set.center();
  Vec g(set.dim());
  average_grad(losses, x, g);

  double step;
  if (L_avg > 0) {
    step = 1.0 / L_avg;
  } else {
    // Linear objective: one long step from the center reaches the boundary minimizer.
    const double gn = g.norm();
    step = gn > 0 ? set.diameter() / gn : 1.0;
  }

  double residual = std::numeric_limits<double>::infinity();
  long it = 0;
  for (; it < opts.max_iterations; ++it) {
    Vec next = set.project(x - step * g);
    residual = (x - next).norm() / step;
    x = std::move(next);
    if (residual <= opts.tol) break;
    average_grad(losses, x, g);
  }
  const bool converged = residual <= opts.tol;
  return finish_report(losses, std::move(x), residual, it, converged);
}

HindsightReport brute_force_hindsight(std::span<const LossFn> losses, const ConstraintSet& set,
                                      int grid_points, int zoom_levels) {
  const Index n = set.dim();
  if (n > 2) throw std::invalid_argument("brute_force_hindsight: dim > 2 not supported");
  if (grid_points < 2) throw std::invalid_argument("brute_force_hindsight: need at least 2 grid points");
  if (losses.empty()) throw std::invalid_argument("brute_force_hindsight: need T >= 1 losses");

  Vec lo(n), hi(n);
  if (const auto* b = set.as_ball()) {
    lo = b->center.array() - b->radius;
    hi = b->center.array() + b->radius;
  } else {
    lo = set.as_box()->lower;
    hi = set.as_box()->upper;
  }
  const Vec bound_lo = lo, bound_hi = hi;

  Vec best = set.center();
  double best_val = cumulative_loss(losses, best);
  Vec cell(n);

  auto axis_point = [&](Index d, int i) {
    if (i == grid_points - 1) return hi[d];
    return lo[d] + (hi[d] - lo[d]) * static_cast<double>(i) / (grid_points - 1);
  };

  for (int level = 0; level <= zoom_levels; ++level) {
    for (Index d = 0; d < n; ++d) cell[d] = (hi[d] - lo[d]) / (grid_points - 1);
    Vec p(n);
    if (n == 1) {
      for (int i = 0; i < grid_points; ++i) {
        p[0] = axis_point(0, i);
        Vec q = set.project(p);
        const double v = cumulative_loss(losses, q);
        if (v < best_val) best_val = v, best = q;
      }
    } else {
      for (int i = 0; i < grid_points; ++i) {
        for (int j = 0; j < grid_points; ++j) {
          p[0] = axis_point(0, i);
          p[1] = axis_point(1, j);
          Vec q = set.project(p);
          const double v = cumulative_loss(losses, q);
          if (v < best_val) best_val = v, best = q;
        }
      }
    }
    lo = (best - 2.0 * cell).cwiseMax(bound_lo);
    hi = (best + 2.0 * cell).cwiseMin(bound_hi);
  }
  return finish_report(losses, best, cell.maxCoeff(), zoom_levels + 1, true);
}

double gradient_variation_1d(std::span<const LossFn> losses, const ConstraintSet& set, int grid) {
  if (set.dim() != 1) throw std::invalid_argument("gradient_variation_1d: dim must be 1");
  if (grid < 2) throw std::invalid_argument("gradient_variation_1d: grid must be >= 2");
  const auto [lo, hi] = set.linear_range(Vec::Ones(1));
  double total = 0.0;
  Vec x(1);
  for (std::size_t t = 1; t < losses.size(); ++t) {
    double worst = 0.0;
    for (int i = 0; i < grid; ++i) {
      x[0] = i == grid - 1 ? hi : lo + (hi - lo) * static_cast<double>(i) / (grid - 1);
      const double d = losses[t].grad(x)[0] - losses[t - 1].grad(x)[0];
      worst = std::max(worst, d * d);
    }
    total += worst;
  }
  return total;
}

// ---------------------------------------------------------------------------

ComparatorPath make_comparator_path(std::vector<Vec> points, const ConstraintSet& set, double tol) {
  ComparatorPath path;
  for (std::size_t t = 0; t < points.size(); ++t) {
    if (!set.contains(points[t], tol)) throw std::invalid_argument("comparator path leaves the feasible set");
    if (t > 0) path.path_length += (points[t] - points[t - 1]).norm();
  }
  path.points = std::move(points);
  return path;
}

ComparatorPath piecewise_comparator(std::span<const LossFn> losses, const ConstraintSet& set, int segments,
                                    const HindsightOptions& opts) {
  if (segments < 1 || static_cast<std::size_t>(segments) > losses.size())
    throw std::invalid_argument("piecewise_comparator: need 1 <= segments <= T");
  const std::size_t T = losses.size();
  std::vector<Vec> points;
  points.reserve(T);
  for (int k = 0; k < segments; ++k) {
    const std::size_t begin = T * static_cast<std::size_t>(k) / static_cast<std::size_t>(segments);
    const std::size_t end = T * static_cast<std::size_t>(k + 1) / static_cast<std::size_t>(segments);
    const auto rep = solve_hindsight(losses.subspan(begin, end - begin), set, opts);
    for (std::size_t t = begin; t < end; ++t) points.push_back(rep.x_star);
  }
  return make_comparator_path(std::move(points), set, 1e-9);
}

DynamicMeasures dynamic_measures(std::span<const LossFn> losses, const ComparatorPath& path) {
  if (path.points.size() != losses.size()) throw std::invalid_argument("dynamic_measures: path length != T");
  DynamicMeasures m{path.path_length, 0.0, 0.0};
  for (std::size_t t = 0; t < losses.size(); ++t) {
    m.G_hat += losses[t].grad(path.points[t]).squaredNorm();
    const auto inf = losses[t].infimum();
    if (!inf) m.L_hat.reset();
    else if (m.L_hat) *m.L_hat += losses[t].value(path.points[t]) - *inf;
  }
  return m;
}

// ---------------------------------------------------------------------------

RegretLedger RegretLedger::record(std::span<const LossFn> losses, std::vector<Vec> iterates) {
  if (iterates.size() != losses.size()) throw std::invalid_argument("RegretLedger: iterates and losses differ in length");
  RegretLedger ledger;
  ledger.rounds_.reserve(losses.size());
  for (std::size_t t = 0; t < losses.size(); ++t) {
    const double v = losses[t].value(iterates[t]);
    const double g2 = losses[t].grad(iterates[t]).squaredNorm();
    ledger.cumulative_loss_ += v;
    ledger.cumulative_grad_sq_ += g2;
    ledger.rounds_.push_back(RoundRecord{std::move(iterates[t]), v, g2});
  }
  return ledger;
}

double RegretLedger::regret(std::span<const LossFn> losses, const Vec& comparator) const {
  if (losses.size() != rounds_.size()) throw std::invalid_argument("regret: horizon mismatch");
  return cumulative_loss_ - gstar::cumulative_loss(losses, comparator);
}

double RegretLedger::dynamic_regret(std::span<const LossFn> losses, const ComparatorPath& path) const {
  if (losses.size() != rounds_.size() || path.points.size() != rounds_.size())
    throw std::invalid_argument("dynamic_regret: horizon mismatch");
  double s = cumulative_loss_;
  for (std::size_t t = 0; t < losses.size(); ++t) s -= losses[t].value(path.points[t]);
  return s;
}

bool RegretLedger::verify(std::span<const LossFn> losses, double rel_tol) const {
  if (losses.size() != rounds_.size()) return false;
  double loss_sum = 0.0, grad_sum = 0.0;
  for (std::size_t t = 0; t < losses.size(); ++t) {
    const double v = losses[t].value(rounds_[t].x);
    const double g2 = losses[t].grad(rounds_[t].x).squaredNorm();
    if (v != rounds_[t].loss || g2 != rounds_[t].grad_norm_sq) return false;
    loss_sum += v;
    grad_sum += g2;
  }
  auto close = [&](double a, double b) { return std::abs(a - b) <= rel_tol * std::max({1.0, std::abs(a), std::abs(b)}); };
  return close(loss_sum, cumulative_loss_) && close(grad_sum, cumulative_grad_sq_);
}

}  // namespace gstar
