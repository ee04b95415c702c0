#include "gstar/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gstar {

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::OgdTuned: return "ogd_tuned";
    case BoundKind::OgdGeneral: return "ogd_general";
    case BoundKind::OgdLargeStep: return "ogd_large_step";
    case BoundKind::AdaGradNorm: return "adagrad_norm";
    case BoundKind::AdaFtrl: return "adaftrl";
    case BoundKind::LowerBound: return "lower_bound";
    case BoundKind::DynamicOgd: return "dynamic_ogd";
    case BoundKind::Sword: return "sword";
    case BoundKind::BanditGeneral: return "bandit_general";
    case BoundKind::BanditTuned: return "bandit_tuned";
    case BoundKind::BanditAdaNorm: return "bandit_adanorm";
    case BoundKind::SelfBounded: return "self_bounded";
    case BoundKind::EnvelopeSelfBounded: return "envelope_self_bounded";
    case BoundKind::BatchOgd: return "batch_ogd";
    case BoundKind::BatchAdaGradNorm: return "batch_adagrad_norm";
    case BoundKind::BatchAdaFtrl: return "batch_adaftrl";
    case BoundKind::Interpolation: return "interpolation";
  }
  return "unknown";
}

namespace {

template <class T>
T need(const std::optional<T>& v, const char* name, BoundKind kind) {
  if (!v) throw MissingConstant(to_string(kind) + ": missing constant " + name);
  return *v;
}

}  // namespace

double ogd_tuned_step(double L, double D, double G) {
  const double a = G > 0 ? D / std::sqrt(G) : std::numeric_limits<double>::infinity();
  const double b = L > 0 ? 1.0 / (2.0 * L) : std::numeric_limits<double>::infinity();
  const double eta = std::min(a, b);
  if (!std::isfinite(eta)) throw std::invalid_argument("ogd_tuned_step: G and L both zero");
  return eta;
}

double bandit_general_bound(double eta, double mu, double L, double D, double G, int n, int T) {
  const double c = 4.0 * n * eta * L;
  if (!(c < 1.0)) throw std::invalid_argument("bandit bound requires eta < 1/(4nL)");
  const double k = 4.0 * n * eta / (1.0 - c);
  const double m2 = mu * mu;
  return D * D / (2.0 * eta) + k * G + k * T * L * L * m2 + eta * T * double(n) * n * L * L * m2 / 2.0 +
         T * L * m2 / 2.0;
}

double bandit_tuned_step(double L, double D, double G, int n) {
  const double a = G > 0 ? D / (4.0 * std::sqrt(n * G)) : std::numeric_limits<double>::infinity();
  return std::min(a, 1.0 / (8.0 * n * L));
}

double bandit_tuned_mu(double D, int n, int T) { return D / std::sqrt(2.0 * n * T); }

double interpolation_dhat(double x1_dist_sq, double alpha, double L, double g1_norm) {
  const double r = alpha * g1_norm / L;
  const double a2 = alpha * alpha;
  const double tail = 2.0 * a2 * std::log(alpha * L / g1_norm) - 2.0 * a2 + 2.0 * r;
  // alpha L < g1: every step is below 1/L and the distance never grows past the start.
  return x1_dist_sq + std::max(0.0, (a2 - r) + std::max(0.0, tail));
}

double bound_value(BoundKind kind, const BoundInputs& in) {
  auto G = [&] { return need(in.G, "G", kind); };
  auto L = [&] { return need(in.L, "L", kind); };
  auto D = [&] { return need(in.D, "D", kind); };
  switch (kind) {
    case BoundKind::OgdTuned: {
      const double d = D();
      return std::max(2.0 * L() * d * d, std::sqrt(2.0 * G()) * d);
    }
    case BoundKind::OgdGeneral: {
      const double eta = need(in.eta, "eta", kind), l = L(), d = D();
      if (!(eta * l < 1.0)) throw std::invalid_argument("ogd_general requires eta < 1/L");
      return d * d / (2.0 * eta) + eta * G() / (2.0 * (1.0 - eta * l));
    }
    case BoundKind::OgdLargeStep: {
      const double eta = need(in.eta, "eta", kind), l = L();
      const double s = 2.0 - eta * l;
      if (!(s > 0)) throw std::invalid_argument("ogd_large_step requires eta < 2/L");
      return need(in.x1_dist_sq, "x1_dist_sq", kind) / (s * eta) +
             eta / s * (l * need(in.L_T, "L_T", kind) + G() / s);
    }
    case BoundKind::AdaGradNorm: {
      const double d = D();
      return std::sqrt(2.0) * std::sqrt(G()) * d + L() * d * d;
    }
    case BoundKind::AdaFtrl: {
      const double d = D(), r = need(in.R, "R", kind);
      return std::sqrt(3.0) * r * std::sqrt(G()) * d + 2.0 * r * r * L() * d * d;
    }
    case BoundKind::LowerBound: return 0.25 * D() * std::sqrt(G());
    case BoundKind::DynamicOgd: {
      const double eta = need(in.eta, "eta", kind), d = D();
      return d * (d + 2.0 * need(in.path_length, "path_length", kind)) / (2.0 * eta) +
             eta * need(in.G_hat, "G_hat", kind);
    }
    case BoundKind::Sword: {
      const double d = D(), l = L(), p = need(in.path_length, "path_length", kind);
      const double c = 3.0 + std::log(static_cast<double>(need(in.N, "N", kind)));
      return 8.0 * std::sqrt(c * d * d + 2.0 * p * d) * std::sqrt(need(in.G_hat, "G_hat", kind)) +
             8.0 * c * l * d * d + 8.0 * l * d * p;
    }
    case BoundKind::BanditGeneral:
      return bandit_general_bound(need(in.eta, "eta", kind), need(in.mu, "mu", kind), L(), D(), G(),
                                  need(in.n, "n", kind), need(in.T, "T", kind));
    case BoundKind::BanditTuned: {
      const double d = D(), l = L(), n = need(in.n, "n", kind);
      return std::max(8.0 * n * l * d * d, 4.0 * d * std::sqrt(n * G())) + l * d * d / 2.0;
    }
    case BoundKind::BanditAdaNorm: {
      const double d = D(), l = L(), n = need(in.n, "n", kind);
      return std::max(16.0 * l * d * d * n, 4.0 * d * std::sqrt(n * G())) + 5.0 * l * d * d;
    }
    case BoundKind::SelfBounded: return 2.0 * L() * need(in.L_T, "L_T", kind);
    case BoundKind::EnvelopeSelfBounded:
      return 2.0 * need(in.gamma, "gamma", kind) * need(in.L_T, "L_T", kind);
    case BoundKind::BatchOgd: {
      const double eta = need(in.eta, "eta", kind), l = L(), s = need(in.sigma_g, "sigma_g", kind);
      if (!(eta * l < 1.0)) throw std::invalid_argument("batch_ogd requires eta < 1/L");
      return need(in.x1_dist_sq, "x1_dist_sq", kind) / (2.0 * eta * need(in.T, "T", kind)) +
             eta / (2.0 * (1.0 - eta * l)) * s * s;
    }
    case BoundKind::BatchAdaGradNorm: {
      const double d = D(), T = need(in.T, "T", kind);
      return L() * d * d / T + std::sqrt(2.0) * d * need(in.sigma_g, "sigma_g", kind) / std::sqrt(T);
    }
    case BoundKind::BatchAdaFtrl: {
      const double d = D(), T = need(in.T, "T", kind), r = need(in.R, "R", kind);
      return 2.0 * r * r * L() * d * d / T + std::sqrt(3.0) * r * d * need(in.sigma_g, "sigma_g", kind) / std::sqrt(T);
    }
    case BoundKind::Interpolation: {
      const double l = L(), a = need(in.alpha, "alpha", kind), T = need(in.T, "T", kind);
      const double g1 = need(in.g1_norm, "g1_norm", kind);
      // No informative gradient was ever observed: the bound's log term is unbounded.
      if (!(g1 > 0)) return std::numeric_limits<double>::infinity();
      const double dh = interpolation_dhat(need(in.x1_dist_sq, "x1_dist_sq", kind), a, l, g1);
      const double s = dh / (2.0 * a) + a;
      return l / (2.0 * T) * s * s;
    }
  }
  throw std::invalid_argument("unknown bound kind");
}

BoundCheck check_bound(BoundKind kind, double measured, const BoundInputs& in) {
  BoundCheck c{kind, measured, bound_value(kind, in), kind == BoundKind::LowerBound, false};
  const double slack = 1e-12 * std::max(1.0, std::abs(c.bound));
  c.pass = c.lower ? measured >= c.bound - slack : measured <= c.bound + slack;
  return c;
}

bool BoundAudit::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.pass; });
}

BoundAudit audit_bounds(std::span<const BoundKind> kinds, double measured, const BoundInputs& in) {
  BoundAudit audit;
  for (BoundKind k : kinds) {
    try {
      audit.checks.push_back(check_bound(k, measured, in));
    } catch (const MissingConstant&) {
      audit.not_applicable.push_back(to_string(k));
    }
  }
  return audit;
}

double sequence_lemma_gap(std::span<const Vec> a, std::span<const Vec> b, double alpha, double beta) {
  if (a.size() != b.size()) throw std::invalid_argument("sequence_lemma_gap: length mismatch");
  if (!(alpha > 0) || !(beta > 0)) throw std::invalid_argument("sequence_lemma_gap: alpha, beta must be positive");
  double sa = 0.0, sb = 0.0, sd = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    sa += a[t].squaredNorm();
    sb += b[t].squaredNorm();
    sd += (a[t] - b[t]).squaredNorm();
  }
  return alpha * std::sqrt(sa) - beta * sd - alpha * std::sqrt(sb) - alpha * alpha / (4.0 * beta);
}

}  // namespace gstar
