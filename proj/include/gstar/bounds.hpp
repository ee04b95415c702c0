#ifndef GSTAR_BOUNDS_HPP_
#define GSTAR_BOUNDS_HPP_

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gstar/vec.hpp"

namespace gstar {

/// Closed-form regret bounds. Each kind names the inequality being audited.
enum class BoundKind {
  OgdTuned,         // max{2LD^2, sqrt(2G) D}
  OgdGeneral,       // D^2/(2 eta) + eta G / (2 (1 - eta L)),  eta < 1/L
  OgdLargeStep,     // |x1-x|^2/((2-eta L) eta) + eta/(2-eta L) [L L_T + G/(2-eta L)],  eta < 2/L
  AdaGradNorm,      // sqrt(2) sqrt(G) D + L D^2
  AdaFtrl,          // sqrt(3) R sqrt(G) D + 2 R^2 L D^2
  LowerBound,       // (D/4) sqrt(G)   -- measured must be >= this
  DynamicOgd,       // D (D + 2P)/(2 eta) + eta G_hat
  Sword,            // 8 sqrt((3+log N) D^2 + 2 P D) sqrt(G_hat) + 8 (3+log N) L D^2 + 8 L D P
  BanditGeneral,    // see bandit_general_bound
  BanditTuned,      // max{8nLD^2, 4D sqrt(n G)} + L D^2 / 2
  BanditAdaNorm,    // max{16 L D^2 n, 4 D sqrt(n G)} + 5 L D^2
  SelfBounded,      // G <= 2 L L_T
  EnvelopeSelfBounded,  // G^X <= 2 gamma L^X
  BatchOgd,         // |x1-x*|^2/(2 eta T) + eta/(2(1 - eta L)) sigma_g^2
  BatchAdaGradNorm, // L D^2 / T + sqrt(2) D sigma_g / sqrt(T)
  BatchAdaFtrl,     // 2 R^2 L D^2 / T + sqrt(3) R D sigma_g / sqrt(T)
  Interpolation,    // (L/(2T)) (D_hat/(2 alpha) + alpha)^2
};

std::string to_string(BoundKind kind);

/// Constants and measured statistics a bound may need. Missing entries raise MissingConstant.
struct BoundInputs {
  std::optional<double> G;            // G_T(x) (or G^X_T, or sigma-free)
  std::optional<double> L_T;          // L_T(x) (or L^X_T)
  std::optional<double> G_hat;        // dynamic G
  std::optional<double> path_length;  // P_T
  std::optional<double> L, D, alpha, R, eta, mu, gamma, sigma_g;
  std::optional<double> x1_dist_sq;   // |x^1 - x|^2
  std::optional<double> g1_norm;      // |grad f(x^1, xi^1)|
  std::optional<int> N, n, T;
};

class MissingConstant : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BoundCheck {
  BoundKind kind;
  double measured;
  double bound;
  bool lower = false;  // lower bound: pass iff measured >= bound
  bool pass;
};

/// Right-hand side of the given bound.
double bound_value(BoundKind kind, const BoundInputs& in);

/// Compare a measured quantity against the bound. Upper bounds admit a relative
/// round-off slack of 1e-12; no statistical slack.
BoundCheck check_bound(BoundKind kind, double measured, const BoundInputs& in);

struct BoundAudit {
  std::vector<BoundCheck> checks;
  bool all_pass() const;
  /// Checks whose bound could not be evaluated for lack of constants.
  std::vector<std::string> not_applicable;
};

/// Evaluate every requested bound; kinds with missing constants are listed as not applicable.
BoundAudit audit_bounds(std::span<const BoundKind> kinds, double measured, const BoundInputs& in);

// Explicit forms, shared by the evaluators and the harness.
double ogd_tuned_step(double L, double D, double G);
double bandit_general_bound(double eta, double mu, double L, double D, double G, int n, int T);
double bandit_tuned_step(double L, double D, double G, int n);
/// D / sqrt(2 n T): keeps the smoothing terms below L D^2 / 2 for every L when n >= 8.
double bandit_tuned_mu(double D, int n, int T);
/// D_hat of the interpolation analysis, generalized so it stays valid when alpha L < |g1|.
double interpolation_dhat(double x1_dist_sq, double alpha, double L, double g1_norm);

/// alpha sqrt(sum |a|^2) - beta sum |a-b|^2 - alpha sqrt(sum |b|^2) - alpha^2/(4 beta); <= 0 always.
double sequence_lemma_gap(std::span<const Vec> a, std::span<const Vec> b, double alpha, double beta);

}  // namespace gstar

#endif  // GSTAR_BOUNDS_HPP_
