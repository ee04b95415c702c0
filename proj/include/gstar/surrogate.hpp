#ifndef GSTAR_SURROGATE_HPP_
#define GSTAR_SURROGATE_HPP_

#include "gstar/constraint_set.hpp"
#include "gstar/loss.hpp"
#include "gstar/vec.hpp"

#include <span>
#include <stdexcept>

namespace gstar {

class ProxNotConverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Moreau envelope of `base` restricted to `set`:
///   l^{1/gamma}(x) = min_{y in set} l(y) + (gamma/2) |y - x|^2.
struct EnvelopeLoss {
  LossFn base;
  ConstraintSet set;
  double gamma;
  double prox_tol = 1e-10;
  long max_iterations = 100'000;
};

/// Projected gradient with step 1/(L + gamma) until successive iterates are within prox_tol.
Vec prox(const EnvelopeLoss& e, const Vec& x);
double envelope_value(const EnvelopeLoss& e, const Vec& x);
/// gamma (x - prox(x)).
Vec envelope_grad(const EnvelopeLoss& e, const Vec& x);

struct ConstrainedMeasures {
  double L_X;  // sum_t l_t(x) - min_{u in set} l_t(u)
  double G_X;  // sum_t |grad l_t^{1/gamma}(x)|^2
};

ConstrainedMeasures constrained_measures(std::span<const LossFn> losses, const ConstraintSet& set, double gamma,
                                         const Vec& x);

}  // namespace gstar

#endif  // GSTAR_SURROGATE_HPP_
