#ifndef GSTAR_VEC_HPP_
#define GSTAR_VEC_HPP_

#include <Eigen/Core>

#include <initializer_list>
#include <stdexcept>
#include <string>

namespace gstar {

using Vec = Eigen::VectorXd;
using Index = Eigen::Index;

inline bool all_finite(const Vec& v) { return v.allFinite(); }

/// Throws if v contains NaN or Inf. Returns v for chaining.
inline const Vec& require_finite(const Vec& v, const char* what = "vector") {
  if (v.size() < 1)
    throw std::invalid_argument(std::string(what) + ": empty vector");
  if (!v.allFinite())
    throw std::invalid_argument(std::string(what) + ": non-finite entry");
  return v;
}

inline Vec make_vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return require_finite(v);
}

inline void require_same_dim(Index expected, Index got, const char* what) {
  if (expected != got)
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (expected " +
                                std::to_string(expected) + ", got " + std::to_string(got) + ")");
}

}  // namespace gstar

#endif  // GSTAR_VEC_HPP_
