#pragma once

#include <cmath>

#include "curvwave/common.hpp"

namespace curvwave::jacobi {

// j solves j'' + kappa0 j = 0, j(0)=0, j'(0)=1
template <class S>
S scalar_j(S kappa0, S r) {
  using std::sin, std::sinh, std::sqrt;
  if (kappa0 < 0) {
    S a = sqrt(-kappa0);
    return sinh(a * r) / a;
  }
  if (kappa0 > 0) {
    S a = sqrt(kappa0);
    return sin(a * r) / a;
  }
  return r;
}

template <class S>
S scalar_jp(S kappa0, S r) {
  using std::cos, std::cosh, std::sqrt;
  if (kappa0 < 0) return cosh(sqrt(-kappa0) * r);
  if (kappa0 > 0) return cos(sqrt(kappa0) * r);
  return S(1);
}

// slower weight sinh((alpha0 - delta) r) / (alpha0 - delta)
template <class S>
S scalar_j_delta(S alpha0, S delta, S r) {
  if (!(delta > 0) || !(delta < alpha0))
    throw DomainError("delta must lie in (0, alpha0)");
  S b = alpha0 - delta;
  return std::sinh(b * r) / b;
}

template <class S>
S scalar_j_delta_prime(S alpha0, S delta, S r) {
  if (!(delta > 0) || !(delta < alpha0))
    throw DomainError("delta must lie in (0, alpha0)");
  return std::cosh((alpha0 - delta) * r);
}

}  // namespace curvwave::jacobi
