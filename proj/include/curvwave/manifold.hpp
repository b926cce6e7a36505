#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <vector>

#include "curvwave/common.hpp"
#include "curvwave/jacobi_scalar.hpp"

// Space forms in ambient R^4: unit sphere, hyperboloid <x,x> = -1 with x0 > 0,
// and flat R^3 stored as (0, x, y, z). Curvature other than +-1 is a rescaling
// of distances, points always live on the unit model.
namespace curvwave::manifold {

enum class Kind { Sphere, Hyperbolic, Flat };

template <class S>
using V4 = Eigen::Matrix<S, 4, 1>;

template <class S>
struct Space {
  Kind kind = Kind::Hyperbolic;
  S kappa0 = S(-1);
  S alpha0 = S(1);  // sqrt(-kappa0) on H3, zero otherwise

  S root() const { return kind == Kind::Flat ? S(1) : std::sqrt(std::abs(kappa0)); }
  S j(S r) const { return jacobi::scalar_j(kappa0, r); }
  S jp(S r) const { return jacobi::scalar_jp(kappa0, r); }
  // injectivity radius
  S max_radius() const { return kind == Kind::Sphere ? S(pi) / root() : S(inf); }

  static Space sphere(S kappa = S(1)) {
    if (!(kappa > 0)) throw DomainError("sphere needs kappa0 > 0");
    return {Kind::Sphere, kappa, S(0)};
  }
  static Space hyperbolic(S alpha = S(1)) {
    if (!(alpha > 0)) throw DomainError("hyperbolic space needs alpha0 > 0");
    return {Kind::Hyperbolic, -alpha * alpha, alpha};
  }
  static Space flat() { return {Kind::Flat, S(0), S(0)}; }
};

template <class S>
struct Point {
  V4<S> x;
};

template <class S>
struct TangentVector {
  Point<S> base;
  V4<S> v;
};

template <class S>
struct QuadNode {
  Point<S> p;
  S weight;
};

template <class S>
S inner(const Space<S>& sp, const V4<S>& a, const V4<S>& b) {
  switch (sp.kind) {
    case Kind::Hyperbolic:
      return -a(0) * b(0) + a(1) * b(1) + a(2) * b(2) + a(3) * b(3);
    case Kind::Flat:
      return a(1) * b(1) + a(2) * b(2) + a(3) * b(3);
    default:
      return a.dot(b);
  }
}

template <class S>
Point<S> origin(const Space<S>& sp) {
  V4<S> x = V4<S>::Zero();
  if (sp.kind != Kind::Flat) x(0) = S(1);
  return {x};
}

// projects back onto the model after floating point drift
template <class S>
Point<S> renormalize(const Space<S>& sp, V4<S> x) {
  switch (sp.kind) {
    case Kind::Sphere:
      x /= x.norm();
      break;
    case Kind::Hyperbolic:
      x(0) = std::sqrt(S(1) + x.template tail<3>().squaredNorm());
      break;
    case Kind::Flat:
      x(0) = S(0);
      break;
  }
  return {x};
}

template <class S>
S constraint_defect(const Space<S>& sp, const V4<S>& x) {
  switch (sp.kind) {
    case Kind::Sphere:
      return std::abs(x.squaredNorm() - S(1));
    case Kind::Hyperbolic:
      return x(0) <= 0 ? S(inf) : std::abs(inner(sp, x, x) + S(1)) / (S(1) + x(0) * x(0));
    default:
      return std::abs(x(0));
  }
}

template <class S>
Point<S> make_point(const Space<S>& sp, const V4<S>& x, S tol = S(1e-9)) {
  if (!x.allFinite() || constraint_defect(sp, x) > tol)
    throw ConstraintViolation("coordinates do not lie on the model");
  return renormalize(sp, x);
}

// point at distance r from the origin along the unit direction u in R^3
template <class S>
Point<S> polar_point(const Space<S>& sp, S r, const Eigen::Matrix<S, 3, 1>& u) {
  V4<S> x = V4<S>::Zero();
  S k = sp.root();
  switch (sp.kind) {
    case Kind::Sphere:
      x(0) = std::cos(k * r);
      x.template tail<3>() = std::sin(k * r) * u;
      break;
    case Kind::Hyperbolic:
      x(0) = std::cosh(k * r);
      x.template tail<3>() = std::sinh(k * r) * u;
      break;
    case Kind::Flat:
      x.template tail<3>() = r * u;
      break;
  }
  return renormalize(sp, x);
}

template <class S>
S distance(const Space<S>& sp, const Point<S>& p, const Point<S>& q) {
  V4<S> d = p.x - q.x;
  switch (sp.kind) {
    case Kind::Sphere:
      return S(2) * std::atan2(d.norm(), (p.x + q.x).norm()) / sp.root();
    case Kind::Hyperbolic: {
      S q2 = std::max(S(0), inner(sp, d, d));
      return S(2) * std::asinh(std::sqrt(q2) / S(2)) / sp.root();
    }
    default:
      return d.template tail<3>().norm();
  }
}

// orthonormal basis of the tangent space at p, as columns
template <class S>
Eigen::Matrix<S, 4, 3> tangent_basis(const Space<S>& sp, const Point<S>& p) {
  Eigen::Matrix<S, 4, 3> B;
  if (sp.kind == Kind::Flat) {
    B.setZero();
    B(1, 0) = B(2, 1) = B(3, 2) = S(1);
    return B;
  }
  S sign = sp.kind == Kind::Sphere ? S(1) : S(-1);  // <p,p>
  int c = 0;
  for (int e = 0; e < 4 && c < 3; ++e) {
    V4<S> v = V4<S>::Unit(e);
    v -= (inner(sp, v, p.x) / sign) * p.x;
    for (int k = 0; k < c; ++k) v -= inner(sp, v, V4<S>(B.col(k))) * B.col(k);
    S n2 = inner(sp, v, v);
    if (n2 < S(1e-6)) continue;
    B.col(c++) = v / std::sqrt(n2);
  }
  return B;
}

template <class S>
TangentVector<S> tangent(const Space<S>& sp, const Point<S>& p, const Eigen::Matrix<S, 3, 1>& w) {
  return {p, tangent_basis(sp, p) * w};
}

// geodesic from v.base with unit initial velocity v.v, evaluated at length r
template <class S>
Point<S> exp_map(const Space<S>& sp, const TangentVector<S>& v, S r) {
  S n2 = inner(sp, v.v, v.v);
  if (!(std::abs(n2 - S(1)) < S(1e-9)) || std::abs(inner(sp, v.v, v.base.x)) > S(1e-9))
    throw NormalizationError("exp_map needs a unit tangent vector");
  S k = sp.root();
  switch (sp.kind) {
    case Kind::Sphere:
      return renormalize(sp, V4<S>(std::cos(k * r) * v.base.x + std::sin(k * r) * v.v));
    case Kind::Hyperbolic:
      return renormalize(sp, V4<S>(std::cosh(k * r) * v.base.x + std::sinh(k * r) * v.v));
    default:
      return renormalize(sp, V4<S>(v.base.x + r * v.v));
  }
}

// velocity of the same geodesic at length r
template <class S>
V4<S> exp_velocity(const Space<S>& sp, const TangentVector<S>& v, S r) {
  S k = sp.root();
  switch (sp.kind) {
    case Kind::Sphere:
      return -k * std::sin(k * r) * v.base.x + std::cos(k * r) * v.v;
    case Kind::Hyperbolic:
      return k * std::sinh(k * r) * v.base.x + std::cosh(k * r) * v.v;
    default:
      return v.v;
  }
}

// third side of a triangle with sides s, rho and included angle theta (haversine form)
template <class S>
S law_of_cosines(const Space<S>& sp, S s, S rho, S theta) {
  S h = std::sin(theta / S(2));
  h *= h;
  S k = sp.root();
  switch (sp.kind) {
    case Kind::Sphere: {
      S a = std::sin(k * (s - rho) / S(2));
      S q = a * a + std::sin(k * s) * std::sin(k * rho) * h;
      return S(2) * std::asin(std::sqrt(std::clamp(q, S(0), S(1)))) / k;
    }
    case Kind::Hyperbolic: {
      S a = std::sinh(k * (s - rho) / S(2));
      S q = a * a + std::sinh(k * s) * std::sinh(k * rho) * h;
      return S(2) * std::asinh(std::sqrt(std::max(q, S(0)))) / k;
    }
    default:
      return std::sqrt(std::max(S(0), (s - rho) * (s - rho) + S(4) * s * rho * h));
  }
}

template <class S>
Point<S> antipode(const Space<S>& sp, const Point<S>& p) {
  if (sp.kind != Kind::Sphere) throw DomainError("antipode only exists on the sphere");
  return {V4<S>(-p.x)};
}

// product rule on the unit S2: n Gauss-Legendre nodes in cos(polar), 2n azimuths.
// exact for spherical polynomials of degree <= 2n-1
template <class S>
struct DirectionRule {
  std::vector<Eigen::Matrix<S, 3, 1>> u;
  std::vector<S> w;
};

template <class S>
DirectionRule<S> direction_rule(int level) {
  if (level < 1) throw DomainError("quadrature level must be positive");
  const GaussRule& g = gauss_legendre(level);
  int na = 2 * level;
  DirectionRule<S> R;
  for (int i = 0; i < level; ++i) {
    S c = S(g.x[i]), s = std::sqrt(std::max(S(0), S(1) - c * c));
    for (int a = 0; a < na; ++a) {
      S phi = S(2) * S(pi) * (S(a) + S(0.5)) / S(na);
      R.u.push_back({s * std::cos(phi), s * std::sin(phi), c});
      R.w.push_back(S(g.w[i]) * S(2) * S(pi) / S(na));
    }
  }
  return R;
}

// nodes on the geodesic sphere of radius r about center; weights sum to 4 pi j(r)^2
template <class S>
std::vector<QuadNode<S>> sphere_quadrature(const Space<S>& sp, const Point<S>& center, S r,
                                           int level) {
  if (!(r > 0) || !(r < sp.max_radius()))
    throw DomainError("sphere radius outside (0, injectivity radius)");
  auto B = tangent_basis(sp, center);
  auto R = direction_rule<S>(level);
  S jr = sp.j(r);
  std::vector<QuadNode<S>> out;
  out.reserve(R.u.size());
  for (size_t i = 0; i < R.u.size(); ++i) {
    TangentVector<S> v{center, B * R.u[i]};
    out.push_back({exp_map(sp, v, r), R.w[i] * jr * jr});
  }
  return out;
}

}  // namespace curvwave::manifold
