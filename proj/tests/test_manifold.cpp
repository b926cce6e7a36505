#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "curvwave/manifold.hpp"

using namespace curvwave;
using namespace curvwave::manifold;

namespace {

Eigen::Vector3d random_unit(std::mt19937_64& g) {
  std::normal_distribution<double> n;
  Eigen::Vector3d u(n(g), n(g), n(g));
  return u.normalized();
}

}  // namespace

TEST_CASE("distance from origin on the three models") {
  for (auto sp : {Space<double>::hyperbolic(), Space<double>::sphere(), Space<double>::flat()}) {
    for (double r : {1e-8, 0.3, 1.7, 3.0}) {
      auto p = polar_point(sp, r, Eigen::Vector3d(0, 0, 1));
      CHECK(distance(sp, origin(sp), p) == doctest::Approx(r).epsilon(1e-13));
      CHECK(constraint_defect(sp, p.x) < 1e-12);
    }
  }
  // H3 at distance 1: x0 = cosh 1
  auto h = Space<double>::hyperbolic();
  CHECK(polar_point(h, 1.0, Eigen::Vector3d(1, 0, 0)).x(0) == doctest::Approx(std::cosh(1.0)));
}

TEST_CASE("exp_map walks the requested distance") {
  std::mt19937_64 g(7);
  for (auto sp : {Space<double>::hyperbolic(0.7), Space<double>::sphere(2.0)}) {
    for (int k = 0; k < 50; ++k) {
      auto p = polar_point(sp, 0.4 + 0.02 * k, random_unit(g));
      auto v = tangent(sp, p, random_unit(g));
      double r = 0.05 + 0.02 * k;
      auto q = exp_map(sp, v, r);
      CHECK(distance(sp, p, q) == doctest::Approx(r).epsilon(1e-11));
      CHECK(constraint_defect(sp, q.x) < 1e-12);
    }
  }
}

TEST_CASE("law of cosines agrees with embedded triangles") {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> U(0.05, 1.4);
  for (auto sp : {Space<double>::hyperbolic(), Space<double>::sphere(), Space<double>::flat()}) {
    for (int k = 0; k < 40; ++k) {
      double s = U(g), rho = U(g), th = 2.0 * U(g);
      auto o = origin(sp);
      auto B = tangent_basis(sp, o);
      TangentVector<double> a{o, B.col(0)}, b{o, std::cos(th) * B.col(0) + std::sin(th) * B.col(1)};
      double d = distance(sp, exp_map(sp, a, s), exp_map(sp, b, rho));
      CHECK(law_of_cosines(sp, s, rho, th) == doctest::Approx(d).epsilon(1e-11));
    }
  }
}

TEST_CASE("sphere quadrature weights and exactness") {
  auto sp = Space<double>::hyperbolic();
  auto q = sphere_quadrature(sp, origin(sp), 1.0, 6);
  double tot = 0;
  for (auto& n : q) tot += n.weight;
  CHECK(tot == doctest::Approx(4 * pi * std::sinh(1.0) * std::sinh(1.0)).epsilon(1e-14));
  // z^4 over S2 = 4 pi / 5 exactly for level >= 3
  auto R = direction_rule<double>(3);
  double m = 0;
  for (size_t i = 0; i < R.u.size(); ++i) m += R.w[i] * std::pow(R.u[i](2), 4);
  CHECK(m == doctest::Approx(4 * pi / 5).epsilon(1e-14));
  // smooth integrand converges spectrally
  double prev = 1;
  double exact = 4 * pi * std::sinh(1.0);  // int exp(z) over S2
  for (int lvl : {2, 4, 8}) {
    auto D = direction_rule<double>(lvl);
    double s = 0;
    for (size_t i = 0; i < D.u.size(); ++i) s += D.w[i] * std::exp(D.u[i](2));
    double err = std::abs(s - exact);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-13);
}

TEST_CASE("invalid inputs are rejected") {
  auto h = Space<double>::hyperbolic();
  CHECK_THROWS_AS(make_point(h, Vec4(1, 1, 0, 0)), ConstraintViolation);
  auto o = origin(h);
  CHECK_THROWS_AS(exp_map(h, TangentVector<double>{o, Vec4(0, 2, 0, 0)}, 1.0), NormalizationError);
  auto s = Space<double>::sphere();
  CHECK_THROWS_AS(sphere_quadrature(s, origin(s), 4.0, 4), DomainError);
  CHECK(antipode(s, o).x(0) == -1.0);
  CHECK_THROWS_AS(Space<double>::hyperbolic(-1.0), DomainError);
}

TEST_CASE("scalar Jacobi solutions") {
  CHECK(jacobi::scalar_j(-1.0, 1.0) == doctest::Approx(std::sinh(1.0)));
  CHECK(jacobi::scalar_j(1.0, pi / 2) == doctest::Approx(1.0));
  CHECK(jacobi::scalar_j(0.0, 2.5) == 2.5);
  CHECK(jacobi::scalar_j_delta(1.0, 0.1, 1.0) == doctest::Approx(std::sinh(0.9) / 0.9));
  CHECK_THROWS_AS(jacobi::scalar_j_delta(1.0, 1.5, 1.0), DomainError);
  // float instantiation compiles and agrees
  CHECK(jacobi::scalar_j(-1.0f, 1.0f) == doctest::Approx(std::sinh(1.0)).epsilon(1e-6));
}
