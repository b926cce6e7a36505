#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "curvwave/freeprop.hpp"
#include "curvwave/oracles.hpp"

using namespace curvwave;
using namespace curvwave::freeprop;

namespace {
const Space S3 = Space::sphere();
const Space H3 = Space::hyperbolic();
}  // namespace

TEST_CASE("sine kernel coefficients") {
  CHECK(sine_kernel(H3, 1.0).shell_coeff == doctest::Approx(0.067718).epsilon(1e-5));
  CHECK(sine_kernel(S3, pi / 2).shell_coeff == doctest::Approx(1 / (4 * pi)));
  CHECK(sine_kernel(S3, 0.7).shell_mass(S3) == doctest::Approx(std::sin(0.7)));
  CHECK(sine_kernel(S3, pi).shell_coeff == 0.0);
  CHECK(sine_kernel(H3, 2.0).ac_profile.empty());
  CHECK_THROWS_AS(sine_kernel(H3, 0.0), DomainError);
}

TEST_CASE("constants") {
  auto one = constant_function(1.0);
  auto x = manifold::polar_point(H3, 0.8, Eigen::Vector3d(0, 1, 0));
  CHECK(apply_sine(H3, 1.3, one, x) == doctest::Approx(std::sinh(1.3)).epsilon(1e-14));
  CHECK(apply_cosine(H3, 1.3, one, x) == doctest::Approx(std::cosh(1.3)).epsilon(1e-14));
  CHECK(apply_cosine(S3, 1.3, one, manifold::origin(S3)) == doctest::Approx(std::cos(1.3)).epsilon(1e-14));
}

TEST_CASE("geometric and spectral sine propagators agree on S3") {
  std::mt19937_64 g(42);
  auto f = oracle::random_band_limited(g, 3, 8);
  auto F = as_test_function(f);
  std::uniform_real_distribution<double> T(0.05, 2 * pi - 0.05);
  for (int k = 0; k < 10; ++k) {
    double t = T(g);
    Point x{oracle::random_s3_point(g)};
    double geo = apply_sine(S3, t, F, x);
    auto sp = spectral_sine_apply(f, t, x.x);
    CHECK(sp.truncation == 0.0);
    CHECK(geo == doctest::Approx(sp.value).epsilon(1e-12));
    // antisymmetry and periodicity
    CHECK(std::abs(geo + apply_sine(S3, 2 * pi - t, F, x)) < 1e-12);
    CHECK(spectral_sine_apply(f, t + 2 * pi, x.x).value == doctest::Approx(sp.value).epsilon(1e-10));
  }
  CHECK(apply_sine(S3, pi, F, manifold::origin(S3)) == 0.0);
}

TEST_CASE("cosine propagator: reflection at pi and time derivative") {
  std::mt19937_64 g(3);
  auto f = oracle::random_band_limited(g, 2, 6);
  auto F = as_test_function(f);
  for (int k = 0; k < 5; ++k) {
    Point x{oracle::random_s3_point(g)};
    CHECK(apply_cosine(S3, pi, F, x) == doctest::Approx(-F.value(-x.x)).epsilon(1e-12));
    CHECK(spectral_cosine_apply(f, pi, x.x).value == doctest::Approx(-F.value(-x.x)).epsilon(1e-10));
    double t = 0.9, h = 1e-3;
    double dsin = (apply_sine(S3, t + h, F, x) - apply_sine(S3, t - h, F, x)) / (2 * h);
    CHECK(apply_cosine(S3, t, F, x) == doctest::Approx(dsin).epsilon(1e-5));
    // numerical radial derivative path
    TestFunction nog{F.value, {}};
    CHECK(apply_cosine(S3, t, nog, x) == doctest::Approx(apply_cosine(S3, t, F, x)).epsilon(1e-9));
  }
}

TEST_CASE("wave equation residual is second order") {
  std::mt19937_64 g(5);
  auto f = oracle::random_band_limited(g, 2, 5);
  auto F = as_test_function(f);
  Point x{oracle::random_s3_point(g)};
  double t = 1.1;
  auto H0u = spectral_apply(f, x.x, [t](int l) { return (l + 1) * std::sin(t * (l + 1)); }).value;
  std::vector<double> res;
  for (double h : {0.02, 0.01}) {
    double u2 = (apply_sine(S3, t + h, F, x) - 2 * apply_sine(S3, t, F, x) + apply_sine(S3, t - h, F, x)) / (h * h);
    res.push_back(std::abs(u2 + H0u));
  }
  CHECK(res[1] < res[0] / 3.5);
}

TEST_CASE("Huygens support") {
  auto p = manifold::polar_point(H3, 1.0, Eigen::Vector3d(1, 0, 0));
  auto bump = radial_function(H3, p, [](double d) { return d < 0.2 ? std::pow(1 - d * d / 0.04, 3) : 0.0; });
  auto o = manifold::origin(H3);
  CHECK(apply_sine(H3, 0.5, bump, o) == 0.0);
  CHECK(apply_sine(H3, 1.0, bump, o) > 0.0);
}

TEST_CASE("fundamental integrals") {
  for (double r : {0.5, 1.0, 2.0, 4.0}) {
    auto c = fundamental_integral_check(H3, r);
    CHECK(c.rel_error < 1e-8);
    CHECK(c.j_weighted == doctest::Approx(1 / (4 * pi)).epsilon(1e-10));
    CHECK(c.t_weighted <= 1 / (4 * pi));
  }
  for (double r : {0.5, 1.0, 2.0}) CHECK(fundamental_integral_check(S3, r).rel_error < 1e-8);
}

TEST_CASE("zonal projections") {
  CHECK(zonal_projection(0, 1.234) == doctest::Approx(1 / (2 * pi * pi)));
  CHECK(zonal_projection(5, 0.0) == doctest::Approx(36 / (2 * pi * pi)));
  CHECK(zonal_projection(4, 0.3) == doctest::Approx(5 * std::sin(1.5) / (2 * pi * pi * std::sin(0.3))));
  // dyadic block trace
  double vol = 2 * pi * pi;
  CHECK(dyadic_projection(2, 0.0) * vol == doctest::Approx(16 + 25 + 36 + 49));
  // closed form against the sine-propagator formula, on exp(<x0, y>)
  Vec4 o(1, 0, 0, 0);
  ZonalFunction z{o, [](double c) { return std::exp(c); }, {}, -1};
  auto F = as_test_function({z});
  for (int ell : {0, 3, 9}) {
    auto x = manifold::polar_point(S3, 0.7, Eigen::Vector3d(0, 0, 1));
    double direct = (ell + 1) / (2 * pi * pi) * funk_hecke(z, ell) * chebyshev_u(ell, std::cos(0.7));
    CHECK(projection_via_sine(ell, F, x) == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("Parseval on the oracle") {
  std::mt19937_64 g(9);
  auto f = oracle::random_band_limited(g, 1, 7);
  auto& z = f[0];
  double norm2 = 4 * pi * integrate_panels([&](double th) {
    double v = z.F(std::cos(th));
    return v * v * std::sin(th) * std::sin(th);
  }, 0, pi, {}, 0.2, 20);
  double sum = 0;
  for (int ell = 0; ell <= 7; ++ell) {
    double mu = funk_hecke(z, ell);
    sum += (ell + 1) * (ell + 1) * mu * mu / (2 * pi * pi);
  }
  CHECK(sum == doctest::Approx(norm2).epsilon(1e-12));
}

TEST_CASE("truncation estimate for non band-limited data") {
  ZonalFunction z{Vec4(1, 0, 0, 0), [](double c) { return 1.0 / (1.3 - c); }, {}, -1};
  auto v = spectral_sine_apply({z}, 0.4, Vec4(0, 1, 0, 0), 16);
  CHECK(v.truncation > 0.0);
  auto w = spectral_sine_apply({z}, 0.4, Vec4(0, 1, 0, 0), 64);
  CHECK(w.truncation < v.truncation);
  CHECK(std::abs(w.value - v.value) < 10 * v.truncation);
}

TEST_CASE("profile interpolation") {
  SphericalProfile p;
  p.origin = manifold::origin(H3);
  for (int i = 0; i <= 200; ++i) {
    double r = 0.02 * i;
    p.r.push_back(r);
    p.f.push_back(std::exp(-r * r));
  }
  auto F = p.function(H3);
  auto exact = radial_function(H3, p.origin, [](double d) { return std::exp(-d * d); });
  auto x = manifold::polar_point(H3, 0.5, Eigen::Vector3d(1, 0, 0));
  CHECK(apply_sine(H3, 0.8, F, x) == doctest::Approx(apply_sine(H3, 0.8, exact, x)).epsilon(1e-5));
}
