#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "curvwave/oracles.hpp"
#include "curvwave/schrodinger.hpp"

using namespace curvwave;
using namespace curvwave::schrodinger;

namespace {
const auto H3 = manifold::Space<double>::hyperbolic();
}

TEST_CASE("Filon panel is exact on polynomials") {
  for (double t : {0.3, 5.0, 80.0}) {
    auto G = [](double u) { return 1 + u - 0.5 * u * u * u; };
    cplx f = filon_panel(t, G, 1.0, 2.5, 10);
    // reference by many small Gauss panels
    double re = integrate_panels([&](double u) { return std::cos(t * u) * G(u); }, 1.0, 2.5, {}, 0.005, 20);
    double im = integrate_panels([&](double u) { return std::sin(t * u) * G(u); }, 1.0, 2.5, {}, 0.005, 20);
    CHECK(std::abs(f - cplx(re, im)) < 1e-11);
  }
}

TEST_CASE("oscillatory route against the closed form") {
  double worst = 0.0;
  for (double t : {0.5, 1.0, 3.0, 10.0, 50.0})
    for (double r : {0.0, 0.01, 0.5, 1.0, 3.0, 7.0, 10.0}) {
      cplx a = free_kernel_value(t, r), b = oracle::schrodinger_free_closed_form(t, r);
      worst = std::max(worst, std::abs(a - b) / std::abs(b));
    }
  CHECK(worst < 1e-6);
}

TEST_CASE("modulus law, small r limit and hermitian symmetry") {
  for (double t : {1.0, 4.0, 20.0}) {
    double c = std::pow(4 * pi * t, 1.5);
    CHECK(std::abs(free_kernel_value(t, 0.0)) * c == doctest::Approx(1.0).epsilon(1e-8));
    for (double r : {0.5, 2.0, 6.0})
      CHECK(std::abs(free_kernel_value(t, r)) * c * std::sinh(r) / r == doctest::Approx(1.0).epsilon(1e-7));
    cplx p = free_kernel_value(t, 1.3), m = free_kernel_value(-t, 1.3);
    CHECK(std::abs(m - std::conj(p)) < 1e-8 * std::abs(p));
  }
  CHECK_THROWS_AS(free_kernel_value(0.0, 1.0), DomainError);
}

TEST_CASE("decay scan of the free kernel") {
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(0.25 * i);
  auto rows = decay_scan([&](double t) { return free_kernel_oscillatory(t, grid); }, {1.0, 2.0, 5.0, 17.0, 50.0});
  for (auto& r : rows) CHECK(r.scaled == doctest::Approx(std::pow(4 * pi, -1.5)).epsilon(1e-6));
}

TEST_CASE("time-domain route") {
  auto L = parametrix::make_lattice(H3, 0.01, 12.0);
  auto S0 = parametrix::free_kernel(L);
  // the free shell is transformed exactly at the nodes
  for (double t : {1.0, 3.0}) {
    auto k = perturbed_kernel(S0, t, 5.0);
    for (size_t i = 0; i < k.r.size(); i += 37) {
      cplx ex = free_kernel_value(t, k.r[i]);
      CHECK(std::abs(k.K[i] - ex) < 1e-4 * std::abs(ex));
    }
    CHECK(k.truncation == 0.0);
  }
  // first Born correction against direct quadrature of the closed-form wave term
  auto V = kato::ball_potential(0.05, 1.0);
  auto W1 = parametrix::convolve(S0, parametrix::multiply_potential(S0, V));
  W1 *= -1.0;
  for (double t : {1.0, 2.0, 5.0}) {
    auto k = perturbed_kernel(W1, t, 3.0);
    for (int i : {49, 99, 199}) {
      cplx ex = oracle::schrodinger_born_first_order(V, t, k.r[i]);
      CHECK(std::abs(k.K[i] - ex) < 1e-3 * std::abs(ex));
    }
  }
  // V = 0 leaves the free kernel
  auto s = parametrix::born_series_potential(S0, kato::zero_potential(), 4, 1e-12);
  auto a = perturbed_kernel(s.sum, 2.0, 4.0), b = perturbed_kernel(S0, 2.0, 4.0);
  for (size_t i = 0; i < a.K.size(); ++i) CHECK(a.K[i] == b.K[i]);
}

TEST_CASE("unitarity proxy") {
  CHECK(unitarity_proxy(0.0, 60.0) == doctest::Approx(unitarity_initial()).epsilon(1e-10));
  for (double t : {0.5, 2.0, 5.0})
    CHECK(unitarity_proxy(t, 60.0) == doctest::Approx(unitarity_initial()).epsilon(1e-8));
  // closed form of the evolved datum at one point
  double t = 0.7, rho = 1.1;
  cplx z = cplx(1.0, -2.0 * t);
  cplx ex = rho * std::exp(-rho * rho / (2.0 * z)) / std::pow(z, 1.5);
  auto g = [rho](double l) { return std::sqrt(pi / 2) * l * std::exp(-0.5 * l * l) * std::sin(l * rho); };
  CHECK(std::abs(2.0 / pi * oscillatory_integral(t, g, 12.0, rho + 1.0) - ex) < 1e-10);
}
