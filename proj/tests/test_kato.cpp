#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "curvwave/kato.hpp"

using namespace curvwave;
using namespace curvwave::kato;

namespace {
const Space H = Space::hyperbolic();
}

TEST_CASE("zero potential") {
  auto z = zero_potential();
  CHECK(kato_norm(H, z).value == 0.0);
  CHECK(modified_kato_norm(H, z).value == 0.0);
  CHECK(l1_gamma_norm(H, z).value == 0.0);
}

TEST_CASE("ball potential: center value and sup") {
  auto V = ball_potential(1.0, 1.0);
  double center = 4 * pi * (std::cosh(1.0) - 1.0);
  CHECK(weighted_integral(H, V, 0.0, Weight::Kato, 0, {}) == doctest::Approx(center).epsilon(1e-13));
  // off-center closed form: (4 pi / sinh rho) int sinh(r) min(r, rho) dr
  double rho = 0.6;
  double ex = 4 * pi / std::sinh(rho) *
              ((rho * std::cosh(rho) - std::sinh(rho)) + rho * (std::cosh(1.0) - std::cosh(rho)));
  CHECK(weighted_integral(H, V, rho, Weight::Kato, 0, {}) == doctest::Approx(ex).epsilon(1e-12));
  auto n = kato_norm(H, V);
  CHECK(n.value >= center * (1 - 1e-12));
  CHECK(n.argmax_rho == 0.0);
  CHECK(n.diagnostic.empty());
  // homogeneity
  CHECK(kato_norm(H, ball_potential(0.05, 1.0)).value == doctest::Approx(0.05 * n.value).epsilon(1e-13));
}

TEST_CASE("refinement and ordering of the norms") {
  auto V = ball_potential(1.0, 1.0);
  Sampler fine;
  fine.order = 32;
  fine.panel = 0.125;
  fine.points = 121;
  for (auto w : {Weight::Kato, Weight::Modified, Weight::Delta}) {
    for (double rho : {0.0, 0.3, 1.0, 2.2}) {
      double a = weighted_integral(H, V, rho, w, 0.1, {});
      double b = weighted_integral(H, V, rho, w, 0.1, fine);
      CHECK(std::abs(a - b) < 1e-6 * a);
      // 1/min(1,d) >= 1 and >= 1/j_delta-type weights only for d<1; check L1 monotonicity
      CHECK(weighted_integral(H, V, rho, Weight::Modified, 0, {}) >= l1_norm(H, V) * (1 - 1e-12));
    }
  }
  auto g = gaussian_potential(1.0, 0.7);
  CHECK(std::abs(modified_kato_norm(H, g).value - modified_kato_norm(H, g, fine).value) <
        1e-6 * modified_kato_norm(H, g).value);
  auto rep = kato_report(H, V, 0.1);
  CHECK(rep.delta_norm.finite);
  CHECK(rep.modified.value >= rep.l1);
  CHECK(rep.kato.value <= rep.delta_norm.value);
}

TEST_CASE("divergence and embedding family") {
  auto slow = exponential_potential(1.0, 1.5);
  CHECK(kato_norm(H, slow).finite);
  CHECK_FALSE(modified_kato_norm(H, slow).finite);
  CHECK(modified_kato_norm(H, slow).value == inf);
  CHECK_FALSE(kato_norm(H, exponential_potential(1.0, 0.5)).finite);
  double prev = inf;
  for (double p : {2.5, 3.0, 4.0}) {
    auto n = modified_kato_norm(H, power_potential(p, -1.0));
    CHECK(n.finite);
    CHECK(n.value < prev);
    prev = n.value;
  }
  CHECK_FALSE(modified_kato_norm(H, power_potential(2.0, -1.0)).finite);
}

TEST_CASE("sup is moved off the sweep edge") {
  // shell far out: the 1/d singularity puts the sup near rho = 3
  RadialPotential V;
  V.V = [](double r) { return std::exp(-20 * (r - 3) * (r - 3)); };
  V.support = 6.0;
  Sampler s;
  s.rho_max = 2.5;
  auto n = modified_kato_norm(H, V, s);
  CHECK(n.extended);
  CHECK(n.argmax_rho > 2.5);
  CHECK(n.argmax_rho < 3.5);
  CHECK(n.diagnostic.empty());
}

TEST_CASE("geodesic L1 norms") {
  CHECK(l1_gamma_norm(H, ball_potential(1.0, 1.0)).value == doctest::Approx(2.0).epsilon(1e-12));
  RadialPotential e;
  e.V = [](double r) { return std::exp(-r); };
  e.decay_rate = 1.0;
  auto n = l1_gamma_norm(H, e);
  CHECK(n.value == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(n.argmax_rho == 0.0);
  CHECK(l1_gamma_norm(Space::flat(), ball_potential(1.0, 1.0)).value == doctest::Approx(2.0));
}

TEST_CASE("flat space Kato norm of a ball") {
  // int_{|y|<1} 1/|y| dy = 2 pi
  CHECK(kato_norm(Space::flat(), ball_potential(1.0, 1.0)).value == doctest::Approx(2 * pi).epsilon(1e-12));
}
