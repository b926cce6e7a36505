#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "curvwave/oracles.hpp"
#include "curvwave/parametrix.hpp"

using namespace curvwave;
using namespace curvwave::parametrix;

namespace {

const Space H3 = Space::hyperbolic();

double rel_diff(const SpaceTimeKernel& a, const SpaceTimeKernel& b) {
  return (a - b).max_abs() / std::max(a.max_abs(), b.max_abs());
}

}  // namespace

TEST_CASE("identity element and lattice bookkeeping") {
  auto L = make_lattice(H3, 0.05, 1.0);
  std::mt19937_64 g(1);
  auto F = oracle::random_kernel(L, g);
  auto I = identity_kernel(L);
  CHECK(rel_diff(convolve(F, I), F) < 1e-15);
  CHECK(rel_diff(convolve(I, F), F) < 1e-15);
  CHECK(L.lambda() * L.h == doctest::Approx(2.0).epsilon(1e-3));
  auto L2 = make_lattice(H3, 0.1, 1.0);
  CHECK_THROWS_AS(convolve(F, free_kernel(L2)), DomainError);
  CHECK_THROWS_AS(make_lattice(Space::sphere(), 0.1, 1.0), DomainError);
}

TEST_CASE("associative and commutative on random kernels") {
  auto L = make_lattice(H3, 0.05, 1.0);
  std::mt19937_64 g(7);
  for (int rep = 0; rep < 3; ++rep) {
    auto F = oracle::random_kernel(L, g), G = oracle::random_kernel(L, g), H = oracle::random_kernel(L, g);
    auto left = convolve(convolve(F, G), H);
    auto right = convolve(F, convolve(G, H));
    CHECK(rel_diff(left, right) < 1e-12);
    CHECK(rel_diff(convolve(F, G), convolve(G, F)) < 1e-12);
  }
}

TEST_CASE("norm inequalities and the t derivation") {
  auto L = make_lattice(H3, 0.05, 2.0);
  std::mt19937_64 g(11);
  auto j = [&](double t) { return L.j(t); };
  auto jp = [&](double t) { return L.jp(t); };
  for (int rep = 0; rep < 10; ++rep) {
    auto F = oracle::random_kernel(L, g), G = oracle::random_kernel(L, g);
    auto FG = convolve(F, G);
    CHECK(u_l1(FG) <= u_l1(F) * u_l1(G) * (1 + 1e-12));
    CHECK(u_l1_linf(FG) <= u_l1_linf(F) * u_l1(G) * (1 + 1e-12));
    CHECK(u_l1(FG, j) <= u_l1(F, j) * u_l1(G, jp) + u_l1(F, jp) * u_l1(G, j) + 1e-12);
    CHECK(u_l1_linf(FG, j) <= u_l1_linf(F, j) * u_l1(G, jp) + u_l1_linf(F, jp) * u_l1(G, j) + 1e-12);
    CHECK(u_l1(FG, jp) <= 2 * u_l1(F, jp) * u_l1(G, jp));
    CHECK(u_l1_linf(FG, jp) <= 2 * u_l1_linf(F, jp) * u_l1(G, jp));
    auto tw = [](double t) { return t; };
    auto lhs = time_weighted(FG, tw);
    auto rhs = convolve(time_weighted(F, tw), G) + convolve(F, time_weighted(G, tw));
    CHECK(rel_diff(lhs, rhs) < 1e-13);
  }
}

TEST_CASE("free kernel norms reproduce the fundamental integrals") {
  auto L = make_lattice(H3, 0.01, 6.0);
  auto S0 = free_kernel(L);
  auto n = weighted_u_norms(S0, 0.1);
  CHECK(n.j_l1_linf == doctest::Approx(1 / (4 * pi)).epsilon(1e-12));
  CHECK(n.t_l1_linf <= 1 / (4 * pi) * (1 + 1e-12));
  CHECK(n.u_l1_linf == doctest::Approx(1 / (4 * pi * std::sinh(0.01))).epsilon(1e-12));
  CHECK(slice_mass(S0, 300) == doctest::Approx(std::sinh(3.0)).epsilon(1e-12));
  CHECK(n.diagnostic.empty());
  CHECK(u_l1_linf(identity_kernel(L)) == inf);
}

TEST_CASE("first Born term against the closed form") {
  auto L = make_lattice(H3, 0.01, 3.0);
  auto V = kato::ball_potential(0.05, 1.0);
  auto S0 = free_kernel(L);
  auto W1 = convolve(S0, multiply_potential(S0, V));
  W1 *= -1.0;
  double worst = 0.0;
  for (auto [k, i] : {std::pair{100, 40}, {150, 120}, {200, 50}, {250, 170}, {300, 250}, {120, 119}}) {
    double ex = oracle::born_first_order(V, L.t(k), L.rho(i));
    worst = std::max(worst, std::abs(W1.ac(k, i) - ex) / std::abs(ex));
  }
  CHECK(worst < 1e-3);
  // on the cone the node holds half the inner limit
  double cone = oracle::born_first_order(V, 2.0, 2.0 - 1e-12);
  CHECK(W1.ac(200, 200) == doctest::Approx(0.5 * cone).epsilon(1e-3));
  // nothing outside the cone
  CHECK(W1.ac(100, 150) == 0.0);
}

TEST_CASE("Born series: zero potential, divergence and the PDE oracle") {
  auto L = make_lattice(H3, 0.01, 3.0);
  auto S0 = free_kernel(L);
  auto zero = born_series_potential(S0, kato::zero_potential(), 8, 1e-12);
  CHECK(zero.converged);
  CHECK(rel_diff(zero.sum, S0) == 0.0);
  CHECK_THROWS_AS(born_series_potential(S0, kato::ball_potential(-40.0, 1.0), 8, 1e-12), DivergenceError);

  auto V = kato::ball_potential(0.05, 1.0);
  auto s = born_series_potential(S0, V, 12, 1e-10);
  CHECK(s.converged);
  for (double r : s.ratios) CHECK(r < 0.2);
  oracle::RadialWaveReference ref(V.V, 1 / (4 * pi), 3.0, 0.01);
  for (auto [k, i] : {std::pair{100, 40}, {180, 60}, {250, 150}, {290, 200}}) {
    double ex = ref(L.t(k), L.rho(i));
    CHECK(std::abs(s.sum.ac(k, i) - ex) < 1e-3 * std::abs(ex));
  }
}

TEST_CASE("first Born term applied to a bump against Monte-Carlo") {
  auto f = [](double r) { return r < 1.0 ? std::pow(1 - r * r, 3) : 0.0; };
  auto L = make_lattice(H3, 0.01, 2.0, 1.0);
  auto V = kato::ball_potential(0.05, 1.0);
  auto G0 = free_evolution(L, f, 1.0);
  auto G1 = convolve(free_kernel(L), multiply_potential(G0, V));
  G1 *= -1.0;
  double t = 1.5, rho = 0.5;
  auto mc = oracle::born_first_order_mc(V, f, 1.0, t, rho, 10000000, 2024);
  double lat = G1.ac_value(150, 50);
  CHECK(std::abs(lat - mc.value) < 1e-3 * std::abs(mc.value));
  CHECK(mc.std_error < 1e-3 * std::abs(mc.value));
  MESSAGE("lattice ", lat, " monte-carlo ", mc.value, " +- ", mc.std_error);
}

TEST_CASE("free evolution matches the geometric sine propagator") {
  auto f = [](double r) { return r < 1.0 ? std::pow(1 - r * r, 3) : 0.0; };
  auto L = make_lattice(H3, 0.01, 2.0, 1.0);
  auto G0 = free_evolution(L, f, 1.0);
  auto o = manifold::origin(H3);
  auto F = freeprop::radial_function(H3, o, f);
  auto x = manifold::polar_point(H3, 0.7, Eigen::Vector3d(0, 0, 1));
  double geo = freeprop::apply_sine(H3, 1.2, F, x, {64, 0.0});
  CHECK(G0.ac_value(120, 70) == doctest::Approx(geo).epsilon(1e-6));
}

TEST_CASE("parametrix in constant curvature") {
  auto L = make_lattice(H3, 0.01, 4.0);
  auto a = area_exact(H3);
  CHECK(rel_diff(perturbed_parametrix(L, a), free_kernel(L)) < 1e-14);
  std::vector<double> grid;
  for (int i = 1; i <= 400; ++i) grid.push_back(0.01 * i);
  auto e = error_term(a, grid);
  for (double v : e.value) CHECK(std::abs(v) < 1e-8);
  auto path = jacobi::integrate_transport(-1.0, jacobi::builtin_perturbation(jacobi::Profile::Gaussian, 0.0), 5.0);
  auto ep = error_term(area_from_path(path), grid);
  for (double v : ep.value) CHECK(std::abs(v) < 1e-12);
  // error from tabulated samples of j^2, fourth order differences
  std::vector<double> r, av;
  for (int i = 0; i <= 400; ++i) {
    r.push_back(0.1 + 0.01 * i);
    av.push_back(std::pow(std::sinh(r.back()), 2));
  }
  auto tab = area_from_samples(-1.0, r, av);
  for (double x : {0.5, 1.0, 3.0}) CHECK(std::abs(error_value(tab, x)) < 1e-6);
  AreaProfile bad;
  bad.at = [](double) { return jacobi::AreaSample{-1, 0, 0}; };
  CHECK_THROWS_AS(perturbed_parametrix(L, bad), ConjugatePointError);
}

TEST_CASE("perturbed parametrix: mass ratio and error size") {
  for (auto p : {jacobi::Profile::Gaussian, jacobi::Profile::Compact}) {
    for (double eps : {1e-3, 1e-2, 1e-1}) {
      auto path = jacobi::integrate_transport(-1.0, jacobi::builtin_perturbation(p, eps), 6.0);
      auto a = area_from_path(path);
      auto L = make_lattice(H3, 0.01, 5.0);
      auto S = perturbed_parametrix(L, a);
      for (int k = 1; k <= L.K; k += 7) {
        double ratio = slice_mass(S, k) / L.j(L.t(k));
        CHECK(std::abs(ratio - 1) <= 2 * eps);
      }
      std::vector<double> grid;
      for (int i = 1; i <= 600; ++i) grid.push_back(0.01 * i);
      auto e = error_term(a, grid);
      CHECK(e.l1 <= 2 * eps);
      CHECK(e.sup_j <= 2 * eps);
      CHECK(e.l1 > 0.5 * eps);
    }
  }
  // trace-free perturbations only enter at second order
  auto path = jacobi::integrate_transport(-1.0, jacobi::builtin_perturbation(jacobi::Profile::Gaussian, 0.01, true), 6.0);
  auto e = error_term(area_from_path(path), {0.2, 0.5, 1.0, 2.0});
  for (double v : e.value) CHECK(std::abs(v) < 1e-3);
}

TEST_CASE("error series: factorial decay and residual against the PDE oracle") {
  auto L = make_lattice(H3, 0.01, 5.0);
  {
    auto S0 = free_kernel(L);
    auto s = iterate_error_series(S0, SpaceTimeKernel(L), 5, 1e-12);
    CHECK(s.terms == 2);
    CHECK(s.converged);
    CHECK(rel_diff(s.sum, S0) == 0.0);
  }
  double eps = 0.01;
  auto path = jacobi::integrate_transport(-1.0, jacobi::builtin_perturbation(jacobi::Profile::Gaussian, eps), 6.0);
  auto a = area_from_path(path);
  auto S0 = perturbed_parametrix(L, a);
  auto E = error_kernel(L, a);
  auto s = iterate_error_series(S0, E, 6, 1e-14);
  double C = factorial_fit(s.term_l1, eps, 5.0);
  CHECK(C > 0.0);
  CHECK(C <= 4.0);
  for (size_t n = 1; n < s.ratios.size(); ++n) CHECK(s.ratios[n] < s.ratios[n - 1] * 1.01);

  // w = sqrt(a) u solves w_tt - w'' - sqrt(a) Error w = 0 with shell weight 1/(4 pi)
  auto q = [&](double r) { return r < 1e-6 ? -0.5 * path.field().A1(0).trace() : -std::sqrt(a.at(r).a) * error_value(a, r); };
  oracle::RadialWaveReference ref(q, 1 / (4 * pi), 4.0, 0.01);
  double r0 = 0, r1 = 0;
  for (auto [k, i] : {std::pair{100, 50}, {200, 120}, {300, 220}, {380, 300}, {250, 100}}) {
    double exact = ref(L.t(k), L.rho(i));
    double w = s.sum.ac_value(k, i) * std::sqrt(a.at(L.rho(i)).a);
    r0 = std::max(r0, std::abs(exact));
    r1 = std::max(r1, std::abs(w - exact));
  }
  CHECK(r1 * 10 < r0);
}
