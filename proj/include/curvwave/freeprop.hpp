#pragma once

#include <functional>
#include <vector>

#include "curvwave/common.hpp"
#include "curvwave/manifold.hpp"

namespace curvwave::freeprop {

using Space = manifold::Space<double>;
using Point = manifold::Point<double>;

// one time slice of a kernel radial about its source point
struct RadialKernel {
  double t = 0.0;
  double shell_coeff = 0.0;          // multiplies delta_{d = t}
  std::vector<double> ac_grid;       // radii of the absolutely continuous part
  std::vector<double> ac_profile;    // empty for free kernels
  double shell_mass(const Space& sp) const {
    double j = sp.j(t);
    return shell_coeff * 4.0 * pi * j * j;
  }
};

RadialKernel sine_kernel(const Space& sp, double t);

// function restricted from the ambient R^4; gradient is the ambient one (optional)
struct TestFunction {
  std::function<double(const Vec4&)> value;
  std::function<Vec4(const Vec4&)> gradient;
};

TestFunction constant_function(double c);
// f(y) = F(d(origin, y))
TestFunction radial_function(const Space& sp, const Point& origin, std::function<double(double)> F,
                             std::function<double(double)> dF = {});

// sampled radial profile about an origin, interpolated (makima)
struct SphericalProfile {
  Point origin;
  std::vector<double> r, f;
  int band_limit = -1;  // S3 only; -1 unknown
  TestFunction function(const Space& sp) const;
};

struct SphereRule {
  int level = 24;      // S2 product rule, exact up to degree 2*level-1
  double tol = 0.0;    // > 0: compare with a doubled rule and throw if worse
};

double apply_sine(const Space& sp, double t, const TestFunction& f, const Point& x,
                  SphereRule rule = {});
double apply_cosine(const Space& sp, double t, const TestFunction& f, const Point& x,
                    SphereRule rule = {});

struct FundamentalCheck {
  double r;
  double integral;      // int |S0(t)(r)| dt
  double closed_form;   // 1 / (4 pi j(r))
  double j_weighted;    // int j(t) |S0(t)(r)| dt, expect 1/(4 pi)
  double t_weighted;    // int t |S0(t)(r)| dt, at most 1/(4 pi) on H3
  double rel_error;
};

// the shell is mollified in t by a Gaussian of width sigma and the result
// extrapolated to sigma -> 0 (Richardson in sigma^2, three levels)
FundamentalCheck fundamental_integral_check(const Space& sp, double r, double sigma = 0.01);

// --- S3 spectral side -------------------------------------------------------

double chebyshev_u(int ell, double c);
double zonal_projection(int ell, double theta);
double dyadic_projection(int k, double theta);

// zonal function F(<origin, y>) on S3, the building block of the spectral oracle
struct ZonalFunction {
  Vec4 origin;
  std::function<double(double)> F;   // of the cosine
  std::function<double(double)> dF;  // optional
  int band_limit = -1;
};

// sum_l b_l U_l(<origin, y>)
ZonalFunction zonal_polynomial(const Vec4& origin, const std::vector<double>& b);
TestFunction as_test_function(const std::vector<ZonalFunction>& f);

struct SpectralValue {
  double value = 0.0;
  double truncation = 0.0;  // estimate, zero if every piece is band-limited below the cap
};

// Funk-Hecke coefficient mu_l, P_l f(x) = (l+1)/(2 pi^2) mu_l U_l(<x,o>)
double funk_hecke(const ZonalFunction& f, int ell, int nodes = 0);

SpectralValue spectral_apply(const std::vector<ZonalFunction>& f, const Vec4& x,
                             const std::function<double(int)>& multiplier, int ell_max = 64);
SpectralValue spectral_sine_apply(const std::vector<ZonalFunction>& f, double t, const Vec4& x,
                                  int ell_max = 64);
SpectralValue spectral_cosine_apply(const std::vector<ZonalFunction>& f, double t, const Vec4& x,
                                    int ell_max = 64);

// P_l f(x) = ((l+1)/pi) int_0^{2pi} (S0(t) f)(x) sin(t(l+1)) dt, trapezoid in t
double projection_via_sine(int ell, const TestFunction& f, const Point& x, int t_nodes = 128,
                           SphereRule rule = {});

}  // namespace curvwave::freeprop
