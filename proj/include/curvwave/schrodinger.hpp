#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "curvwave/common.hpp"
#include "curvwave/parametrix.hpp"

namespace curvwave::schrodinger {

using cplx = std::complex<double>;

// radial profile of the kernel of exp(i t H) on H3 about the origin
struct SchrodingerKernel {
  double t = 0.0;
  std::vector<double> r;
  std::vector<cplx> K;
  double truncation = 0.0;  // estimate of the neglected time tail, time-domain route only
  double sup_abs() const;
};

struct OscillatoryRule {
  int degree = 10;           // Chebyshev degree per Filon panel
  double panel_phase = 2.0;  // radians of amplitude oscillation allowed per panel
  double fresnel = 40.0;     // 2 t A^2 at the start of the asymptotic tail
  int gl_order = 24;
};

// int_a^b exp(i t u) G(u) du with G interpolated at Chebyshev points (moments exact)
cplx filon_panel(double t, const std::function<double(double)>& G, double a, double b, int degree);

// int_0^Lambda exp(i t l^2) g(l) dl: Gauss-Legendre near 0, Filon in u = l^2 beyond.
// `freq` bounds the oscillation rate of g in l.
cplx oscillatory_integral(double t, const std::function<double(double)>& g, double lambda_max,
                          double freq, const OscillatoryRule& rule = {});

// int_0^inf exp(i t l^2) l sin(l r) dl, the upper tail summed by completing the square
cplx spectral_integral(double t, double r, const OscillatoryRule& rule = {});

// K(t, r) = (2 pi^2 sinh r)^{-1} int_0^inf exp(i t l^2) l sin(l r) dl
cplx free_kernel_value(double t, double r, const OscillatoryRule& rule = {});
SchrodingerKernel free_kernel_oscillatory(double t, const std::vector<double>& r_grid,
                                          const OscillatoryRule& rule = {}, int threads = 1);
SchrodingerKernel free_kernel_closed(double t, const std::vector<double>& r_grid);

// time-domain route: K(t) = (1 / 2 pi t) int i s S(s) Phi_t(s) ds with
// Phi_t(s) = sqrt(pi / (-i t)) exp(-i s^2 / (4 t)), S a lattice sine kernel
cplx fresnel_factor(double t, double s);
SchrodingerKernel perturbed_kernel(const parametrix::SpaceTimeKernel& S, double t, double r_max);

struct DecayRow {
  double t, sup, scaled;  // scaled = t^{3/2} sup
};
std::vector<DecayRow> decay_scan(const std::function<SchrodingerKernel(double)>& source,
                                 const std::vector<double>& t_list);

// |exp(i t H0) u0|^2 over the ball of radius R for the radial datum u0 = r exp(-r^2/2) / sinh r
double unitarity_proxy(double t, double R, int nodes = 800);
double unitarity_initial();  // pi^{3/2}

}  // namespace curvwave::schrodinger
