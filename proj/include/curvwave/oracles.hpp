#pragma once

// Independent reference computations used by tests, the acceptance suite and the cli.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "curvwave/freeprop.hpp"
#include "curvwave/kato.hpp"
#include "curvwave/parametrix.hpp"

namespace curvwave::oracle {

Vec4 random_s3_point(std::mt19937_64& g);

// a few zonal polynomials of degree <= L about random axes, coefficients O(1)
std::vector<freeprop::ZonalFunction> random_band_limited(std::mt19937_64& g, int pieces, int L);

// H3 free Schroedinger kernel by completing the square in the spectral integral
std::complex<double> schrodinger_free_closed_form(double t, double r);

// first Born term for a point source: W1(t, rho) = -(1/8 pi) int_{(t-rho)/2}^{(t+rho)/2} V
double born_first_order(const kato::RadialPotential& V, double t, double rho);

// random shell weights and AC values inside the light cone, O(1) entries of both signs
parametrix::SpaceTimeKernel random_kernel(const parametrix::Lattice& L, std::mt19937_64& g);

// first Born correction of exp(i t H): the time-domain transform applied to the closed-form
// first Born wave term, by direct quadrature in s
std::complex<double> schrodinger_born_first_order(const kato::RadialPotential& V, double t, double rho);

struct MonteCarloValue {
  double value = 0.0;
  double std_error = 0.0;
};

// -int_0^t int_M S0(t-s)(x1, y) V(y) (S0(s) f)(y) dy ds at d(x1, origin) = rho on H3 by sampling
// (s, direction) on the geodesic spheres about x1; f radial about the origin with compact support
MonteCarloValue born_first_order_mc(const kato::RadialPotential& V, const std::function<double(double)>& f,
                                    double f_support, double t, double rho, long samples,
                                    std::uint64_t seed);

// Characteristic (Goursat) solver of w_tt - w_rr + q(r) w = 0 on 0 < r < t in w = j u form,
// source a shell of weight m at r = t and odd reflection at r = 0. Returns w on a grid
// of step `step` in u = t - r, v = t + r; Richardson over step and step/2.
class RadialWaveReference {
 public:
  RadialWaveReference(std::function<double(double)> q, double m, double t_max, double step);
  double operator()(double t, double rho) const;  // interior values, 0 <= rho < t

 private:
  struct Grid {
    double h;
    int n;
    std::vector<double> w;
    double at(double u, double v) const;
  };
  static Grid solve(const std::function<double(double)>& q, double m, double t_max, double h);
  Grid coarse_, fine_;
};

}  // namespace curvwave::oracle
