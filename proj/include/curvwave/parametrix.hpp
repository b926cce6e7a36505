#pragma once

#include <functional>
#include <string>
#include <vector>

#include "curvwave/common.hpp"
#include "curvwave/freeprop.hpp"
#include "curvwave/jacobi.hpp"
#include "curvwave/kato.hpp"
#include "curvwave/manifold.hpp"

namespace curvwave::parametrix {

using Space = manifold::Space<double>;

// Kernels are radial about a common origin and stored on the characteristic lattice
// t_k = k h, rho_i = i h. Values are kept in the form w = j(rho) u, in which the
// radial shifted Laplacian is -d^2/drho^2 and a shell c delta_{d=t} has weight m = c j(t).
struct Lattice {
  Space space = Space::hyperbolic();
  double h = 0.01;
  int K = 0;  // time nodes 0..K
  int N = 0;  // radial nodes 0..N, N >= K
  double t(int k) const { return k * h; }
  double rho(int i) const { return i * h; }
  double j(double r) const { return space.j(r); }
  double jp(double r) const { return space.jp(r); }
  // trapezoid normalisation making the discrete spherical mean exact on j
  double lambda() const;
  bool operator==(const Lattice& o) const {
    return space.kappa0 == o.space.kappa0 && h == o.h && K == o.K && N == o.N;
  }
};

// h, final time and radial extent beyond the light cone
Lattice make_lattice(const Space& sp, double h, double t_max, double extra = 0.0);

struct SpaceTimeKernel {
  Lattice L;
  double identity = 0.0;      // coefficient of delta(t) x delta_{x0}
  std::vector<double> shell;  // m_k, weight of delta_{d = t_k} in w form
  Eigen::MatrixXd ac;         // (K+1) x (N+1) w values; on i = k the mean of both sides
  bool radial = true;         // center-symmetry flag

  explicit SpaceTimeKernel(const Lattice& l = {});
  double shell_coeff(int k) const;       // c_k = m_k / j(t_k)
  double ac_value(int k, int i) const;   // u = w / j(rho_i), i >= 1
  // w values with the shell folded in as m / h on i = k
  double nodal(int k, int i) const;
  freeprop::RadialKernel slice(int k) const;
  SpaceTimeKernel& operator+=(const SpaceTimeKernel& o);
  SpaceTimeKernel& operator*=(double s);
  double max_abs() const;
};

SpaceTimeKernel operator+(SpaceTimeKernel a, const SpaceTimeKernel& b);
SpaceTimeKernel operator-(SpaceTimeKernel a, const SpaceTimeKernel& b);
SpaceTimeKernel operator*(double s, SpaceTimeKernel a);

SpaceTimeKernel identity_kernel(const Lattice& L);
// sine propagator of the unperturbed space, m = 1/(4 pi)
SpaceTimeKernel free_kernel(const Lattice& L);
// shell weight m(t) (w form) on every slice
SpaceTimeKernel shell_kernel(const Lattice& L, const std::function<double(double)>& m);
// S0 applied to a radial datum f about the origin (d'Alembert in w form)
SpaceTimeKernel free_evolution(const Lattice& L, const std::function<double(double)>& f,
                               double support);
// V(rho) K(t)(rho)
SpaceTimeKernel multiply_potential(const SpaceTimeKernel& K, const kato::RadialPotential& V);
// weight(t) K(t)
SpaceTimeKernel time_weighted(const SpaceTimeKernel& K, const std::function<double(double)>& w);

SpaceTimeKernel convolve(const SpaceTimeKernel& F, const SpaceTimeKernel& G, int threads = 1);

// --- norms -------------------------------------------------------------------

// int |K(t)| dx on one slice
double slice_mass(const SpaceTimeKernel& K, int k);
// U(L1): int dt of the slice masses; U(L1, Linf): sup_rho int |K(t)(rho)| dt
double u_l1(const SpaceTimeKernel& K, const std::function<double(double)>& w = {});
double u_l1_linf(const SpaceTimeKernel& K, const std::function<double(double)>& w = {});
// sup_t of the slice mass (the L^inf_t L^1_x size)
double sup_mass(const SpaceTimeKernel& K);

struct UNorms {
  double u_l1 = 0, u_l1_linf = 0;
  double t_l1 = 0, t_l1_linf = 0;
  double j_l1 = 0, j_l1_linf = 0;
  double jp_l1 = 0, jp_l1_linf = 0;
  double jd_l1 = 0, jd_l1_linf = 0;    // j_delta
  double jdp_l1 = 0, jdp_l1_linf = 0;  // j_delta'
  std::string diagnostic;
};
UNorms weighted_u_norms(const SpaceTimeKernel& K, double delta);

// --- perturbed metric --------------------------------------------------------

// area element a(r) with a'(r), a''(r); either from a transport path or tabulated
struct AreaProfile {
  std::function<jacobi::AreaSample(double)> at;
  double kappa0 = -1.0;
  double r_max = inf;
  const jacobi::TransportPath* path = nullptr;  // enables the cancellation-free error formula
};
AreaProfile area_from_path(const jacobi::TransportPath& p);
AreaProfile area_exact(const Space& sp);  // a = j^2
// samples of a only; derivatives by fourth order differences
AreaProfile area_from_samples(double kappa0, std::vector<double> r, std::vector<double> a);

// S0 = (4 pi sqrt a)^{-1} delta_{d=t}
SpaceTimeKernel perturbed_parametrix(const Lattice& L, const AreaProfile& a);

struct ErrorField {
  std::vector<double> r, value;  // Error(r) = f'' + (a'/a) f' - kappa0 f, f = a^{-1/2}
  double l1 = 0.0;               // 4 pi int |Error| a dr
  double sup_j = 0.0;            // sup |Error| j
  double kato = 0.0;             // Kato norm of Error as a radial potential
  double at(double r) const;     // linear interpolation
};
ErrorField error_term(const AreaProfile& a, const std::vector<double>& r_grid, bool with_kato = false);
double error_value(const AreaProfile& a, double r);

// shell kernel of the defect of S0, weight Error(t)/(4 pi) on d = t
SpaceTimeKernel error_kernel(const Lattice& L, const AreaProfile& a);

struct SeriesResult {
  SpaceTimeKernel sum;
  std::vector<double> term_l1;      // U(L1) per term, term 0 first
  std::vector<double> term_sup;     // sup_t slice mass per term
  std::vector<double> term_l1_linf;
  std::vector<double> ratios;       // successive U(L1) ratios
  int terms = 0;
  bool converged = false;
};

// S0 + S0*E + S0*E*E + ...
SeriesResult iterate_error_series(const SpaceTimeKernel& S0, const SpaceTimeKernel& E, int n_max,
                                  double tol, int threads = 1);
// fitted C in term_n <= first (C eps T)^n / n!
double factorial_fit(const std::vector<double>& terms, double eps, double T);

// sum_n (-1)^n S0*(V S0)^{*n} applied to `source` (S0 itself or S0 f)
SeriesResult born_series_potential(const SpaceTimeKernel& source, const kato::RadialPotential& V,
                                   int n_max, double tol, int threads = 1);

// CSV rows t, r, shell_coeff, ac_value for the documented dump layout
std::string kernel_csv(const SpaceTimeKernel& K, int stride = 1);

}  // namespace curvwave::parametrix
