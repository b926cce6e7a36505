#pragma once

#include <functional>
#include <string>
#include <vector>

#include "curvwave/common.hpp"
#include "curvwave/manifold.hpp"

namespace curvwave::kato {

using Space = manifold::Space<double>;

// potential radial about the origin; only |V| enters the norms
struct RadialPotential {
  std::string name = "zero";
  std::function<double(double)> V = [](double) { return 0.0; };
  std::vector<double> breakpoints;  // jumps or kinks
  double support = inf;
  double decay_rate = inf;  // |V| ~ exp(-decay_rate r), inf for compact or faster
  double reach() const;     // radius beyond which V is negligible
};

RadialPotential zero_potential();
// amplitude * indicator of B(0, R); the value on the sphere r = R is amplitude / 2
RadialPotential ball_potential(double amplitude, double radius);
RadialPotential gaussian_potential(double amplitude, double width);
RadialPotential exponential_potential(double amplitude, double rate);
// (1 + j(r))^{-p}
RadialPotential power_potential(double p, double kappa0);
RadialPotential load_potential(const std::string& path);

struct Sampler {
  double rho_max = 3.0;
  int points = 61;
  int order = 16;          // Gauss-Legendre nodes per panel
  double panel = 0.25;     // max panel width
  bool auto_extend = true;
  int threads = 1;
};

struct NormResult {
  double value = 0.0;
  double argmax_rho = 0.0;
  bool finite = true;
  bool extended = false;  // the sweep had to grow because the sup sat on its edge
  std::string diagnostic;
};

// weight psi(d) applied inside sup_x int |V(y)| psi(d(x,y)) dy
enum class Weight { Kato, Modified, Delta };

double weighted_integral(const Space& sp, const RadialPotential& V, double rho, Weight w,
                         double delta, const Sampler& s);

NormResult kato_norm(const Space& sp, const RadialPotential& V, const Sampler& s = {});
NormResult modified_kato_norm(const Space& sp, const RadialPotential& V, const Sampler& s = {});
NormResult kato_delta_norm(const Space& sp, const RadialPotential& V, double delta,
                           const Sampler& s = {});
double l1_norm(const Space& sp, const RadialPotential& V, const Sampler& s = {});

struct GeodesicSampler {
  double b_max = 3.0;
  int points = 61;
  int order = 16;
};

// sup over geodesics of the line integral of F, geodesics labelled by distance b to the origin
NormResult l1_gamma_norm(const Space& sp, const RadialPotential& F, const GeodesicSampler& s = {});

struct KatoReport {
  NormResult kato, modified, delta_norm;
  double delta = 0.0;
  double l1 = 0.0;
};

KatoReport kato_report(const Space& sp, const RadialPotential& V, double delta,
                       const Sampler& s = {});

}  // namespace curvwave::kato
