#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "curvwave/common.hpp"
#include "curvwave/jacobi_scalar.hpp"

namespace curvwave::jacobi {

double op_norm(const Mat2& m);

// radial profile of the curvature perturbation A1(r) along geodesics from the base point
struct PerturbationField {
  std::string name = "none";
  double eps = 0.0;
  std::function<Mat2(double)> A1 = [](double) { return Mat2::Zero().eval(); };
  std::function<Mat2(double)> dA1 = [](double) { return Mat2::Zero().eval(); };
  double support = inf;     // A1 = 0 beyond this radius
  double decay_rate = inf;  // |A1| ~ exp(-decay_rate r); inf means faster than any exponential
  std::vector<double> breakpoints;

  double norm_at(double r) const { return op_norm(A1(r)); }
  double l1_geodesic() const;                // int_0^inf |A1| dr
  double l1_volume(double kappa0) const;     // 4 pi int |A1| j^2 dr, may be inf
};

enum class Profile { Gaussian, Exp2, Compact };

Profile parse_profile(const std::string& s);
std::string profile_name(Profile p);

// A1 = eps * phi(r) * M with sup phi = 1, M = I or diag(1,-1)
PerturbationField builtin_perturbation(Profile p, double eps, bool trace_free = false);

// tabulated symmetric A1: rows (r, a11, a12, a22), cubic (makima) interpolation
PerturbationField tabular_perturbation(const std::vector<std::array<double, 4>>& rows);
PerturbationField load_perturbation(const std::string& path);

struct TransportState {
  double r;
  Mat2 T, dT;
};

struct AreaSample {
  double a, da, d2a;
};

// a = det T and its radial derivative
std::pair<double, double> area_element(const TransportState& s);

// dense solution of T'' + (kappa0 I + A1) T = 0, T(0) = 0, T'(0) = I.
// Stored as the deviation D = T - j I so small perturbations keep full relative accuracy.
class TransportPath {
 public:
  using State = std::array<double, 12>;  // D, D', int_0^r exp(-alpha s) A1 T ds

  double kappa0() const { return kappa0_; }
  double r_max() const { return r_.back(); }
  const std::vector<double>& nodes() const { return r_; }
  const PerturbationField& field() const { return field_; }

  TransportState state(double r) const;
  Mat2 deviation(double r) const;         // T - j I
  Mat2 deviation_prime(double r) const;   // T' - j' I
  AreaSample area(double r) const;        // a'' from the equation, not differenced
  double area_minus_j2(double r) const;   // a - j^2 without cancellation
  Mat2 wronskian(double r) const;         // T'^T T - T^T T'
  Mat2 shape(double r) const;             // T' T^{-1}

  // cancellation-free forms of T/j - Tinf and (T' - j'I)/j + alpha0 I_mat
  Mat2 limit_remainder(double r) const;
  Mat2 derivative_remainder(double r) const;
  Mat2 scattering_integral() const;       // I_mat, columns I_k

 private:
  friend TransportPath integrate_transport(double, const PerturbationField&, double, double);
  State raw(double r, int block) const;
  void build_cumulative();
  Mat2 weighted_step_integral(int n, double lo, double hi, int kind) const;

  double kappa0_ = -1.0;
  double alpha_ = 1.0;
  PerturbationField field_;
  std::vector<double> r_;
  std::vector<State> x_, dx_, ddx_;
  std::vector<Mat2> tail_e_, cum_s_, cum_c_;
};

TransportPath integrate_transport(double kappa0, const PerturbationField& field, double r_max,
                                  double tol = 1e-12);

struct ScatteringData {
  Mat2 I;      // columns I_k = int exp(-s alpha0) A1 J_k ds
  Mat2 T_inf;  // lim T/j
  double l1_geodesic;
  double tail_bound;
  double r_used;
};

ScatteringData scattering_data(double kappa0, const PerturbationField& field, double tol = 1e-12);

}  // namespace curvwave::jacobi
