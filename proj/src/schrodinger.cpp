#include "curvwave/schrodinger.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "curvwave/oracles.hpp"

namespace curvwave::schrodinger {

namespace {

const cplx I(0.0, 1.0);

struct FilonBasis {
  std::vector<double> x;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;  // of the transposed monomial Vandermonde
};

const FilonBasis& filon_basis(int p) {
  static std::mutex m;
  static std::map<int, std::unique_ptr<FilonBasis>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto& b = cache[p];
  if (!b) {
    b = std::make_unique<FilonBasis>();
    b->x.resize(p + 1);
    Eigen::MatrixXd V(p + 1, p + 1);
    for (int j = 0; j <= p; ++j) {
      b->x[j] = std::cos(pi * (j + 0.5) / (p + 1));
      for (int k = 0; k <= p; ++k) V(k, j) = std::pow(b->x[j], k);
    }
    b->lu = V.partialPivLu();
  }
  return *b;
}

// mu_k = int_{-1}^{1} x^k exp(i th x) dx
Eigen::VectorXcd moments(double th, int p) {
  Eigen::VectorXcd mu(p + 1);
  if (std::abs(th) <= p + 2) {
    for (int k = 0; k <= p; ++k) {
      cplx s = 0.0, term = 1.0;
      for (int n = 0; n < 200; ++n) {
        if (n) term *= I * th / static_cast<double>(n);
        int m = k + n;
        if (m % 2 == 0) s += term * (2.0 / (m + 1));
        if (n > std::abs(th) + 4 && std::abs(term) < 1e-18) break;
      }
      mu(k) = s;
    }
    return mu;
  }
  cplx ep = std::exp(I * th), em = std::exp(-I * th);
  mu(0) = 2.0 * std::sin(th) / th;
  for (int k = 1; k <= p; ++k) {
    double sg = k % 2 ? -1.0 : 1.0;
    mu(k) = (ep - sg * em) / (I * th) - (static_cast<double>(k) / (I * th)) * mu(k - 1);
  }
  return mu;
}

// int_A^inf exp(i t m^2) dm by the asymptotic series, and int_A^inf m exp(i t m^2) dm
cplx fresnel_e0(double t, double A) {
  cplx z = 1.0 / (2.0 * I * t * A * A), s = 1.0, term = 1.0;
  for (int n = 1; n < 200; ++n) {
    cplx next = term * z * static_cast<double>(2 * n - 1);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    s += term;
    if (std::abs(term) < 1e-18) break;
  }
  return -std::exp(I * t * A * A) / (2.0 * I * t * A) * s;
}

cplx fresnel_e1(double t, double A) { return I * std::exp(I * t * A * A) / (2.0 * t); }

}  // namespace

double SchrodingerKernel::sup_abs() const {
  double m = 0.0;
  for (auto& k : K) m = std::max(m, std::abs(k));
  return m;
}

cplx filon_panel(double t, const std::function<double(double)>& G, double a, double b, int degree) {
  const auto& B = filon_basis(degree);
  double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
  Eigen::VectorXcd w = B.lu.solve(moments(t * hw, degree));
  cplx s = 0.0;
  for (int j = 0; j <= degree; ++j) s += w(j) * G(mid + hw * B.x[j]);
  return hw * std::exp(I * t * mid) * s;
}

cplx oscillatory_integral(double t, const std::function<double(double)>& g, double lambda_max,
                          double freq, const OscillatoryRule& rule) {
  if (!(lambda_max > 0)) return 0.0;
  double l0 = std::min(lambda_max, 1.0);
  // near zero the substitution u = l^2 is singular, plain Gauss-Legendre in l
  const auto& gl = gauss_legendre(rule.gl_order);
  double width = std::min(0.25, rule.panel_phase / (2.0 * std::abs(t) * l0 + std::abs(freq) + 1e-12));
  int panels = std::max(1, static_cast<int>(std::ceil(l0 / width)));
  cplx s = 0.0;
  for (int p = 0; p < panels; ++p) {
    double a = l0 * p / panels, b = l0 * (p + 1) / panels, m = 0.5 * (a + b), hw = 0.5 * (b - a);
    for (size_t q = 0; q < gl.x.size(); ++q) {
      double l = m + hw * gl.x[q];
      s += hw * gl.w[q] * std::exp(I * t * l * l) * g(l);
    }
  }
  if (lambda_max <= l0) return s;
  auto G = [&](double u) {
    double l = std::sqrt(u);
    return g(l) / (2.0 * l);
  };
  double u = l0 * l0, U = lambda_max * lambda_max;
  while (u < U) {
    double du = std::min({rule.panel_phase * 2.0 * std::sqrt(u) / std::max(std::abs(freq), 1e-9), 0.5 * u, 4.0});
    double b = std::min(U, u + du);
    if (U - b < 1e-3 * du) b = U;
    s += filon_panel(t, G, u, b, rule.degree);
    u = b;
  }
  return s;
}

cplx spectral_integral(double t, double r, const OscillatoryRule& rule) {
  if (t == 0.0) throw DomainError("spectral integral needs t != 0");
  if (!(r > 0)) throw DomainError("spectral integral needs r > 0");
  if (rule.fresnel < 20) throw DomainError("Fresnel tail needs 2 t A^2 >= 20 for the asymptotic series");
  double c = r / (2.0 * t);
  double A = std::sqrt(rule.fresnel / (2.0 * std::abs(t)));
  double L = std::abs(c) + A;
  if (L > 1e4) throw DomainError("phase resolution: t = " + std::to_string(t) + " needs lambda up to " +
                                 std::to_string(L));
  cplx main = oscillatory_integral(t, [r](double l) { return l * std::sin(l * r); }, L, r, rule);
  cplx tail = std::exp(-I * t * c * c) / (2.0 * I) *
              (fresnel_e1(t, L + c) - c * fresnel_e0(t, L + c) - fresnel_e1(t, L - c) -
               c * fresnel_e0(t, L - c));
  return main + tail;
}

cplx free_kernel_value(double t, double r, const OscillatoryRule& rule) {
  double re = std::max(r, 1e-5);  // K(t, r) = K(t, 0) (1 + O(r^2))
  return spectral_integral(t, re, rule) / (2.0 * pi * pi * std::sinh(re));
}

SchrodingerKernel free_kernel_oscillatory(double t, const std::vector<double>& r_grid,
                                          const OscillatoryRule& rule, int threads) {
  SchrodingerKernel k;
  k.t = t;
  k.r = r_grid;
  k.K.resize(r_grid.size());
  parallel_for(static_cast<int>(r_grid.size()), threads,
               [&](int i) { k.K[i] = free_kernel_value(t, r_grid[i], rule); });
  return k;
}

SchrodingerKernel free_kernel_closed(double t, const std::vector<double>& r_grid) {
  SchrodingerKernel k;
  k.t = t;
  k.r = r_grid;
  for (double r : r_grid) k.K.push_back(oracle::schrodinger_free_closed_form(t, r));
  return k;
}

cplx fresnel_factor(double t, double s) {
  return std::sqrt(cplx(pi) / (-I * t)) * std::exp(-I * s * s / (4.0 * t));
}

SchrodingerKernel perturbed_kernel(const parametrix::SpaceTimeKernel& S, double t, double r_max) {
  if (t == 0.0) throw DomainError("kernel needs t != 0");
  const auto& L = S.L;
  int n = std::min(L.N, static_cast<int>(std::floor(r_max / L.h + 1e-9)));
  SchrodingerKernel k;
  k.t = t;
  std::vector<cplx> phi(L.K + 1);
  for (int q = 0; q <= L.K; ++q) phi[q] = I * L.t(q) * fresnel_factor(t, L.t(q));
  int tail_from = static_cast<int>(0.9 * L.K);
  double pre = 1.0 / (2.0 * pi * t);
  for (int i = 1; i <= n; ++i) {
    cplx s = 0.0;
    double tail = 0.0;
    for (int q = 0; q <= L.K; ++q) {
      double v = S.nodal(q, i);
      if (v == 0.0) continue;
      s += L.h * v * phi[q];
      if (q >= tail_from && q != i) tail += L.h * std::abs(v * phi[q]);
    }
    double j = L.j(L.rho(i));
    k.r.push_back(L.rho(i));
    k.K.push_back(pre * s / j);
    k.truncation = std::max(k.truncation, std::abs(pre) * tail / j);
  }
  return k;
}

std::vector<DecayRow> decay_scan(const std::function<SchrodingerKernel(double)>& source,
                                 const std::vector<double>& t_list) {
  std::vector<DecayRow> rows;
  for (double t : t_list) {
    if (!(t > 0)) throw DomainError("decay scan needs t > 0");
    double s = source(t).sup_abs();
    rows.push_back({t, s, std::pow(t, 1.5) * s});
  }
  return rows;
}

double unitarity_initial() { return std::pow(pi, 1.5); }

double unitarity_proxy(double t, double R, int nodes) {
  // w = r u solves i w_t = -w'' on the half line; sine transform of r exp(-r^2/2)
  auto w = [&](double rho) {
    if (t == 0.0) return cplx(rho * std::exp(-0.5 * rho * rho));
    auto g = [rho](double l) { return std::sqrt(pi / 2) * l * std::exp(-0.5 * l * l) * std::sin(l * rho); };
    return 2.0 / pi * oscillatory_integral(t, g, 12.0, rho + 1.0);
  };
  const auto& gl = gauss_legendre(16);
  int panels = std::max(1, nodes / 16);
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    double a = R * p / panels, b = R * (p + 1) / panels, m = 0.5 * (a + b), hw = 0.5 * (b - a);
    for (size_t q = 0; q < gl.x.size(); ++q) s += hw * gl.w[q] * std::norm(w(m + hw * gl.x[q]));
  }
  return 4.0 * pi * s;
}

}  // namespace curvwave::schrodinger
