#include "curvwave/oracles.hpp"

#include <boost/math/interpolators/makima.hpp>

namespace curvwave::oracle {

Vec4 random_s3_point(std::mt19937_64& g) {
  std::normal_distribution<double> n;
  Vec4 x(n(g), n(g), n(g), n(g));
  return x / x.norm();
}

std::vector<freeprop::ZonalFunction> random_band_limited(std::mt19937_64& g, int pieces, int L) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<freeprop::ZonalFunction> out;
  for (int p = 0; p < pieces; ++p) {
    Vec4 o = random_s3_point(g);
    std::vector<double> b(L + 1);
    for (auto& c : b) c = U(g);
    out.push_back(freeprop::zonal_polynomial(o, b));
  }
  return out;
}

std::complex<double> schrodinger_free_closed_form(double t, double r) {
  using C = std::complex<double>;
  if (t == 0.0) throw DomainError("t must be nonzero");
  const C I(0.0, 1.0);
  C root = std::sqrt(C(pi) / (-I * t));
  double shape = r < 1e-8 ? 1.0 - r * r / 6.0 : r / std::sinh(r);
  return root * (I / (2.0 * t)) * shape * std::exp(-I * r * r / (4.0 * t)) / (4.0 * pi * pi);
}

double born_first_order(const kato::RadialPotential& V, double t, double rho) {
  double a = 0.5 * (t - rho), b = 0.5 * (t + rho);
  auto f = [&](double s) { return V.V(s); };
  return -integrate_panels(f, a, b, V.breakpoints, 0.1, 12) / (8.0 * pi);
}

parametrix::SpaceTimeKernel random_kernel(const parametrix::Lattice& L, std::mt19937_64& g) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  parametrix::SpaceTimeKernel K(L);
  for (int k = 1; k <= L.K; ++k) {
    K.shell[k] = U(g);
    for (int i = 1; i <= std::min(k, L.N); ++i) K.ac(k, i) = U(g);
  }
  return K;
}

std::complex<double> schrodinger_born_first_order(const kato::RadialPotential& V, double t, double rho) {
  using C = std::complex<double>;
  if (!std::isfinite(V.support)) throw DomainError("oracle needs a compactly supported potential");
  if (!(rho > 0) || t == 0.0) throw DomainError("oracle needs rho > 0, t != 0");
  const C I(0.0, 1.0);
  double R = V.support;
  auto integrand = [&](double s) {
    C phi = std::sqrt(C(pi) / (-I * t)) * std::exp(-I * s * s / (4.0 * t));
    return I * s * born_first_order(V, s, rho) * phi;
  };
  std::vector<double> br;
  if (2 * R - rho > rho) br.push_back(2 * R - rho);
  double a = rho, b = rho + 2 * R;
  double re = integrate_panels([&](double s) { return integrand(s).real(); }, a, b, br, 0.02, 12);
  double im = integrate_panels([&](double s) { return integrand(s).imag(); }, a, b, br, 0.02, 12);
  return C(re, im) / (2.0 * pi * t * std::sinh(rho));
}

MonteCarloValue born_first_order_mc(const kato::RadialPotential& V, const std::function<double(double)>& f,
                                    double f_support, double t, double rho, long samples,
                                    std::uint64_t seed) {
  const auto H3 = manifold::Space<double>::hyperbolic();
  // primitive P(y) = int_0^y sinh(x) f(x) dx on a fine table
  double step = 1e-3, top = f_support + 2 * t + rho + 1.0;
  int n = static_cast<int>(std::ceil(top / step));
  std::vector<double> ys(n + 1), P(n + 1, 0.0);
  for (int k = 0; k <= n; ++k) ys[k] = k * step;
  for (int k = 1; k <= n; ++k) {
    double a = ys[k - 1], b = ys[k];
    P[k] = P[k - 1] + (a >= f_support ? 0.0
                                      : integrate_panels([&](double x) { return std::sinh(x) * f(x); }, a, b,
                                                         {}, step, 8));
  }
  boost::math::interpolators::makima<std::vector<double>> prim(std::move(ys), std::move(P));
  auto G0 = [&](double s, double d) {  // (S0(s) f) at distance d from the origin
    double w = 0.5 * (prim(d + s) - prim(std::abs(d - s)));
    return d < 1e-8 ? std::sinh(s) * f(s) : w / std::sinh(d);
  };
  auto x1 = manifold::polar_point(H3, rho, Eigen::Vector3d(1, 0, 0));
  auto B = manifold::tangent_basis(H3, x1);
  auto o = manifold::origin(H3);
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::normal_distribution<double> Nd;
  // s stratified over `strata` equal cells, directions uniform on S2
  const long strata = std::min<long>(samples, 1000);
  const long per = std::max<long>(1, samples / strata);
  double sum = 0.0, var = 0.0;
  for (long c = 0; c < strata; ++c) {
    double s1 = 0.0, s2 = 0.0;
    for (long m = 0; m < per; ++m) {
      double s = t * (c + U(g)) / strata;
      Eigen::Vector3d w(Nd(g), Nd(g), Nd(g));
      w /= w.norm();
      manifold::TangentVector<double> v{x1, B * w};
      auto y = manifold::exp_map(H3, v, t - s);
      double d = manifold::distance(H3, o, y);
      double val = V.V(d);
      if (val != 0.0) val *= std::sinh(t - s) * G0(s, d);
      s1 += val;
      s2 += val * val;
    }
    double mean = s1 / per;
    sum += mean;
    var += (s2 / per - mean * mean) / std::max<long>(1, per - 1);
  }
  MonteCarloValue r;
  r.value = -t * sum / strata;
  r.std_error = t * std::sqrt(var) / strata;
  return r;
}

double RadialWaveReference::Grid::at(double u, double v) const {
  double x = u / h, y = v / h;
  int i = std::clamp(static_cast<int>(std::floor(x)), 0, n - 1);
  int j = std::clamp(static_cast<int>(std::floor(y)), 0, n - 1);
  double a = x - i, b = y - j;
  auto W = [&](int p, int q) { return w[static_cast<size_t>(p) * (n + 1) + q]; };
  return (1 - a) * (1 - b) * W(i, j) + a * (1 - b) * W(i + 1, j) + (1 - a) * b * W(i, j + 1) +
         a * b * W(i + 1, j + 1);
}

RadialWaveReference::Grid RadialWaveReference::solve(const std::function<double(double)>& q, double m,
                                                     double t_max, double h) {
  Grid G;
  G.h = h;
  G.n = static_cast<int>(std::ceil(2.0 * t_max / h));
  int n = G.n;
  G.w.assign(static_cast<size_t>(n + 1) * (n + 1), 0.0);
  auto idx = [n](int i, int j) { return static_cast<size_t>(i) * (n + 1) + j; };
  // boundary data on the light cone, g(v) = -(m/2) int_0^{v/2} q, cumulative Simpson on half steps
  std::vector<double> g(n + 1, 0.0);
  for (int k = 1; k <= n; ++k) {
    double a = 0.5 * (k - 1) * h, b = 0.5 * k * h;
    double seg = (b - a) / 6.0 * (q(a) + 4.0 * q(0.5 * (a + b)) + q(b));
    g[k] = g[k - 1] - 0.5 * m * seg;
  }
  for (int k = 0; k <= n; ++k) {
    G.w[idx(0, k)] = g[k];
    G.w[idx(k, 0)] = -g[k];
  }
  std::vector<double> Q(2 * n + 1);
  for (int d = -n; d <= n; ++d) Q[d + n] = q(0.5 * std::abs(d) * h);
  double c = h * h / 16.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double w00 = G.w[idx(i, j)], w10 = G.w[idx(i + 1, j)], w01 = G.w[idx(i, j + 1)];
      double q00 = Q[j - i + n], q10 = Q[j - i - 1 + n], q01 = Q[j - i + 1 + n], q11 = q00;
      G.w[idx(i + 1, j + 1)] =
          (w10 + w01 - w00 - c * (q00 * w00 + q10 * w10 + q01 * w01)) / (1.0 + c * q11);
    }
  return G;
}

RadialWaveReference::RadialWaveReference(std::function<double(double)> q, double m, double t_max,
                                         double step)
    : coarse_(solve(q, m, t_max, step)), fine_(solve(q, m, t_max, 0.5 * step)) {}

double RadialWaveReference::operator()(double t, double rho) const {
  double u = t - rho, v = t + rho;
  return (4.0 * fine_.at(u, v) - coarse_.at(u, v)) / 3.0;
}

}  // namespace curvwave::oracle
