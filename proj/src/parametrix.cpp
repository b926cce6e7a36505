#include "curvwave/parametrix.hpp"

#include <boost/math/interpolators/makima.hpp>
#include <memory>
#include <sstream>

namespace curvwave::parametrix {

double Lattice::lambda() const {
  double a = space.alpha0;
  if (a > 0) return a / std::tanh(0.5 * a * h);
  return 2.0 / h;
}

Lattice make_lattice(const Space& sp, double h, double t_max, double extra) {
  if (sp.kind == manifold::Kind::Sphere) throw DomainError("the kernel algebra needs kappa0 <= 0");
  if (!(h > 0) || !(t_max > 0) || extra < 0) throw DomainError("lattice needs h > 0, t_max > 0");
  Lattice L;
  L.space = sp;
  L.h = h;
  L.K = static_cast<int>(std::lround(t_max / h));
  L.N = L.K + static_cast<int>(std::ceil(extra / h - 1e-9));
  if (L.K < 1) throw DomainError("lattice has no time steps");
  return L;
}

SpaceTimeKernel::SpaceTimeKernel(const Lattice& l)
    : L(l), shell(l.K + 1, 0.0), ac(Eigen::MatrixXd::Zero(l.K + 1, l.N + 1)) {}

double SpaceTimeKernel::shell_coeff(int k) const {
  double j = L.j(L.t(k));
  return j > 0 ? shell[k] / j : 0.0;
}

double SpaceTimeKernel::ac_value(int k, int i) const {
  if (i == 0) return ac(k, 1) / L.j(L.h);
  return ac(k, i) / L.j(L.rho(i));
}

double SpaceTimeKernel::nodal(int k, int i) const {
  if (i == 0) return 0.0;
  double v = ac(k, i);
  if (i == k) v += shell[k] / L.h;
  return v;
}

freeprop::RadialKernel SpaceTimeKernel::slice(int k) const {
  freeprop::RadialKernel s;
  s.t = L.t(k);
  s.shell_coeff = shell_coeff(k);
  for (int i = 1; i <= L.N; ++i) {
    s.ac_grid.push_back(L.rho(i));
    s.ac_profile.push_back(ac_value(k, i));
  }
  return s;
}

SpaceTimeKernel& SpaceTimeKernel::operator+=(const SpaceTimeKernel& o) {
  if (!(L == o.L)) throw DomainError("kernels live on different lattices");
  identity += o.identity;
  for (size_t k = 0; k < shell.size(); ++k) shell[k] += o.shell[k];
  ac += o.ac;
  return *this;
}

SpaceTimeKernel& SpaceTimeKernel::operator*=(double s) {
  identity *= s;
  for (auto& m : shell) m *= s;
  ac *= s;
  return *this;
}

double SpaceTimeKernel::max_abs() const {
  double m = std::abs(identity);
  for (double s : shell) m = std::max(m, std::abs(s));
  return std::max(m, ac.cwiseAbs().maxCoeff());
}

SpaceTimeKernel operator+(SpaceTimeKernel a, const SpaceTimeKernel& b) { return a += b; }
SpaceTimeKernel operator-(SpaceTimeKernel a, const SpaceTimeKernel& b) {
  SpaceTimeKernel c = b;
  c *= -1.0;
  return a += c;
}
SpaceTimeKernel operator*(double s, SpaceTimeKernel a) { return a *= s; }

SpaceTimeKernel identity_kernel(const Lattice& L) {
  SpaceTimeKernel K(L);
  K.identity = 1.0;
  return K;
}

SpaceTimeKernel shell_kernel(const Lattice& L, const std::function<double(double)>& m) {
  SpaceTimeKernel K(L);
  for (int k = 1; k <= L.K; ++k) K.shell[k] = m(L.t(k));
  return K;
}

SpaceTimeKernel free_kernel(const Lattice& L) {
  return shell_kernel(L, [](double) { return 1.0 / (4.0 * pi); });
}

SpaceTimeKernel free_evolution(const Lattice& L, const std::function<double(double)>& f, double support) {
  if (L.N < L.K + static_cast<int>(std::ceil(support / L.h - 1e-9)))
    throw DomainError("radial grid too short for the datum");
  // P(y) = int_0^y j f on the lattice, w = (P(rho + t) - P(|rho - t|)) / 2
  int M = L.N + L.K;
  std::vector<double> P(M + 1, 0.0);
  for (int n = 1; n <= M; ++n) {
    double a = (n - 1) * L.h, b = n * L.h;
    if (a >= support) {
      P[n] = P[n - 1];
      continue;
    }
    std::vector<double> br;
    if (support > a && support < b) br.push_back(support);
    P[n] = P[n - 1] + integrate_panels([&](double y) { return L.j(y) * f(y); }, a, b, br, L.h, 8);
  }
  SpaceTimeKernel K(L);
  for (int k = 0; k <= L.K; ++k)
    for (int i = 1; i <= L.N; ++i) K.ac(k, i) = 0.5 * (P[i + k] - P[std::abs(i - k)]);
  return K;
}

SpaceTimeKernel multiply_potential(const SpaceTimeKernel& K, const kato::RadialPotential& V) {
  SpaceTimeKernel out = K;
  const auto& L = K.L;
  std::vector<double> v(L.N + 1);
  for (int i = 0; i <= L.N; ++i) v[i] = V.V(L.rho(i));
  for (int k = 0; k <= L.K; ++k) {
    out.shell[k] *= k <= L.N ? v[k] : V.V(L.t(k));
    for (int i = 0; i <= L.N; ++i) out.ac(k, i) *= v[i];
  }
  out.identity *= V.V(0.0);
  return out;
}

SpaceTimeKernel time_weighted(const SpaceTimeKernel& K, const std::function<double(double)>& w) {
  SpaceTimeKernel out = K;
  out.identity *= w(0.0);
  for (int k = 0; k <= K.L.K; ++k) {
    double s = w(K.L.t(k));
    out.shell[k] *= s;
    out.ac.row(k) *= s;
  }
  return out;
}

namespace {

// nodal slices with prefix sums, for O(1) trapezoid sums over d
struct Prefix {
  int N;
  std::vector<std::vector<double>> v, P;
  std::vector<int> top;  // last nonzero node per slice, -1 if none

  explicit Prefix(const SpaceTimeKernel& G) : N(G.L.N) {
    int K = G.L.K;
    v.assign(K + 1, std::vector<double>(N + 1, 0.0));
    P.assign(K + 1, std::vector<double>(N + 1, 0.0));
    top.assign(K + 1, -1);
    for (int l = 0; l <= K; ++l) {
      for (int d = 0; d <= N; ++d) {
        v[l][d] = G.nodal(l, d);
        if (v[l][d] != 0.0) top[l] = d;
        P[l][d] = (d ? P[l][d - 1] : 0.0) + v[l][d];
      }
    }
  }
  // sum' over d in [a, b]; values beyond N are taken as zero
  double sum(int l, int a, int b) const {
    if (a > N || a == b) return 0.0;
    if (b > N) return P[l][N] - P[l][a] + 0.5 * v[l][a];
    return P[l][b] - P[l][a] + 0.5 * (v[l][a] - v[l][b]);
  }
};

}  // namespace

SpaceTimeKernel convolve(const SpaceTimeKernel& F, const SpaceTimeKernel& G, int threads) {
  if (!(F.L == G.L)) throw DomainError("convolution needs kernels on the same lattice");
  if (!F.radial || !G.radial) throw DomainError("convolution needs kernels radial about the origin");
  const Lattice& L = F.L;
  const int K = L.K, N = L.N;
  Prefix pg(G);
  // nonzero nodes of F per slice
  std::vector<std::vector<std::pair<int, double>>> fr(K + 1);
  for (int m = 0; m <= K; ++m)
    for (int r = 1; r <= N; ++r) {
      double x = F.nodal(m, r);
      if (x != 0.0) fr[m].emplace_back(r, x);
    }
  const double c = 4.0 * pi * L.h * L.h / L.lambda();
  SpaceTimeKernel out(L);
  parallel_for(K + 1, threads, [&](int k) {
    std::vector<double> row(N + 1, 0.0);
    for (int l = 0; l <= k; ++l) {
      int m = k - l;
      if (fr[m].empty() || pg.top[l] < 0) continue;
      int dmax = pg.top[l];
      for (auto [r, x] : fr[m]) {
        int lo = std::max(1, r - dmax), hi = std::min(N, r + dmax);
        double cx = c * x;
        for (int i = lo; i <= hi; ++i) row[i] += cx * pg.sum(l, std::abs(i - r), i + r);
      }
    }
    for (int i = 1; i <= N; ++i) out.ac(k, i) = row[i];
  });
  if (F.identity != 0.0) out += F.identity * G;
  if (G.identity != 0.0) {
    SpaceTimeKernel f = F;
    f.identity = 0.0;
    out += G.identity * f;
  }
  return out;
}

// --- norms -------------------------------------------------------------------

double slice_mass(const SpaceTimeKernel& K, int k) {
  const auto& L = K.L;
  double s = 0.0;
  for (int i = 1; i <= L.N; ++i) s += L.j(L.rho(i)) * std::abs(K.nodal(k, i));
  return 4.0 * pi * L.h * s;
}

double u_l1(const SpaceTimeKernel& K, const std::function<double(double)>& w) {
  const auto& L = K.L;
  double s = 0.0;
  for (int k = 0; k <= L.K; ++k) s += L.h * (w ? std::abs(w(L.t(k))) : 1.0) * slice_mass(K, k);
  return s + std::abs(K.identity) * (w ? std::abs(w(0.0)) : 1.0);
}

double u_l1_linf(const SpaceTimeKernel& K, const std::function<double(double)>& w) {
  const auto& L = K.L;
  if (K.identity != 0.0 && (!w || w(0.0) != 0.0)) return inf;
  std::vector<double> col(L.N + 1, 0.0);
  for (int k = 0; k <= L.K; ++k) {
    double s = L.h * (w ? std::abs(w(L.t(k))) : 1.0);
    if (s == 0.0) continue;
    for (int i = 1; i <= L.N; ++i) col[i] += s * std::abs(K.nodal(k, i));
  }
  double m = 0.0;
  for (int i = 1; i <= L.N; ++i) m = std::max(m, col[i] / L.j(L.rho(i)));
  return m;
}

double sup_mass(const SpaceTimeKernel& K) {
  double m = 0.0;
  for (int k = 0; k <= K.L.K; ++k) m = std::max(m, slice_mass(K, k));
  return m;
}

UNorms weighted_u_norms(const SpaceTimeKernel& K, double delta) {
  const auto& L = K.L;
  double a = L.space.alpha0;
  UNorms n;
  auto both = [&](const std::function<double(double)>& w, double& l1, double& linf) {
    l1 = u_l1(K, w);
    linf = u_l1_linf(K, w);
  };
  both({}, n.u_l1, n.u_l1_linf);
  both([](double t) { return t; }, n.t_l1, n.t_l1_linf);
  both([&](double t) { return L.j(t); }, n.j_l1, n.j_l1_linf);
  both([&](double t) { return L.jp(t); }, n.jp_l1, n.jp_l1_linf);
  both([&](double t) { return jacobi::scalar_j_delta(a, delta, t); }, n.jd_l1, n.jd_l1_linf);
  both([&](double t) { return jacobi::scalar_j_delta_prime(a, delta, t); }, n.jdp_l1, n.jdp_l1_linf);
  for (double v : {n.u_l1, n.j_l1, n.jp_l1, n.jd_l1, n.jdp_l1})
    if (!std::isfinite(v)) n.diagnostic = "weighted mass not finite (identity part or overflow)";
  if (!std::isfinite(n.u_l1_linf)) n.diagnostic = "identity part has no L1 -> Linf bound";
  return n;
}

// --- perturbed metric --------------------------------------------------------

AreaProfile area_from_path(const jacobi::TransportPath& p) {
  AreaProfile a;
  a.kappa0 = p.kappa0();
  a.r_max = p.r_max();
  a.path = &p;
  a.at = [&p](double r) { return p.area(r); };
  return a;
}

AreaProfile area_exact(const Space& sp) {
  AreaProfile a;
  a.kappa0 = sp.kappa0;
  a.at = [sp](double r) {
    double j = sp.j(r), jp = sp.jp(r);
    return jacobi::AreaSample{j * j, 2 * j * jp, 2 * jp * jp - 2 * sp.kappa0 * j * j};
  };
  return a;
}

AreaProfile area_from_samples(double kappa0, std::vector<double> r, std::vector<double> a) {
  size_t n = r.size();
  if (n < 6 || a.size() != n) throw DomainError("area samples need at least 6 matching points");
  double h = r[1] - r[0];
  for (size_t i = 1; i < n; ++i)
    if (std::abs(r[i] - r[i - 1] - h) > 1e-9 * std::max(1.0, h))
      throw DomainError("area samples must be equally spaced");
  for (double v : a)
    if (!std::isfinite(v)) throw DomainError("area samples not finite");
  // fourth order stencils, one-sided near the ends
  std::vector<double> d1(n), d2(n);
  auto one_sided = [&](size_t i, int dir, int off) {
    auto f = [&](int q) { return a[i + dir * q]; };
    double g1, g2;
    if (off == 0) {
      g1 = (-25 * f(0) + 48 * f(1) - 36 * f(2) + 16 * f(3) - 3 * f(4)) / 12.0;
      g2 = (45 * f(0) - 154 * f(1) + 214 * f(2) - 156 * f(3) + 61 * f(4) - 10 * f(5)) / 12.0;
    } else {
      g1 = (-3 * f(-1) - 10 * f(0) + 18 * f(1) - 6 * f(2) + f(3)) / 12.0;
      g2 = (10 * f(-1) - 15 * f(0) - 4 * f(1) + 14 * f(2) - 6 * f(3) + f(4)) / 12.0;
    }
    d1[i] = dir * g1 / h;
    d2[i] = g2 / (h * h);
  };
  for (size_t i = 0; i < n; ++i) {
    if (i < 2) {
      one_sided(i, 1, static_cast<int>(i));
    } else if (i + 2 >= n) {
      one_sided(i, -1, static_cast<int>(n - 1 - i));
    } else {
      d1[i] = (a[i - 2] - 8 * a[i - 1] + 8 * a[i + 1] - a[i + 2]) / (12 * h);
      d2[i] = (-a[i - 2] + 16 * a[i - 1] - 30 * a[i] + 16 * a[i + 1] - a[i + 2]) / (12 * h * h);
    }
  }
  using boost::math::interpolators::makima;
  auto A = std::make_shared<makima<std::vector<double>>>(std::vector<double>(r), std::move(a));
  auto A1 = std::make_shared<makima<std::vector<double>>>(std::vector<double>(r), std::move(d1));
  auto A2 = std::make_shared<makima<std::vector<double>>>(std::move(r), std::move(d2));
  AreaProfile p;
  p.kappa0 = kappa0;
  p.at = [A, A1, A2](double x) { return jacobi::AreaSample{(*A)(x), (*A1)(x), (*A2)(x)}; };
  return p;
}

SpaceTimeKernel perturbed_parametrix(const Lattice& L, const AreaProfile& a) {
  SpaceTimeKernel K(L);
  for (int k = 1; k <= L.K; ++k) {
    double t = L.t(k);
    double av = a.at(t).a;
    if (!(av > 0)) throw ConjugatePointError("area element not positive at t = " + std::to_string(t));
    K.shell[k] = L.j(t) / (4.0 * pi * std::sqrt(av));
  }
  return K;
}

double error_value(const AreaProfile& a, double r) {
  if (!(r > 0)) throw DomainError("error term needs r > 0");
  if (a.path) {
    // a^{-1/2} (tr A1 / 2 + |trace-free part of T'T^{-1}|^2 / 2), no 1/r^2 cancellation
    const auto& p = *a.path;
    double j = jacobi::scalar_j(p.kappa0(), r), jp = jacobi::scalar_jp(p.kappa0(), r);
    Mat2 D = p.deviation(r), Dp = p.deviation_prime(r);
    Mat2 T = D + j * Mat2::Identity();
    Mat2 Nm = (Dp - (jp / j) * D) * T.inverse();
    double off = 0.5 * (Nm(0, 1) + Nm(1, 0)), dif = Nm(0, 0) - Nm(1, 1);
    double tr = p.field().A1(r).trace();
    double av = T.determinant();
    if (!(av > 0)) throw ConjugatePointError("area element not positive at r = " + std::to_string(r));
    return (0.5 * tr + 0.25 * dif * dif + off * off) / std::sqrt(av);
  }
  auto s = a.at(r);
  if (!(s.a > 0)) throw ConjugatePointError("area element not positive at r = " + std::to_string(r));
  if (!std::isfinite(s.da) || !std::isfinite(s.d2a)) throw DomainError("area element not twice differentiable");
  double q = s.da / s.a;
  return (0.25 * q * q - 0.5 * s.d2a / s.a - a.kappa0) / std::sqrt(s.a);
}

double ErrorField::at(double x) const {
  if (r.empty()) return 0.0;
  if (x <= r.front()) return value.front();
  if (x >= r.back()) return value.back();
  size_t i = std::upper_bound(r.begin(), r.end(), x) - r.begin();
  double s = (x - r[i - 1]) / (r[i] - r[i - 1]);
  return (1 - s) * value[i - 1] + s * value[i];
}

ErrorField error_term(const AreaProfile& a, const std::vector<double>& grid, bool with_kato) {
  ErrorField e;
  for (double r : grid) {
    if (!(r > 0)) continue;
    e.r.push_back(r);
    e.value.push_back(error_value(a, r));
  }
  double j2 = 0.0;
  for (size_t i = 0; i < e.r.size(); ++i) {
    double j = jacobi::scalar_j(a.kappa0, e.r[i]);
    e.sup_j = std::max(e.sup_j, std::abs(e.value[i]) * j);
    double w = std::abs(e.value[i]) * a.at(e.r[i]).a;
    // trapezoid, the first cell from r = 0 where the integrand vanishes
    double lo = i ? e.r[i - 1] : 0.0;
    e.l1 += 0.5 * (w + j2) * (e.r[i] - lo);
    j2 = w;
  }
  e.l1 *= 4.0 * pi;
  if (with_kato && a.kappa0 < 0) {
    kato::RadialPotential V;
    V.name = "error";
    auto copy = std::make_shared<ErrorField>(e);
    double rb = e.r.empty() ? 0.0 : e.r.back();
    V.V = [copy, rb](double r) { return r > rb ? 0.0 : copy->at(r); };
    V.support = rb;
    kato::Sampler s;
    s.rho_max = std::min(3.0, rb);
    e.kato = kato::kato_norm(Space::hyperbolic(std::sqrt(-a.kappa0)), V, s).value;
  }
  return e;
}

SpaceTimeKernel error_kernel(const Lattice& L, const AreaProfile& a) {
  SpaceTimeKernel E(L);
  for (int k = 1; k <= L.K; ++k) {
    double t = L.t(k);
    E.shell[k] = L.j(t) * error_value(a, t) / (4.0 * pi);
  }
  return E;
}

// --- series ------------------------------------------------------------------

namespace {

void record(SeriesResult& s, const SpaceTimeKernel& term) {
  s.term_l1.push_back(u_l1(term));
  s.term_sup.push_back(sup_mass(term));
  s.term_l1_linf.push_back(u_l1_linf(term));
  size_t n = s.term_l1.size();
  if (n >= 2) s.ratios.push_back(s.term_l1[n - 2] > 0 ? s.term_l1[n - 1] / s.term_l1[n - 2] : 0.0);
}

}  // namespace

SeriesResult iterate_error_series(const SpaceTimeKernel& S0, const SpaceTimeKernel& E, int n_max,
                                  double tol, int threads) {
  if (n_max < 0 || !(tol > 0)) throw DomainError("series needs n_max >= 0 and tol > 0");
  SeriesResult s{S0, {}, {}, {}, {}, 1, false};
  record(s, S0);
  double first = s.term_l1[0];
  SpaceTimeKernel R = E;
  for (int n = 1; n <= n_max; ++n) {
    SpaceTimeKernel term = convolve(S0, R, threads);
    record(s, term);
    s.sum += term;
    s.terms = n + 1;
    if (n >= 2 && s.ratios.back() >= 1.0)
      throw DivergenceError("error series term norms stopped decreasing at n = " + std::to_string(n));
    if (s.term_l1.back() <= tol * first) {
      s.converged = true;
      break;
    }
    if (n < n_max) R = convolve(E, R, threads);
  }
  return s;
}

double factorial_fit(const std::vector<double>& terms, double eps, double T) {
  if (terms.size() < 2 || !(terms[0] > 0)) return 0.0;
  double c = 0.0, lf = 0.0;
  for (size_t n = 1; n < terms.size(); ++n) {
    lf += std::log(static_cast<double>(n));
    if (!(terms[n] > 0)) continue;
    double lc = (std::log(terms[n] / terms[0]) + lf) / static_cast<double>(n);
    c = std::max(c, std::exp(lc) / (eps * T));
  }
  return c;
}

SeriesResult born_series_potential(const SpaceTimeKernel& source, const kato::RadialPotential& V,
                                   int n_max, double tol, int threads) {
  if (n_max < 0 || !(tol > 0)) throw DomainError("series needs n_max >= 0 and tol > 0");
  SpaceTimeKernel S0 = free_kernel(source.L);
  SeriesResult s{source, {}, {}, {}, {}, 1, false};
  record(s, source);
  double first = s.term_l1[0];
  SpaceTimeKernel term = source;
  for (int n = 1; n <= n_max; ++n) {
    term = convolve(S0, multiply_potential(term, V), threads);
    term *= -1.0;
    record(s, term);
    s.sum += term;
    s.terms = n + 1;
    if (s.ratios.back() >= 1.0)
      throw DivergenceError("Born series ratio " + std::to_string(s.ratios.back()) + " >= 1 at n = " +
                            std::to_string(n) + "; potential too large");
    if (s.term_l1.back() <= tol * first) {
      s.converged = true;
      break;
    }
  }
  return s;
}

std::string kernel_csv(const SpaceTimeKernel& K, int stride) {
  std::ostringstream o;
  o.precision(12);
  o << "# t [length], r [length], shell_coeff [1/length^2], ac_value [1/length^3]\n";
  o << "t,r,shell_coeff,ac_value\n";
  stride = std::max(1, stride);
  for (int k = 0; k <= K.L.K; k += stride)
    for (int i = 1; i <= K.L.N; i += stride)
      o << K.L.t(k) << ',' << K.L.rho(i) << ',' << (i == k ? K.shell_coeff(k) : 0.0) << ','
        << K.ac_value(k, i) << '\n';
  return o.str();
}

}  // namespace curvwave::parametrix
