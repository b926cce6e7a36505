#include "curvwave/freeprop.hpp"

#include <boost/math/interpolators/makima.hpp>
#include <memory>

namespace curvwave::freeprop {

using manifold::Kind;

namespace {

bool sphere_zero(const Space& sp, double t) {
  if (sp.kind != Kind::Sphere) return false;
  double q = t * sp.root() / pi;
  return std::abs(q - std::round(q)) < 1e-14 * std::max(1.0, q);
}

const manifold::DirectionRule<double>& rule_for(int level) {
  static thread_local std::vector<std::unique_ptr<manifold::DirectionRule<double>>> cache;
  if (static_cast<int>(cache.size()) <= level) cache.resize(level + 1);
  if (!cache[level]) cache[level] = std::make_unique<manifold::DirectionRule<double>>(manifold::direction_rule<double>(level));
  return *cache[level];
}

// spherical integrals int f(exp_x(t w)) dw and int d_t f(exp_x(t w)) dw
std::pair<double, double> sphere_means(const Space& sp, double t, const TestFunction& f,
                                       const Point& x, int level, bool deriv) {
  const auto& R = rule_for(level);
  auto B = manifold::tangent_basis(sp, x);
  double s0 = 0.0, s1 = 0.0;
  for (size_t i = 0; i < R.u.size(); ++i) {
    manifold::TangentVector<double> v{x, B * R.u[i]};
    auto y = manifold::exp_map(sp, v, t);
    s0 += R.w[i] * f.value(y.x);
    if (!deriv) continue;
    if (f.gradient) {
      s1 += R.w[i] * f.gradient(y.x).dot(manifold::exp_velocity(sp, v, t));
    } else {
      double h = 1e-3;
      auto at = [&](double s) { return f.value(manifold::exp_map(sp, v, s).x); };
      s1 += R.w[i] * (at(t - 2 * h) - 8 * at(t - h) + 8 * at(t + h) - at(t + 2 * h)) / (12 * h);
    }
  }
  return {s0, s1};
}

}  // namespace

RadialKernel sine_kernel(const Space& sp, double t) {
  if (!(t > 0)) throw DomainError("sine kernel needs t > 0");
  RadialKernel k;
  k.t = t;
  k.shell_coeff = sphere_zero(sp, t) ? 0.0 : 1.0 / (4.0 * pi * sp.j(t));
  return k;
}

TestFunction constant_function(double c) {
  return {[c](const Vec4&) { return c; }, [](const Vec4&) { return Vec4::Zero().eval(); }};
}

TestFunction radial_function(const Space& sp, const Point& o, std::function<double(double)> F,
                             std::function<double(double)> dF) {
  TestFunction f;
  f.value = [sp, o, F](const Vec4& y) { return F(manifold::distance(sp, o, Point{y})); };
  if (!dF) return f;
  f.gradient = [sp, o, dF](const Vec4& y) -> Vec4 {
    double d = manifold::distance(sp, o, Point{y});
    double k = sp.root();
    Vec4 g;
    switch (sp.kind) {
      case Kind::Sphere: {  // d = acos(<o,y>) / k
        double s = std::sin(k * d);
        if (s < 1e-14) return Vec4::Zero();
        g = -o.x / (k * s);
        break;
      }
      case Kind::Hyperbolic: {  // d = acosh(-<o,y>_L) / k
        double s = std::sinh(k * d);
        if (s < 1e-14) return Vec4::Zero();
        Vec4 m(-o.x(0), o.x(1), o.x(2), o.x(3));
        g = -m / (k * s);
        break;
      }
      default: {
        if (d < 1e-14) return Vec4::Zero();
        g = (y - o.x) / d;
        g(0) = 0.0;
      }
    }
    return dF(d) * g;
  };
  return f;
}

TestFunction SphericalProfile::function(const Space& sp) const {
  if (r.size() != f.size() || r.size() < 4) throw DomainError("profile needs matching samples");
  auto s = std::make_shared<boost::math::interpolators::makima<std::vector<double>>>(
      std::vector<double>(r), std::vector<double>(f));
  double lo = r.front(), hi = r.back();
  auto F = [s, lo, hi](double d) { return (*s)(std::clamp(d, lo, hi)); };
  auto dF = [s, lo, hi](double d) { return d < lo || d > hi ? 0.0 : s->prime(d); };
  return radial_function(sp, origin, F, dF);
}

double apply_sine(const Space& sp, double t, const TestFunction& f, const Point& x, SphereRule rule) {
  if (!(t > 0)) throw DomainError("apply_sine needs t > 0");
  if (sphere_zero(sp, t)) return 0.0;
  double m = sphere_means(sp, t, f, x, rule.level, false).first;
  if (rule.tol > 0) {
    double m2 = sphere_means(sp, t, f, x, 2 * rule.level, false).first;
    double err = std::abs(m2 - m);
    if (err > rule.tol * std::max(1.0, std::abs(m2)))
      throw QuadratureError("sphere quadrature reached only " + std::to_string(err));
    m = m2;
  }
  return sp.j(t) / (4.0 * pi) * m;
}

double apply_cosine(const Space& sp, double t, const TestFunction& f, const Point& x, SphereRule rule) {
  if (!(t > 0)) throw DomainError("apply_cosine needs t > 0");
  if (!f.value) throw DomainError("apply_cosine needs a function");
  auto [m0, m1] = sphere_means(sp, t, f, x, rule.level, true);
  double j = sphere_zero(sp, t) ? 0.0 : sp.j(t);
  return (sp.jp(t) * m0 + j * m1) / (4.0 * pi);
}

FundamentalCheck fundamental_integral_check(const Space& sp, double r, double sigma) {
  if (!(r > 0) || !(r < sp.max_radius())) throw DomainError("separation outside (0, injectivity radius)");
  sigma = std::min(sigma, 0.09 * std::min(r, sp.max_radius() - r));
  auto smeared = [&](double s, const std::function<double(double)>& w) {
    auto g = [&](double t) {
      double z = (t - r) / s;
      return std::exp(-0.5 * z * z) / (s * std::sqrt(2 * pi)) * w(t) / (4.0 * pi * std::abs(sp.j(t)));
    };
    return integrate_panels(g, r - 10 * s, r + 10 * s, {r}, 0.5 * s, 20);
  };
  auto extrapolate = [&](const std::function<double(double)>& w) {
    double f0 = smeared(sigma, w), f1 = smeared(sigma / 2, w), f2 = smeared(sigma / 4, w);
    double a = (4 * f1 - f0) / 3, b = (4 * f2 - f1) / 3;
    return (16 * b - a) / 15;
  };
  FundamentalCheck c;
  c.r = r;
  c.integral = extrapolate([](double) { return 1.0; });
  c.closed_form = 1.0 / (4.0 * pi * sp.j(r));
  c.j_weighted = extrapolate([&](double t) { return std::abs(sp.j(t)); });
  c.t_weighted = extrapolate([](double t) { return t; });
  c.rel_error = std::abs(c.integral - c.closed_form) / c.closed_form;
  return c;
}

double chebyshev_u(int ell, double c) {
  double u0 = 1.0, u1 = 2.0 * c;
  if (ell == 0) return u0;
  for (int n = 1; n < ell; ++n) {
    double u2 = 2.0 * c * u1 - u0;
    u0 = u1;
    u1 = u2;
  }
  return u1;
}

double zonal_projection(int ell, double theta) {
  if (ell < 0) throw DomainError("ell must be >= 0");
  return (ell + 1) * chebyshev_u(ell, std::cos(theta)) / (2.0 * pi * pi);
}

double dyadic_projection(int k, double theta) {
  if (k < 0) throw DomainError("k must be >= 0");
  double s = 0.0;
  for (int ell = (1 << k) - 1; ell <= (1 << (k + 1)) - 2; ++ell) s += zonal_projection(ell, theta);
  return s;
}

ZonalFunction zonal_polynomial(const Vec4& origin, const std::vector<double>& b) {
  ZonalFunction z;
  z.origin = origin;
  z.band_limit = static_cast<int>(b.size()) - 1;
  z.F = [b](double c) {
    double s = 0.0, u0 = 1.0, u1 = 2.0 * c;
    for (size_t l = 0; l < b.size(); ++l) {
      double u = l == 0 ? u0 : u1;
      s += b[l] * u;
      if (l >= 1) {
        double u2 = 2.0 * c * u1 - u0;
        u0 = u1;
        u1 = u2;
      }
    }
    return s;
  };
  z.dF = [b](double c) {
    // U_l' by differentiating the recurrence
    double s = 0.0, u0 = 1.0, u1 = 2.0 * c, d0 = 0.0, d1 = 2.0;
    for (size_t l = 1; l < b.size(); ++l) {
      s += b[l] * d1;
      double u2 = 2.0 * c * u1 - u0, d2 = 2.0 * u1 + 2.0 * c * d1 - d0;
      u0 = u1;
      u1 = u2;
      d0 = d1;
      d1 = d2;
    }
    return s;
  };
  return z;
}

TestFunction as_test_function(const std::vector<ZonalFunction>& f) {
  TestFunction t;
  t.value = [f](const Vec4& y) {
    double s = 0.0;
    for (auto& z : f) s += z.F(z.origin.dot(y));
    return s;
  };
  bool grad = std::all_of(f.begin(), f.end(), [](const ZonalFunction& z) { return bool(z.dF); });
  if (grad)
    t.gradient = [f](const Vec4& y) {
      Vec4 g = Vec4::Zero();
      for (auto& z : f) g += z.dF(z.origin.dot(y)) * z.origin;
      return g;
    };
  return t;
}

double funk_hecke(const ZonalFunction& f, int ell, int nodes) {
  // Gauss rule for the weight sqrt(1 - c^2): exact for degree <= 2n - 1
  int n = nodes > 0 ? nodes : (f.band_limit >= 0 ? (f.band_limit + ell) / 2 + 2 : 2 * ell + 96);
  double s = 0.0;
  for (int k = 1; k <= n; ++k) {
    double th = k * pi / (n + 1);
    double c = std::cos(th), w = pi / (n + 1) * std::sin(th) * std::sin(th);
    s += w * f.F(c) * chebyshev_u(ell, c);
  }
  return 4.0 * pi * s / (ell + 1);
}

SpectralValue spectral_apply(const std::vector<ZonalFunction>& f, const Vec4& x,
                             const std::function<double(int)>& multiplier, int ell_max) {
  SpectralValue out;
  for (auto& z : f) {
    int top = z.band_limit >= 0 ? std::min(z.band_limit, ell_max) : ell_max;
    double c = z.origin.dot(x);
    double last = 0.0;
    for (int ell = 0; ell <= top; ++ell) {
      double term = (ell + 1) / (2 * pi * pi) * funk_hecke(z, ell) * chebyshev_u(ell, c);
      out.value += multiplier(ell) * term;
      if (ell >= top - 1) last += std::abs(term);
    }
    if (z.band_limit < 0 || z.band_limit > ell_max) out.truncation += last;
  }
  return out;
}

SpectralValue spectral_sine_apply(const std::vector<ZonalFunction>& f, double t, const Vec4& x,
                                  int ell_max) {
  return spectral_apply(f, x, [t](int l) { return std::sin(t * (l + 1)) / (l + 1); }, ell_max);
}

SpectralValue spectral_cosine_apply(const std::vector<ZonalFunction>& f, double t, const Vec4& x,
                                    int ell_max) {
  return spectral_apply(f, x, [t](int l) { return std::cos(t * (l + 1)); }, ell_max);
}

double projection_via_sine(int ell, const TestFunction& f, const Point& x, int t_nodes, SphereRule rule) {
  Space s3 = Space::sphere();
  double h = 2 * pi / t_nodes, s = 0.0;
  for (int k = 1; k < t_nodes; ++k) {
    double t = k * h;
    if (k * 2 == t_nodes) continue;  // S0(pi) = 0
    s += apply_sine(s3, t, f, x, rule) * std::sin(t * (ell + 1));
  }
  return (ell + 1) / pi * h * s;
}

}  // namespace curvwave::freeprop
