#include "curvwave/kato.hpp"

#include <boost/math/interpolators/makima.hpp>
#include <fstream>
#include <memory>
#include <sstream>

#include "curvwave/jacobi_scalar.hpp"

namespace curvwave::kato {

using manifold::Kind;

double RadialPotential::reach() const {
  if (std::isfinite(support)) return support;
  if (std::isfinite(decay_rate) && decay_rate > 0) return std::min(200.0, 40.0 / decay_rate + 2.0);
  return 60.0;
}

RadialPotential zero_potential() { return {}; }

RadialPotential ball_potential(double amplitude, double radius) {
  if (!(radius > 0)) throw ConfigError("ball radius must be positive");
  RadialPotential p;
  p.name = "ball";
  p.V = [amplitude, radius](double r) {
    if (r < radius) return amplitude;
    return r == radius ? 0.5 * amplitude : 0.0;
  };
  p.breakpoints = {radius};
  p.support = radius;
  return p;
}

RadialPotential gaussian_potential(double amplitude, double width) {
  if (!(width > 0)) throw ConfigError("gaussian width must be positive");
  RadialPotential p;
  p.name = "gaussian";
  p.V = [amplitude, width](double r) { return amplitude * std::exp(-r * r / (width * width)); };
  // effective support: exp(-r^2/w^2) sinh(r)^2 below 1e-17
  p.support = width * width + width * std::sqrt(width * width + 40.0);
  return p;
}

RadialPotential exponential_potential(double amplitude, double rate) {
  if (!(rate > 0)) throw ConfigError("decay rate must be positive");
  RadialPotential p;
  p.name = "exp";
  p.V = [amplitude, rate](double r) { return amplitude * std::exp(-rate * r); };
  p.decay_rate = rate;
  return p;
}

RadialPotential power_potential(double pw, double kappa0) {
  RadialPotential p;
  p.name = "power";
  p.V = [pw, kappa0](double r) { return std::pow(1.0 + jacobi::scalar_j(kappa0, r), -pw); };
  p.decay_rate = kappa0 < 0 ? pw * std::sqrt(-kappa0) : 0.0;
  return p;
}

RadialPotential load_potential(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open potential table " + path);
  std::vector<double> x, y;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ss(line);
    double r, v;
    if (!(ss >> r >> v)) throw ConfigError("bad row in potential table: " + line);
    if (!x.empty() && !(r > x.back())) throw ConfigError("potential table radii must increase");
    x.push_back(r);
    y.push_back(v);
  }
  if (x.size() < 4) throw ConfigError("potential table needs at least 4 rows");
  double rmax = x.back();
  auto sp = std::make_shared<boost::math::interpolators::makima<std::vector<double>>>(std::move(x),
                                                                                       std::move(y));
  RadialPotential p;
  p.name = "table";
  p.V = [sp, rmax](double r) { return r > rmax ? 0.0 : (*sp)(r); };
  p.support = rmax;
  return p;
}

namespace {

double psi_j(const Space& sp, double d, Weight w, double delta) {
  double j = sp.j(d);
  switch (w) {
    case Weight::Kato:
      return 1.0;
    case Weight::Modified:
      return d < 1.0 ? j / d : j;
    default:
      return j / jacobi::scalar_j_delta(sp.alpha0, delta, d);
  }
}

// exponential growth rate of psi(d) j(d) j(r) against which |V| must decay
double growth(const Space& sp, Weight w, double delta) {
  if (sp.kind != Kind::Hyperbolic) return 0.0;
  switch (w) {
    case Weight::Kato: return sp.alpha0;
    case Weight::Modified: return 2.0 * sp.alpha0;
    default: return sp.alpha0 + delta;
  }
}

double inner(const Space& sp, double lo, double hi, Weight w, double delta, int order) {
  std::vector<double> br;
  if (w == Weight::Modified && lo < 1.0 && hi > 1.0) br.push_back(1.0);
  return integrate_panels([&](double d) { return psi_j(sp, d, w, delta); }, lo, hi, br, 0.5, order);
}

}  // namespace

double weighted_integral(const Space& sp, const RadialPotential& V, double rho, Weight w,
                         double delta, const Sampler& s) {
  double R = V.reach();
  if (sp.kind == Kind::Sphere) R = std::min(R, sp.max_radius());
  std::vector<double> br = V.breakpoints;
  if (rho == 0.0) {
    auto f = [&](double r) {
      if (r == 0.0) return 0.0;
      double j = sp.j(r);
      return 4.0 * pi * std::abs(V.V(r)) * j * j * psi_j(sp, r, w, delta) / j;
    };
    if (w == Weight::Modified) br.push_back(1.0);
    return integrate_panels(f, 0.0, R, br, s.panel, s.order);
  }
  double jr0 = sp.j(rho);
  double L = sp.kind == Kind::Sphere ? sp.max_radius() : inf;
  auto f = [&](double r) {
    double v = std::abs(V.V(r));
    if (v == 0.0) return 0.0;
    double lo = std::abs(r - rho), hi = r + rho;
    if (hi > L) hi = 2.0 * L - hi;
    return 2.0 * pi / jr0 * v * sp.j(r) * inner(sp, lo, hi, w, delta, s.order);
  };
  br.push_back(rho);
  if (w == Weight::Modified) {
    for (double b : {rho - 1.0, rho + 1.0, 1.0 - rho})
      if (b > 0) br.push_back(b);
  }
  if (sp.kind == Kind::Sphere) br.push_back(L - rho);
  return integrate_panels(f, 0.0, R, br, s.panel, s.order);
}

namespace {

NormResult sweep(const Space& sp, const RadialPotential& V, Weight w, double delta, const Sampler& s) {
  if (w == Weight::Delta && !(delta > 0 && delta < sp.alpha0))
    throw DomainError("delta must lie in (0, alpha0)");
  NormResult out;
  double g = growth(sp, w, delta);
  if (!std::isfinite(V.support) && V.decay_rate <= g) {
    out.value = inf;
    out.finite = false;
    out.diagnostic = "potential decays at rate " + std::to_string(V.decay_rate) +
                     ", integral diverges against weight growth " + std::to_string(g);
    return out;
  }
  double rho_max = s.rho_max;
  if (sp.kind == Kind::Sphere) rho_max = std::min(rho_max, sp.max_radius());
  for (int attempt = 0; attempt < 6; ++attempt) {
    std::vector<double> vals(s.points);
    parallel_for(s.points, s.threads, [&](int i) {
      double rho = rho_max * i / (s.points - 1);
      vals[i] = weighted_integral(sp, V, rho, w, delta, s);
    });
    int best = 0;
    for (int i = 1; i < s.points; ++i)
      if (vals[i] > vals[best]) best = i;
    out.value = vals[best];
    out.argmax_rho = rho_max * best / (s.points - 1);
    if (!std::isfinite(out.value)) {
      out.finite = false;
      out.diagnostic = "non-finite integral";
      return out;
    }
    bool edge = best == s.points - 1 && vals[best] > 0;
    if (!edge || !s.auto_extend || sp.kind == Kind::Sphere) {
      if (edge) out.diagnostic = "sup attained at the sweep edge";
      return out;
    }
    out.extended = true;
    rho_max *= 2.0;
  }
  out.diagnostic = "sup still at the sweep edge after extension";
  return out;
}

}  // namespace

NormResult kato_norm(const Space& sp, const RadialPotential& V, const Sampler& s) {
  return sweep(sp, V, Weight::Kato, 0.0, s);
}

NormResult modified_kato_norm(const Space& sp, const RadialPotential& V, const Sampler& s) {
  return sweep(sp, V, Weight::Modified, 0.0, s);
}

NormResult kato_delta_norm(const Space& sp, const RadialPotential& V, double delta, const Sampler& s) {
  return sweep(sp, V, Weight::Delta, delta, s);
}

double l1_norm(const Space& sp, const RadialPotential& V, const Sampler& s) {
  if (sp.kind == Kind::Hyperbolic && !std::isfinite(V.support) && V.decay_rate <= 2 * sp.alpha0)
    return inf;
  double R = V.reach();
  if (sp.kind == Kind::Sphere) R = std::min(R, sp.max_radius());
  auto f = [&](double r) {
    double j = sp.j(r);
    return 4.0 * pi * std::abs(V.V(r)) * j * j;
  };
  return integrate_panels(f, 0.0, R, V.breakpoints, s.panel, s.order);
}

NormResult l1_gamma_norm(const Space& sp, const RadialPotential& F, const GeodesicSampler& s) {
  if (sp.kind == Kind::Sphere) throw DomainError("geodesic integrals need a non-compact space");
  NormResult out;
  if (!std::isfinite(F.support) && !(F.decay_rate > 0)) {
    out.value = inf;
    out.finite = false;
    out.diagnostic = "field does not decay along geodesics";
    return out;
  }
  double R = F.reach();
  double k = sp.root();
  // arclength from the foot point at which the distance to the origin reaches D
  auto s_at = [&](double b, double D) {
    if (D <= b) return 0.0;
    if (sp.kind == Kind::Flat) return std::sqrt(D * D - b * b);
    return std::acosh(std::cosh(k * D) / std::cosh(k * b)) / k;
  };
  std::vector<double> vals(s.points);
  for (int i = 0; i < s.points; ++i) {
    double b = s.b_max * i / (s.points - 1);
    double smax = s_at(b, R);
    std::vector<double> br;
    for (double d : F.breakpoints) br.push_back(s_at(b, d));
    auto f = [&](double t) { return std::abs(F.V(manifold::law_of_cosines(sp, b, t, pi / 2))); };
    vals[i] = 2.0 * integrate_panels(f, 0.0, smax, br, 0.25, s.order);
  }
  int best = 0;
  for (int i = 1; i < s.points; ++i)
    if (vals[i] > vals[best]) best = i;
  out.value = vals[best];
  out.argmax_rho = s.b_max * best / (s.points - 1);
  if (best == s.points - 1 && vals[best] > 0) out.diagnostic = "sup attained at the sweep edge";
  return out;
}

KatoReport kato_report(const Space& sp, const RadialPotential& V, double delta, const Sampler& s) {
  if (!(sp.kappa0 < 0)) throw DomainError("Kato norms are computed on H3");
  KatoReport r;
  r.delta = delta;
  r.kato = kato_norm(sp, V, s);
  r.modified = modified_kato_norm(sp, V, s);
  r.delta_norm = kato_delta_norm(sp, V, delta, s);
  r.l1 = l1_norm(sp, V, s);
  return r;
}

}  // namespace curvwave::kato
