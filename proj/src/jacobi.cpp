#include "curvwave/jacobi.hpp"

#include <boost/math/interpolators/makima.hpp>
#include <boost/numeric/odeint.hpp>
#include <fstream>
#include <memory>
#include <sstream>

namespace curvwave::jacobi {

namespace odeint = boost::numeric::odeint;
using State = TransportPath::State;

double op_norm(const Mat2& m) {
  Eigen::JacobiSVD<Mat2> svd(m);
  return svd.singularValues()(0);
}

namespace {

// radius beyond which |A1| is negligible
double reach(const PerturbationField& f) {
  if (std::isfinite(f.support)) return f.support;
  if (std::isfinite(f.decay_rate)) return 40.0 / f.decay_rate + 5.0;
  return 12.0;
}

Eigen::Map<const Mat2> blk(const State& x, int b) { return Eigen::Map<const Mat2>(x.data() + 4 * b); }
Eigen::Map<Mat2> blk(State& x, int b) { return Eigen::Map<Mat2>(x.data() + 4 * b); }

struct Rhs {
  double kappa0, alpha;
  const PerturbationField* f;

  void operator()(const State& x, State& dx, double r) const {
    double j = scalar_j(kappa0, r);
    Mat2 A = f->A1(r);
    Mat2 T = j * Mat2::Identity() + blk(x, 0);
    blk(dx, 0) = blk(x, 1);
    blk(dx, 1) = -kappa0 * blk(x, 0) - A * T;
    if (kappa0 < 0)
      blk(dx, 2) = std::exp(-alpha * r) * A * T;
    else
      blk(dx, 2).setZero();
  }

  void second(const State& x, double r, State& ddx) const {
    double j = scalar_j(kappa0, r), jp = scalar_jp(kappa0, r);
    Mat2 A = f->A1(r), dA = f->dA1(r);
    Mat2 T = j * Mat2::Identity() + blk(x, 0);
    Mat2 Tp = jp * Mat2::Identity() + blk(x, 1);
    Mat2 D2 = -kappa0 * blk(x, 0) - A * T;
    blk(ddx, 0) = D2;
    blk(ddx, 1) = -kappa0 * blk(x, 1) - dA * T - A * Tp;
    if (kappa0 < 0)
      blk(ddx, 2) = std::exp(-alpha * r) * (-alpha * A * T + dA * T + A * Tp);
    else
      blk(ddx, 2).setZero();
  }
};

}  // namespace

double PerturbationField::l1_geodesic() const {
  auto g = [this](double r) { return norm_at(r); };
  std::vector<double> br = breakpoints;
  return integrate_panels(g, 0.0, reach(*this), br, 0.25, 20);
}

double PerturbationField::l1_volume(double kappa0) const {
  if (kappa0 < 0 && decay_rate <= 2.0 * std::sqrt(-kappa0)) return inf;
  auto g = [this, kappa0](double r) {
    double j = scalar_j(kappa0, r);
    return 4.0 * pi * norm_at(r) * j * j;
  };
  return integrate_panels(g, 0.0, reach(*this), breakpoints, 0.25, 20);
}

Profile parse_profile(const std::string& s) {
  if (s == "gaussian") return Profile::Gaussian;
  if (s == "exp2") return Profile::Exp2;
  if (s == "compact") return Profile::Compact;
  throw ConfigError("unknown perturbation family: " + s);
}

std::string profile_name(Profile p) {
  switch (p) {
    case Profile::Gaussian: return "gaussian";
    case Profile::Exp2: return "exp2";
    default: return "compact";
  }
}

PerturbationField builtin_perturbation(Profile p, double eps, bool trace_free) {
  Mat2 M = Mat2::Identity();
  if (trace_free) M(1, 1) = -1.0;
  PerturbationField f;
  f.eps = eps;
  f.name = profile_name(p) + (trace_free ? "-tracefree" : "");
  std::function<double(double)> phi, dphi;
  switch (p) {
    case Profile::Gaussian:
      phi = [](double r) { return std::exp(-4.0 * r * r); };
      dphi = [](double r) { return -8.0 * r * std::exp(-4.0 * r * r); };
      break;
    case Profile::Exp2:
      phi = [](double r) { return std::exp(-2.0 * r); };
      dphi = [](double r) { return -2.0 * std::exp(-2.0 * r); };
      f.decay_rate = 2.0;
      break;
    case Profile::Compact: {
      const double R = 0.5;
      phi = [R](double r) {
        double q = r / R;
        return q < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - q * q)) : 0.0;
      };
      dphi = [R, phi](double r) {
        double q = r / R;
        if (q >= 1.0) return 0.0;
        double u = 1.0 - q * q;
        return phi(r) * (-2.0 * r / (R * R)) / (u * u);
      };
      f.support = R;
      f.breakpoints = {R};
      break;
    }
  }
  f.A1 = [eps, M, phi](double r) { return (eps * phi(r) * M).eval(); };
  f.dA1 = [eps, M, dphi](double r) { return (eps * dphi(r) * M).eval(); };
  return f;
}

PerturbationField tabular_perturbation(const std::vector<std::array<double, 4>>& rows) {
  if (rows.size() < 4) throw ConfigError("perturbation table needs at least 4 rows");
  using Spline = boost::math::interpolators::makima<std::vector<double>>;
  std::array<std::shared_ptr<Spline>, 3> sp;
  for (int c = 0; c < 3; ++c) {
    std::vector<double> x, y;
    for (auto& row : rows) {
      x.push_back(row[0]);
      y.push_back(row[c + 1]);
    }
    for (size_t i = 1; i < x.size(); ++i)
      if (!(x[i] > x[i - 1])) throw ConfigError("perturbation table radii must increase");
    if (x.front() != 0.0) throw ConfigError("perturbation table must start at r = 0");
    sp[c] = std::make_shared<Spline>(std::move(x), std::move(y));
  }
  double rmax = rows.back()[0];
  PerturbationField f;
  f.name = "table";
  f.support = rmax;
  f.A1 = [sp, rmax](double r) {
    Mat2 m = Mat2::Zero();
    if (r > rmax) return m;
    m(0, 0) = (*sp[0])(r);
    m(0, 1) = m(1, 0) = (*sp[1])(r);
    m(1, 1) = (*sp[2])(r);
    return m;
  };
  f.dA1 = [sp, rmax](double r) {
    Mat2 m = Mat2::Zero();
    if (r > rmax) return m;
    m(0, 0) = sp[0]->prime(r);
    m(0, 1) = m(1, 0) = sp[1]->prime(r);
    m(1, 1) = sp[2]->prime(r);
    return m;
  };
  double e = 0;
  for (auto& row : rows) e = std::max(e, f.norm_at(row[0]));
  f.eps = e;
  return f;
}

PerturbationField load_perturbation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open perturbation table " + path);
  std::vector<std::array<double, 4>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ss(line);
    std::array<double, 4> row{};
    if (!(ss >> row[0] >> row[1] >> row[2] >> row[3]))
      throw ConfigError("bad row in perturbation table: " + line);
    rows.push_back(row);
  }
  return tabular_perturbation(rows);
}

std::pair<double, double> area_element(const TransportState& s) {
  double a = s.T.determinant();
  Mat2 adj;
  adj << s.T(1, 1), -s.T(0, 1), -s.T(1, 0), s.T(0, 0);
  return {a, (adj * s.dT).trace()};
}

TransportPath integrate_transport(double kappa0, const PerturbationField& field, double r_max,
                                  double tol) {
  if (!(r_max > 0)) throw DomainError("r_max must be positive");
  if (!(tol > 0)) throw DomainError("tolerance must be positive");
  if (kappa0 > 0 && field.eps == 0.0 && r_max >= pi / std::sqrt(kappa0))
    throw ConjugatePointError("conjugate point at pi / sqrt(kappa0)");
  TransportPath path;
  path.kappa0_ = kappa0;
  path.alpha_ = kappa0 < 0 ? std::sqrt(-kappa0) : 0.0;
  path.field_ = field;
  Rhs rhs{kappa0, path.alpha_, &path.field_};

  auto stepper = odeint::make_dense_output(tol * 1e-18, tol, 0.05, odeint::runge_kutta_dopri5<State>());
  State x{};
  stepper.initialize(x, 0.0, 1e-3);
  auto push = [&](double r, const State& s) {
    State d{}, dd{};
    rhs(s, d, r);
    rhs.second(s, r, dd);
    path.r_.push_back(r);
    path.x_.push_back(s);
    path.dx_.push_back(d);
    path.ddx_.push_back(dd);
  };
  push(0.0, x);
  try {
    while (stepper.current_time() < r_max) {
      stepper.do_step(std::ref(rhs));
      double r = stepper.current_time();
      const State& s = stepper.current_state();
      for (double v : s)
        if (!std::isfinite(v)) throw IntegrationError("transport solution became non-finite");
      push(r, s);
      if (path.area(r).a <= 0.0)
        throw ConjugatePointError("det T vanished at r = " + std::to_string(r));
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw IntegrationError(std::string("transport integration failed: ") + e.what());
  }
  path.build_cumulative();
  return path;
}

State TransportPath::raw(double r, int) const {
  if (r < 0 || r > r_.back()) throw DomainError("radius outside the integrated range");
  size_t n = std::upper_bound(r_.begin(), r_.end(), r) - r_.begin();
  if (n >= r_.size()) n = r_.size() - 1;
  if (n == 0) n = 1;
  size_t m = n - 1;
  double h = r_[n] - r_[m], s = (r - r_[m]) / h;
  double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  double H0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
  double H1 = s - 6 * s3 + 8 * s4 - 3 * s5;
  double H2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
  double H3 = 10 * s3 - 15 * s4 + 6 * s5;
  double H4 = -4 * s3 + 7 * s4 - 3 * s5;
  double H5 = 0.5 * s3 - s4 + 0.5 * s5;
  State out{};
  for (int i = 0; i < 12; ++i)
    out[i] = H0 * x_[m][i] + h * H1 * dx_[m][i] + h * h * H2 * ddx_[m][i] + H3 * x_[n][i] +
             h * H4 * dx_[n][i] + h * h * H5 * ddx_[n][i];
  return out;
}

Mat2 TransportPath::deviation(double r) const { return blk(raw(r, 0), 0); }
Mat2 TransportPath::deviation_prime(double r) const { return blk(raw(r, 0), 1); }

TransportState TransportPath::state(double r) const {
  State x = raw(r, 0);
  TransportState s;
  s.r = r;
  s.T = scalar_j(kappa0_, r) * Mat2::Identity() + blk(x, 0);
  s.dT = scalar_jp(kappa0_, r) * Mat2::Identity() + blk(x, 1);
  return s;
}

double TransportPath::area_minus_j2(double r) const {
  Mat2 D = deviation(r);
  return scalar_j(kappa0_, r) * D.trace() + D.determinant();
}

AreaSample TransportPath::area(double r) const {
  TransportState s = state(r);
  Mat2 T2 = -(kappa0_ * Mat2::Identity() + field_.A1(r)) * s.T;
  const Mat2& T = s.T;
  const Mat2& P = s.dT;
  auto [a, da] = area_element(s);
  double d2a = T2(0, 0) * T(1, 1) + 2 * P(0, 0) * P(1, 1) + T(0, 0) * T2(1, 1) -
               (T2(0, 1) * T(1, 0) + 2 * P(0, 1) * P(1, 0) + T(0, 1) * T2(1, 0));
  return {a, da, d2a};
}

Mat2 TransportPath::wronskian(double r) const {
  State x = raw(r, 0);
  Mat2 D = blk(x, 0), Dp = blk(x, 1);
  double j = scalar_j(kappa0_, r), jp = scalar_jp(kappa0_, r);
  return j * (Dp.transpose() - Dp) + jp * (D - D.transpose()) + Dp.transpose() * D -
         D.transpose() * Dp;
}

Mat2 TransportPath::shape(double r) const {
  TransportState s = state(r);
  return s.dT * s.T.inverse();
}

Mat2 TransportPath::weighted_step_integral(int n, double lo, double hi, int kind) const {
  (void)n;
  const GaussRule& g = gauss_legendre(10);
  Mat2 acc = Mat2::Zero();
  if (!(hi > lo)) return acc;
  for (size_t i = 0; i < g.x.size(); ++i) {
    double s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * g.x[i];
    double w = kind == 0 ? std::exp(-alpha_ * s)
                         : (kind == 1 ? std::sinh(alpha_ * s) : std::cosh(alpha_ * s));
    acc += 0.5 * (hi - lo) * g.w[i] * w * field_.A1(s) * state(s).T;
  }
  return acc;
}

void TransportPath::build_cumulative() {
  size_t N = r_.size();
  tail_e_.assign(N, Mat2::Zero());
  cum_s_.assign(N, Mat2::Zero());
  cum_c_.assign(N, Mat2::Zero());
  if (kappa0_ >= 0) return;
  for (size_t n = N - 1; n-- > 0;)
    tail_e_[n] = tail_e_[n + 1] + weighted_step_integral(n, r_[n], r_[n + 1], 0);
  for (size_t n = 1; n < N; ++n) {
    cum_s_[n] = cum_s_[n - 1] + weighted_step_integral(n, r_[n - 1], r_[n], 1);
    cum_c_[n] = cum_c_[n - 1] + weighted_step_integral(n, r_[n - 1], r_[n], 2);
  }
}

Mat2 TransportPath::scattering_integral() const {
  if (kappa0_ >= 0) throw DomainError("scattering data needs negative curvature");
  return blk(x_.back(), 2);
}

Mat2 TransportPath::limit_remainder(double r) const {
  if (kappa0_ >= 0) throw DomainError("scattering data needs negative curvature");
  if (!(r > 0) || r > r_.back()) throw DomainError("radius outside the integrated range");
  size_t n = std::upper_bound(r_.begin(), r_.end(), r) - r_.begin();
  if (n >= r_.size()) n = r_.size() - 1;
  size_t m = n - 1;
  Mat2 tail = tail_e_[n] + weighted_step_integral(m, r, r_[n], 0);
  Mat2 cs = cum_s_[m] + weighted_step_integral(m, r_[m], r, 1);
  double a = alpha_;
  return tail + (std::exp(-a * r) / std::sinh(a * r)) * cs;
}

Mat2 TransportPath::derivative_remainder(double r) const {
  if (kappa0_ >= 0) throw DomainError("scattering data needs negative curvature");
  if (!(r > 0) || r > r_.back()) throw DomainError("radius outside the integrated range");
  size_t n = std::upper_bound(r_.begin(), r_.end(), r) - r_.begin();
  if (n >= r_.size()) n = r_.size() - 1;
  size_t m = n - 1;
  Mat2 tail = tail_e_[n] + weighted_step_integral(m, r, r_[n], 0);
  Mat2 cc = cum_c_[m] + weighted_step_integral(m, r_[m], r, 2);
  double a = alpha_;
  return a * tail - (a * std::exp(-a * r) / std::sinh(a * r)) * cc;
}

ScatteringData scattering_data(double kappa0, const PerturbationField& field, double tol) {
  if (!(kappa0 < 0)) throw DomainError("scattering data needs negative curvature");
  double alpha = std::sqrt(-kappa0);
  double l1 = field.l1_geodesic();
  if (l1 >= alpha)
    throw ConvergenceError("int |A1| >= alpha0: outside the contraction regime");
  double R = std::isfinite(field.support) ? field.support + 1.0 : reach(field);
  TransportPath p = integrate_transport(kappa0, field, R, tol);
  ScatteringData d;
  d.I = p.scattering_integral();
  d.T_inf = Mat2::Identity() - d.I;
  d.l1_geodesic = l1;
  d.r_used = p.r_max();
  double tail = 0.0;
  if (!std::isfinite(field.support)) {
    auto g = [&](double r) { return field.norm_at(r); };
    tail = integrate_panels(g, d.r_used, d.r_used + 40.0, {}, 1.0, 10);
  }
  d.tail_bound = tail * (1.0 + op_norm(d.I)) / (1.0 - l1 / alpha);
  return d;
}

}  // namespace curvwave::jacobi
