#include "curvwave/common.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <map>
#include <memory>
#include <mutex>

namespace curvwave {

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (slot) return *slot;
  if (n < 1) throw DomainError("gauss_legendre needs n >= 1");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  auto rule = std::make_unique<GaussRule>();
  rule->x.resize(n);
  rule->w.resize(n);
  for (int i = 0; i < n; ++i) {
    double v = es.eigenvectors()(0, i);
    rule->x[i] = es.eigenvalues()(i);
    rule->w[i] = 2.0 * v * v;
  }
  // symmetrize, the eigensolver leaves ~1e-16 asymmetry
  for (int i = 0; i < n / 2; ++i) {
    double x = 0.5 * (rule->x[n - 1 - i] - rule->x[i]);
    double w = 0.5 * (rule->w[n - 1 - i] + rule->w[i]);
    rule->x[i] = -x;
    rule->x[n - 1 - i] = x;
    rule->w[i] = rule->w[n - 1 - i] = w;
  }
  if (n % 2) rule->x[n / 2] = 0.0;
  slot = std::move(rule);
  return *slot;
}

double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        std::vector<double> breaks, double max_width, int order) {
  if (!(b > a)) return 0.0;
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  const GaussRule& g = gauss_legendre(order);
  double sum = 0.0;
  for (size_t k = 0; k + 1 < breaks.size(); ++k) {
    double lo = std::max(a, breaks[k]), hi = std::min(b, breaks[k + 1]);
    if (!(hi > lo)) continue;
    int m = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_width)));
    double w = (hi - lo) / m;
    for (int p = 0; p < m; ++p) {
      double c = lo + (p + 0.5) * w;
      for (size_t i = 0; i < g.x.size(); ++i) sum += 0.5 * w * g.w[i] * f(c + 0.5 * w * g.x[i]);
    }
  }
  return sum;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol) {
  double err = 0.0;
  double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 25, tol, &err);
  if (!std::isfinite(v)) throw QuadratureError("non-finite integral");
  if (err > 1e3 * tol * std::max(1.0, std::abs(v)))
    throw QuadratureError("adaptive quadrature did not reach tolerance");
  return v;
}

}  // namespace curvwave
