#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace curvwave {

inline constexpr double pi = std::numbers::pi;
inline constexpr double inf = std::numeric_limits<double>::infinity();

using Mat2 = Eigen::Matrix2d;
using Vec4 = Eigen::Vector4d;

// error hierarchy; numerical() decides the cli exit code
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
  virtual bool numerical() const { return true; }
};
struct DomainError : Error { using Error::Error; };
struct ConstraintViolation : Error { using Error::Error; };
struct NormalizationError : Error { using Error::Error; };
struct IntegrationError : Error { using Error::Error; };
struct ConjugatePointError : Error { using Error::Error; };
struct ConvergenceError : Error { using Error::Error; };
struct DivergenceError : Error { using Error::Error; };
struct QuadratureError : Error { using Error::Error; };
struct ConfigError : Error {
  using Error::Error;
  bool numerical() const override { return false; }
};

// Gauss-Legendre nodes on [-1,1] (Golub-Welsch)
struct GaussRule {
  std::vector<double> x, w;
};
const GaussRule& gauss_legendre(int n);

// composite Gauss-Legendre on [a,b] split at the given breakpoints
double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        std::vector<double> breaks, double max_width, int order);

// adaptive Gauss-Kronrod (boost) with error check
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-13);

// static partition of [0,n) over threads; body(i) must only write its own slot
template <class F>
void parallel_for(int n, int threads, F&& body) {
  if (threads <= 1 || n < 2) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  threads = std::min(threads, n);
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      for (int i = w; i < n; i += threads) body(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace curvwave
