#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace hyperreg {

/// Gauss-Legendre rule on [-1, 1] together with the spectral integration
/// matrix: (cumulative * v)(k) approximates the integral from -1 to node k of
/// the interpolant of v.
template <typename Real>
struct GaussLegendre {
  using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

  Vector nodes;
  Vector weights;
  Matrix cumulative;

  explicit GaussLegendre(int n) : nodes(n), weights(n), cumulative(n, n) {
    for (int i = 0; i < n; ++i) {
      Real x = std::cos(std::numbers::pi_v<Real> * (Real(i) + Real(0.75)) / (Real(n) + Real(0.5)));
      Real dp = 0;
      for (int it = 0; it < 100; ++it) {
        auto [p, d] = legendre_with_derivative(n, x);
        dp = d;
        const Real dx = p / d;
        x -= dx;
        if (std::abs(dx) < Real(4) * std::numeric_limits<Real>::epsilon()) break;
      }
      dp = legendre_with_derivative(n, x).second;
      nodes(n - 1 - i) = x;
      weights(n - 1 - i) = Real(2) / ((Real(1) - x * x) * dp * dp);
    }
    // Legendre values at the nodes, P(m, k) = P_m(x_k) for m = 0..n.
    Matrix p(n + 1, n);
    for (int k = 0; k < n; ++k) {
      p(0, k) = 1;
      if (n >= 1) p(1, k) = nodes(k);
      for (int m = 1; m < n; ++m)
        p(m + 1, k) = ((2 * m + 1) * nodes(k) * p(m, k) - m * p(m - 1, k)) / Real(m + 1);
    }
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) {
        Real s = 0;
        for (int m = 0; m < n; ++m) {
          const Real c = Real(2 * m + 1) / 2 * weights(j) * p(m, j);
          const Real prim = m == 0 ? nodes(k) + 1
                                   : (p(m + 1, k) - p(m - 1, k)) / Real(2 * m + 1);
          s += c * prim;
        }
        cumulative(k, j) = s;
      }
    }
  }

  int size() const { return static_cast<int>(nodes.size()); }

  static std::pair<Real, Real> legendre_with_derivative(int n, Real x) {
    Real p0 = 1, p1 = x;
    if (n == 0) return {1, 0};
    for (int k = 2; k <= n; ++k) {
      const Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const Real d = n * (x * p1 - p0) / (x * x - 1);
    return {p1, d};
  }
};

/// Cached rule of the given order; thread-safe.
template <typename Real = double>
const GaussLegendre<Real>& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, GaussLegendre<Real>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, GaussLegendre<Real>(n)).first;
  return it->second;
}

}  // namespace hyperreg
