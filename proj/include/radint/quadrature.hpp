#pragma once

// Gauss-Legendre rules and averages over the mean anomaly computed in the
// true anomaly through a^2 eta dl = r^2 df.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "radint/model.hpp"

namespace radint {

template <class Real = double>
struct QuadratureRule {
  std::vector<Real> nodes;    // on [-1, 1]
  std::vector<Real> weights;  // sum to 2
};

template <class Real>
QuadratureRule<Real> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  QuadratureRule<Real> rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const Real eps = 4 * std::numeric_limits<Real>::epsilon();
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Real x = std::cos(pi_v<Real> * (i + Real(0.75)) / (n + Real(0.5)));
    Real dp = 1;
    for (int it = 0; it < 100; ++it) {
      Real p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (x * p1 - p0) / (x * x - 1);
      const Real dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= eps) break;
    }
    const Real w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return rule;
}

/// (1/2pi) * integral of F over one revolution of the mean anomaly at fixed
/// (g, h, L, G, H), evaluated as (1/2pi) int F r^2/(a^2 eta) df.
template <class Real, class F>
Real average_over_mean_anomaly(const F& field, const OrbitGeometry<Real>& o, const ModelParams<Real>& params,
                               int nodes) {
  if (nodes < 16) throw std::invalid_argument("average_over_mean_anomaly: at least 16 nodes required");
  (void)params;
  const QuadratureRule<Real> rule = gauss_legendre<Real>(nodes);
  Real sum = 0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const Real f = pi_v<Real> * (rule.nodes[k] + 1);  // [0, 2 pi]
    const Real r = o.p / (1 + o.e * std::cos(f));
    const Phase<Real> x{mean_from_true(f, o.e), o.g, Real(0), o.L, o.G, o.H};
    sum += rule.weights[k] * pi_v<Real> * field(x) * r * r;
  }
  return sum / (two_pi_v<Real> * o.a * o.a * o.eta);
}

template <class Real = double>
struct AverageResult {
  Real value = 0;
  int nodes = 0;
  Real change = 0;  // |value(nodes) - value(nodes / 2)|, relative to max(|value|, scale)
  bool converged = false;
};

/// Doubles the node count from `start` until successive averages agree to
/// `tol` (relative to max(|value|, scale)) or 1024 nodes have been used.
template <class Real, class F>
AverageResult<Real> average_until_converged(const F& field, const OrbitGeometry<Real>& o,
                                            const ModelParams<Real>& params, int start = 16, Real tol = Real(1e-12),
                                            Real scale = 0) {
  AverageResult<Real> result;
  Real previous = average_over_mean_anomaly(field, o, params, start);
  for (int n = 2 * start; n <= 1024; n *= 2) {
    const Real current = average_over_mean_anomaly(field, o, params, n);
    result.value = current;
    result.nodes = n;
    result.change = std::abs(current - previous) / std::max({std::abs(current), scale, std::numeric_limits<Real>::min()});
    if (result.change < tol) {
      result.converged = true;
      return result;
    }
    previous = current;
  }
  return result;
}

}  // namespace radint
