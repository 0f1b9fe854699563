#pragma once

#include <cmath>
#include <vector>

#include "radint/sampling.hpp"

namespace testing {

using radint::DelaunayState;
using radint::ModelParams;

inline constexpr double deg = radint::pi_v<double> / 180;

/// Delaunay state from (a, e, I in degrees, argument of perigee, mean anomaly, node).
inline DelaunayState<double> state(double a, double e, double inc_deg, double g = 0.7, double ell = 1.0,
                                   double h = 0.3, const ModelParams<double>& p = {}) {
  const double L = std::sqrt(p.mu * a);
  const double G = L * std::sqrt(1 - e * e);
  return {ell, g, h, L, G, G * std::cos(inc_deg * deg)};
}

/// State with prescribed sin^2 I (prograde).
inline DelaunayState<double> state_s2(double a, double e, double s2, double g, double ell,
                                      const ModelParams<double>& p = {}) {
  return state(a, e, std::asin(std::sqrt(s2)) / deg, g, ell, 0.3, p);
}

inline std::vector<DelaunayState<double>> random_states(std::uint64_t seed, int n, bool exclude_critical = false,
                                                        const ModelParams<double>& p = {}) {
  radint::SamplingRanges ranges;
  ranges.exclude_critical = exclude_critical;
  std::vector<DelaunayState<double>> out;
  for (int k = 0; k < n; ++k) out.push_back(radint::sample_state(seed, static_cast<std::uint64_t>(k), ranges, p));
  return out;
}

/// Mean-anomaly average by the trapezoid rule in l (spectrally accurate for
/// smooth periodic integrands); independent of the true-anomaly quadrature.
template <class F>
double trapezoid_mean_anomaly(const F& field, DelaunayState<double> d, int n = 4096) {
  double sum = 0;
  for (int k = 0; k < n; ++k) {
    d.ell = 2 * radint::pi_v<double> * k / n;
    sum += field(d);
  }
  return sum / n;
}

/// Least-squares slope of log y against log x.
inline double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
  }
  return sxy / sxx;
}

inline double angle_diff(double a, double b) { return std::abs(std::remainder(a - b, 2 * radint::pi_v<double>)); }

}  // namespace testing
