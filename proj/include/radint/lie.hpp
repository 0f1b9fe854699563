#pragma once

// Numeric Lie-transform engine: finite-difference Poisson brackets, the
// Kepler Lie derivative, homological residuals, the Deprit triangle and the
// mean <-> osculating maps built on it.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "radint/generators.hpp"
#include "radint/registry.hpp"

namespace radint {

enum class FdScheme { central, richardson };

template <class Real = double>
struct BracketConfig {
  FdScheme scheme = FdScheme::richardson;
  Real base_step = Real(1e-6);  // relative: h = base_step * max(1, |x_i|)
  // Step used to differentiate fields that are themselves finite differences;
  // roundoff grows like eps / (inner step * outer step).
  Real nested_step = std::numeric_limits<Real>::digits > 53 ? Real(2e-5) : Real(1e-3);
  Chart chart = Chart::delaunay;

  void validate() const {
    if (!(base_step > Real(1e-8) && base_step < Real(1e-2)))
      throw domain_error("BracketConfig: base_step must lie in (1e-8, 1e-2)");
    if (!(nested_step > Real(1e-8) && nested_step < Real(1e-1)))
      throw domain_error("BracketConfig: nested_step must lie in (1e-8, 1e-1)");
  }

  Real step(int depth) const { return depth == 0 ? base_step : nested_step; }
};

/// Central difference with absolute step h, optionally Richardson-extrapolated once.
template <class Real, class F>
Real partial_step(const F& field, const Phase<Real>& x, int i, Real h, FdScheme scheme) {
  auto central = [&](Real step) {
    Phase<Real> xp = x, xm = x;
    xp[i] += step;
    xm[i] -= step;
    return (field(xp) - field(xm)) / (xp[i] - xm[i]);
  };
  if (scheme == FdScheme::central) return central(h);
  const Real coarse = central(h);
  const Real fine = central(h / 2);
  return (4 * fine - coarse) / 3;
}

/// Relative step: h = relative_step * max(1, |x_i|).
template <class Real, class F>
Real partial(const F& field, const Phase<Real>& x, int i, Real relative_step, FdScheme scheme) {
  return partial_step(field, x, i, relative_step * std::max(Real(1), std::abs(x[i])), scheme);
}

/// In the Delaunay chart the steps in G and H are also kept inside
/// G < L and |H| < G, where e and s stop being smooth.
template <class Real>
Real partial(const ScalarField<Real>& field, const Phase<Real>& x, int i, const BracketConfig<Real>& cfg) {
  Real h = cfg.step(field.depth) * std::max(Real(1), std::abs(x[i]));
  if (field.chart == Chart::delaunay) {
    if (i == 4 && x[3] > std::abs(x[4])) h = std::min(h, (x[3] - std::abs(x[4])) / 4);
    if (i == 5 && x[4] > std::abs(x[5])) h = std::min(h, (x[4] - std::abs(x[5])) / 4);
  }
  return partial_step(field, x, i, h, cfg.scheme);
}

template <class Real>
Phase<Real> gradient(const ScalarField<Real>& field, const Phase<Real>& x, const BracketConfig<Real>& cfg) {
  Phase<Real> grad{};
  for (int i = 0; i < 6; ++i) grad[i] = partial(field, x, i, cfg);
  return grad;
}

/// {F; G} = sum_i dF/dq_i dG/dp_i - dF/dp_i dG/dq_i.
template <class Real>
Real poisson_bracket(const ScalarField<Real>& F, const ScalarField<Real>& G, const Phase<Real>& x,
                     const BracketConfig<Real>& cfg) {
  if (F.is_zero() || G.is_zero()) return 0;
  const Phase<Real> gf = gradient(F, x, cfg);
  const Phase<Real> gg = gradient(G, x, cfg);
  Real sum = 0;
  for (int i = 0; i < 3; ++i) sum += gf[i] * gg[i + 3] - gf[i + 3] * gg[i];
  return sum;
}

template <class Real>
ScalarField<Real> bracket_field(const ScalarField<Real>& F, const ScalarField<Real>& G,
                                const BracketConfig<Real>& cfg) {
  if (F.is_zero() || G.is_zero()) return ScalarField<Real>::zero(F.chart);
  return {"{" + F.name + ";" + G.name + "}", F.chart,
          [F, G, cfg](const Phase<Real>& x) { return poisson_bracket(F, G, x, cfg); }, std::max(F.depth, G.depth) + 1};
}

template <class Real>
ScalarField<Real> sum_field(const ScalarField<Real>& F, const ScalarField<Real>& G) {
  if (F.is_zero()) return G;
  if (G.is_zero()) return F;
  return {F.name + "+" + G.name, F.chart, [F, G](const Phase<Real>& x) { return F(x) + G(x); },
          std::max(F.depth, G.depth)};
}

template <class Real>
ScalarField<Real> scaled_field(Real factor, const ScalarField<Real>& F) {
  if (F.is_zero() || factor == 0) return ScalarField<Real>::zero(F.chart);
  return {F.name, F.chart, [F, factor](const Phase<Real>& x) { return factor * F(x); }, F.depth};
}

/// L0(W) = {W; H00} = n dW/dl in Delaunay variables.
template <class Real>
Real lie_derivative_L0(const ScalarField<Real>& W, const Phase<Real>& x, const ModelParams<Real>& params,
                       const BracketConfig<Real>& cfg = {}) {
  if (W.is_zero()) return 0;
  const Real n = params.mu * params.mu / (x[3] * x[3] * x[3]);
  return n * partial(W, x, 0, cfg);
}

// ---------------------------------------------------------------------------
// Homological equation

/// Natural size of an order-m term, |mu C20^m R^2m / p^(2m+1)|, used to scale residuals.
template <class Real>
Real term_scale(int order, const OrbitGeometry<Real>& o, const ModelParams<Real>& params) {
  const Real c = std::abs(params.c20) * params.re * params.re / (o.p * o.p);
  return std::abs(params.mu / o.p * std::pow(c, order));
}

/// L0(W_m) - (H~0m - H0m) at a Delaunay point.  The second-order known terms
/// are assembled from numeric brackets so the printed generators are checked
/// against the first-order terms, not against another printed formula.
template <class Real>
Real homological_residual(Family family, int order, const Phase<Real>& x, const ModelParams<Real>& params,
                          const BracketConfig<Real>& cfg = {}) {
  if (order == 1) {
    if (family == Family::perigee) {
      // K~01 = K10 = K01, so the equation reads L0(A1) = 0.
      return lie_derivative_L0(term_field<Real>("A1_PERIGEE", params), x, params, cfg);
    }
    const auto W1 = generator_field<Real>(GeneratorChoice::defaults(family, 1), 1, params);
    const auto known = term_field<Real>("Htilde01", params);
    const auto H01 = term_field<Real>("H01_" + to_string(family), params);
    return lie_derivative_L0(W1, x, params, cfg) - (known(x) - H01(x));
  }
  if (order == 2) {
    const BracketConfig<Real> inner = cfg;
    if (family == Family::neutral) {
      const auto W1 = generator_field<Real>(GeneratorChoice::defaults(family, 1), 1, params);
      const auto W2 = term_field<Real>("W2_NEUTRAL", params);
      const auto first = sum_field(term_field<Real>("H01_NEUTRAL", params), term_field<Real>("H10", params));
      const Real known = poisson_bracket(first, W1, x, inner);
      return lie_derivative_L0(W2, x, params, cfg) - (known - term_field<Real>("H02_NEUTRAL", params)(x));
    }
    if (family == Family::perigee) {
      const auto A1 = term_field<Real>("A1_PERIGEE", params);
      const auto W2 = term_field<Real>("W2_PERIGEE", params);
      const auto K01 = term_field<Real>("K01_PERIGEE", params);
      const Real known = term_field<Real>("H02_NEUTRAL", params)(x) + 2 * poisson_bracket(K01, A1, x, inner);
      return lie_derivative_L0(W2, x, params, cfg) - (known - term_field<Real>("K02_PERIGEE", params)(x));
    }
    throw unsupported_term_error("homological_residual: order 2 needs W2 (NEUTRAL or PERIGEE)");
  }
  throw unsupported_term_error("homological_residual: order must be 1 or 2");
}

// ---------------------------------------------------------------------------
// Deprit triangle

/// Fields H_{m,0} (m = 0, 1, ...) and W_k (k = 1, 2, ...).  Entries past the
/// end of `h` are zero when `vanishing_tail` is set and missing otherwise.
template <class Real = double>
struct TermTable {
  std::vector<ScalarField<Real>> h;
  std::vector<ScalarField<Real>> w;
  bool vanishing_tail = true;
  BracketConfig<Real> cfg{};
};

inline long long binomial(int n, int k) {
  long long value = 1;
  for (int i = 1; i <= k; ++i) value = value * (n - k + i) / i;
  return value;
}

/// F(n, q) = F(n+1, q-1) + sum_m C(n, m) {F(n-m, q-1); W(m+1)} as a field.
template <class Real>
ScalarField<Real> triangle_field(const TermTable<Real>& table, int n, int q) {
  if (n < 0 || q < 0) throw std::invalid_argument("deprit_triangle: indices must be non-negative");
  if (q == 0) {
    if (n < static_cast<int>(table.h.size())) return table.h[static_cast<std::size_t>(n)];
    if (table.vanishing_tail) return ScalarField<Real>::zero();
    throw missing_term_error("deprit_triangle: H_{" + std::to_string(n) + ",0} not registered");
  }
  ScalarField<Real> result = triangle_field(table, n + 1, q - 1);
  for (int m = 0; m <= n; ++m) {
    const ScalarField<Real> lower = triangle_field(table, n - m, q - 1);
    if (lower.is_zero()) continue;
    if (m >= static_cast<int>(table.w.size()))
      throw missing_term_error("deprit_triangle: W_" + std::to_string(m + 1) + " not registered");
    const ScalarField<Real> term = bracket_field(lower, table.w[static_cast<std::size_t>(m)], table.cfg);
    result = sum_field(result, scaled_field(static_cast<Real>(binomial(n, m)), term));
  }
  return result;
}

template <class Real>
Real deprit_triangle(const TermTable<Real>& table, int n, int q, const Phase<Real>& x) {
  return triangle_field(table, n, q)(x);
}

// ---------------------------------------------------------------------------
// Mean <-> osculating maps

enum class Direction { mean_to_osculating, osculating_to_mean };
enum class Inversion { fixed_point, series };

struct TransformSpec {
  std::vector<Family> families{Family::neutral};
  int order = 1;
  Direction direction = Direction::mean_to_osculating;
  Inversion inversion = Inversion::fixed_point;
  double tolerance = 1e-12;
  int max_iterations = 100;

  void validate() const {
    if (families.empty()) throw std::invalid_argument("TransformSpec: empty family sequence");
    if (order != 1 && order != 2) throw unsupported_term_error("TransformSpec: order must be 1 or 2");
    for (std::size_t i = 0; i < families.size(); ++i) {
      const Family f = families[i];
      if (order == 2 && f != Family::neutral && f != Family::perigee)
        throw unsupported_term_error("TransformSpec: " + to_string(f) + " has no W2");
      if (f == Family::perigee && (i == 0 || families[i - 1] != Family::neutral))
        throw unsupported_term_error("TransformSpec: PERIGEE must follow NEUTRAL");
    }
  }
};

/// Generators W_1..W_order of one family with its default A1.
template <class Real>
std::vector<ScalarField<Real>> family_generators(Family family, int order, const ModelParams<Real>& params) {
  std::vector<ScalarField<Real>> w;
  for (int k = 1; k <= order; ++k) w.push_back(generator_field<Real>(GeneratorChoice::defaults(family, k), k, params));
  return w;
}

namespace detail {

template <class Real>
ScalarField<Real> coordinate_field(int i) {
  static const char* names[] = {"ell", "g", "h", "L", "G", "H"};
  return {names[i], Chart::delaunay, [i](const Phase<Real>& x) { return x[i]; }};
}

/// Increment x - x' = sum_m eps^m/m! x_{0,m}(x') of one family's forward map.
template <class Real>
Phase<Real> forward_increment(const std::vector<ScalarField<Real>>& w, int order, const Phase<Real>& x,
                              const ModelParams<Real>& params, const BracketConfig<Real>& cfg) {
  Phase<Real> dx{};
  for (int i = 0; i < 6; ++i) {
    TermTable<Real> table{{coordinate_field<Real>(i)}, w, true, cfg};
    Real weight = 1;
    for (int m = 1; m <= order; ++m) {
      weight *= params.epsilon / m;
      dx[i] += weight * deprit_triangle(table, 0, m, x);
    }
  }
  return dx;
}

/// Explicit inverse to second order: x' = x - eps x01 + eps^2/2 (2{x01; W1} - x02).
template <class Real>
Phase<Real> inverse_series_increment(const std::vector<ScalarField<Real>>& w, int order, const Phase<Real>& x,
                                     const ModelParams<Real>& params, const BracketConfig<Real>& cfg) {
  Phase<Real> dx{};
  const Real eps = params.epsilon;
  for (int i = 0; i < 6; ++i) {
    TermTable<Real> table{{coordinate_field<Real>(i)}, w, true, cfg};
    const ScalarField<Real> x01 = triangle_field(table, 0, 1);
    dx[i] = -eps * x01(x);
    if (order >= 2) {
      const Real x02 = deprit_triangle(table, 0, 2, x);
      dx[i] += eps * eps / 2 * (2 * poisson_bracket(x01, w[0], x, cfg) - x02);
    }
  }
  return dx;
}

template <class Real>
Phase<Real> add(const Phase<Real>& a, const Phase<Real>& b) {
  Phase<Real> out;
  for (int i = 0; i < 6; ++i) out[i] = a[i] + b[i];
  return out;
}

}  // namespace detail

/// Applies the Lie transform of `spec` to a Delaunay state.  Families map
/// successive primed sets: with [NEUTRAL, PERIGEE] the osculating variables
/// are the image of the mean ones through PERIGEE first, then NEUTRAL.
template <class Real>
DelaunayState<Real> transform_state(const TransformSpec& spec, const DelaunayState<Real>& state,
                                    const ModelParams<Real>& params,
                                    const BracketConfig<Real>& cfg = {}) {
  spec.validate();
  cfg.validate();
  std::vector<std::vector<ScalarField<Real>>> gens;
  for (Family f : spec.families) gens.push_back(family_generators(f, spec.order, params));

  Phase<Real> x = state.phase();
  if (spec.direction == Direction::mean_to_osculating) {
    for (auto it = gens.rbegin(); it != gens.rend(); ++it)
      x = detail::add(x, detail::forward_increment(*it, spec.order, x, params, cfg));
    return DelaunayState<Real>::from_phase(x);
  }

  for (const auto& w : gens) {
    if (spec.inversion == Inversion::series) {
      x = detail::add(x, detail::inverse_series_increment(w, spec.order, x, params, cfg));
      continue;
    }
    // Fixed point of x' = x - increment(x').  The contraction rate is
    // O(eps); once the update stops shrinking it has reached the
    // finite-difference noise floor, which is accepted if close to tol.
    const Phase<Real> target = x;
    Phase<Real> guess = target;
    const Real tol = std::max(static_cast<Real>(spec.tolerance), 8 * std::numeric_limits<Real>::epsilon());
    Real change = 0, previous = std::numeric_limits<Real>::infinity();
    bool converged = false;
    for (int it = 0; it < spec.max_iterations; ++it) {
      const Phase<Real> inc = detail::forward_increment(w, spec.order, guess, params, cfg);
      Phase<Real> next;
      change = 0;
      for (int i = 0; i < 6; ++i) {
        next[i] = target[i] - inc[i];
        change = std::max(change, std::abs(next[i] - guess[i]) / std::max(Real(1), std::abs(target[i])));
      }
      guess = next;
      if (change <= tol || (change >= previous && previous <= 1e4 * tol)) {
        converged = true;
        break;
      }
      previous = change;
    }
    if (!converged)
      throw convergence_error("transform_state: fixed-point inversion did not converge", static_cast<double>(change));
    x = guess;
  }
  return DelaunayState<Real>::from_phase(x);
}

// ---------------------------------------------------------------------------
// Inclination

/// Inclination as a Delaunay phase function, I = acos(H/G).
template <class Real>
ScalarField<Real> inclination_field() {
  return {"I", Chart::delaunay, [](const Phase<Real>& x) { return std::acos(std::clamp(x[5] / x[4], Real(-1), Real(1))); }};
}

}  // namespace radint
