#pragma once

// Canonical charts of the main problem: Delaunay, polar-nodal (Hill) and
// Cartesian, plus classical Keplerian elements for I/O.  Internally the
// library is nondimensional (mu = 1, equatorial radius = 1) unless the
// caller supplies other constants.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "radint/errors.hpp"

namespace radint {

template <class Real>
inline constexpr Real pi_v = std::numbers::pi_v<Real>;

template <class Real>
inline constexpr Real two_pi_v = 2 * std::numbers::pi_v<Real>;

/// Wraps an angle to [0, 2pi).
template <class Real>
Real wrap_two_pi(Real angle) {
  Real w = std::fmod(angle, two_pi_v<Real>);
  if (w < 0) w += two_pi_v<Real>;
  if (w >= two_pi_v<Real>) w = 0;
  return w;
}

/// Wraps an angle to (-pi, pi].
template <class Real>
Real wrap_pi(Real angle) {
  Real w = std::remainder(angle, two_pi_v<Real>);
  if (w <= -pi_v<Real>) w += two_pi_v<Real>;
  return w;
}

template <class Real = double>
struct ModelParams {
  Real mu = 1;
  Real re = 1;
  Real c20 = Real(-1.0826266835531513e-3);  // -J2 of the Earth
  Real epsilon = 1;                         // formal book-keeping parameter
  Real critical_band = Real(1e-3);          // guard on |4 - 5 s^2|

  void validate() const {
    if (!(mu > 0)) throw domain_error("ModelParams: mu must be positive");
    if (!(re > 0)) throw domain_error("ModelParams: re must be positive");
    if (!(std::abs(c20) < 1)) throw domain_error("ModelParams: |c20| must be below 1");
    if (!std::isfinite(epsilon)) throw domain_error("ModelParams: epsilon must be finite");
    if (!(critical_band >= 0)) throw domain_error("ModelParams: critical_band must be non-negative");
  }

  ModelParams with_c20(Real value) const {
    ModelParams copy = *this;
    copy.c20 = value;
    return copy;
  }

  template <class Other>
  ModelParams<Other> cast() const {
    return {Other(mu), Other(re), Other(c20), Other(epsilon), Other(critical_band)};
  }
};

/// Canonical phase point stored as (q1, q2, q3, p1, p2, p3).
template <class Real>
using Phase = std::array<Real, 6>;

enum class Chart { delaunay, polar_nodal, cartesian };

inline std::string to_string(Chart chart) {
  switch (chart) {
    case Chart::delaunay: return "delaunay";
    case Chart::polar_nodal: return "polar_nodal";
    case Chart::cartesian: return "cartesian";
  }
  return "unknown";
}

/// Delaunay action-angle variables: mean anomaly l, argument of perigee g (omega), node h (nu).
template <class Real = double>
struct DelaunayState {
  Real ell = 0, g = 0, h = 0;
  Real L = 1, G = 1, H = 1;

  Phase<Real> phase() const { return {ell, g, h, L, G, H}; }
  static DelaunayState from_phase(const Phase<Real>& x) { return {x[0], x[1], x[2], x[3], x[4], x[5]}; }

  Real omega() const { return g; }
  Real nu() const { return h; }

  void validate() const {
    if (!(L > 0)) throw domain_error("DelaunayState: L must be positive");
    if (!(G > 0 && G <= L * (1 + 8 * std::numeric_limits<Real>::epsilon())))
      throw domain_error("DelaunayState: requires 0 < G <= L");
    if (!(std::abs(H) <= G * (1 + 8 * std::numeric_limits<Real>::epsilon())))
      throw domain_error("DelaunayState: requires |H| <= G");
  }

  DelaunayState wrapped() const { return {wrap_two_pi(ell), wrap_two_pi(g), wrap_two_pi(h), L, G, H}; }
};

/// Polar-nodal (Hill-Whittaker) variables (r, theta, nu, R, Theta, N).
template <class Real = double>
struct PolarNodalState {
  Real r = 1, theta = 0, nu = 0;
  Real Rdot = 0, Theta = 1, N = 1;

  Phase<Real> phase() const { return {r, theta, nu, Rdot, Theta, N}; }
  static PolarNodalState from_phase(const Phase<Real>& x) { return {x[0], x[1], x[2], x[3], x[4], x[5]}; }

  void validate() const {
    if (!(r > 0)) throw domain_error("PolarNodalState: r must be positive");
    if (!(Theta > 0)) throw domain_error("PolarNodalState: Theta must be positive");
    if (!(std::abs(N) <= Theta * (1 + 8 * std::numeric_limits<Real>::epsilon())))
      throw domain_error("PolarNodalState: requires |N| <= Theta");
  }

  PolarNodalState wrapped() const { return {r, wrap_two_pi(theta), wrap_two_pi(nu), Rdot, Theta, N}; }
};

template <class Real = double>
struct CartesianState {
  std::array<Real, 3> position{1, 0, 0};
  std::array<Real, 3> velocity{0, 1, 0};

  Phase<Real> phase() const {
    return {position[0], position[1], position[2], velocity[0], velocity[1], velocity[2]};
  }
  static CartesianState from_phase(const Phase<Real>& x) { return {{x[0], x[1], x[2]}, {x[3], x[4], x[5]}}; }

  void validate() const;
};

/// Classical elements, angles in radians.
template <class Real = double>
struct KeplerianElements {
  Real a = 1, e = 0, i = 0, raan = 0, argp = 0, mean_anomaly = 0;
};

namespace detail {

template <class Real>
std::array<Real, 3> cross(const std::array<Real, 3>& u, const std::array<Real, 3>& v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

template <class Real>
Real dot(const std::array<Real, 3>& u, const std::array<Real, 3>& v) {
  return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
}

template <class Real>
Real norm(const std::array<Real, 3>& u) {
  return std::sqrt(dot(u, u));
}

/// sqrt((1-x)(1+x)) without cancellation near |x| = 1.
template <class Real>
Real complement(Real x) {
  const Real v = (1 - x) * (1 + x);
  return v > 0 ? std::sqrt(v) : Real(0);
}

}  // namespace detail

template <class Real>
void CartesianState<Real>::validate() const {
  if (!(detail::norm(position) > 0)) throw domain_error("CartesianState: zero position vector");
  if (!(detail::norm(detail::cross(position, velocity)) > 0))
    throw domain_error("CartesianState: rectilinear orbit (zero angular momentum)");
}

// ---------------------------------------------------------------------------
// Kepler equation

/// Solves E - e sin E = M.  Newton from E0 = M + e sin M with bisection
/// fallback after 50 iterations.  The result is continuous in M: the
/// reduction of M to (-pi, pi] is added back.
template <class Real>
Real solve_kepler(Real mean_anomaly, Real e) {
  if (!(e >= 0 && e < 1)) throw domain_error("solve_kepler: eccentricity outside [0, 1)");
  if (!std::isfinite(mean_anomaly)) throw domain_error("solve_kepler: non-finite mean anomaly");
  const Real m = std::remainder(mean_anomaly, two_pi_v<Real>);
  const Real offset = mean_anomaly - m;
  if (e == 0) return mean_anomaly;

  const Real tol = std::max(Real(1e-14), 64 * std::numeric_limits<Real>::epsilon());
  const Real bisect_tol = 4 * std::numeric_limits<Real>::epsilon();
  Real E = m + e * std::sin(m);
  bool converged = false;
  for (int it = 0; it < 50; ++it) {
    const Real residual = E - e * std::sin(E) - m;
    E -= residual / (1 - e * std::cos(E));
    if (std::abs(residual) <= tol) {
      // quadratic convergence: this last step already reached working precision
      converged = true;
      break;
    }
  }
  if (!converged) {
    Real lo = m - e, hi = m + e;
    for (int it = 0; it < 400 && hi - lo > bisect_tol * (1 + std::abs(m)); ++it) {
      const Real mid = (lo + hi) / 2;
      if (mid - e * std::sin(mid) - m > 0)
        hi = mid;
      else
        lo = mid;
    }
    E = (lo + hi) / 2;
  }
  return E + offset;
}

/// True anomaly from eccentric anomaly, continuous in E.
template <class Real>
Real true_from_eccentric(Real E, Real e) {
  const Real beta = e / (1 + detail::complement(e));
  return E + 2 * std::atan2(beta * std::sin(E), 1 - beta * std::cos(E));
}

/// Eccentric anomaly from true anomaly, continuous in f.
template <class Real>
Real eccentric_from_true(Real f, Real e) {
  const Real beta = e / (1 + detail::complement(e));
  return f - 2 * std::atan2(beta * std::sin(f), 1 + beta * std::cos(f));
}

template <class Real>
Real mean_from_true(Real f, Real e) {
  const Real E = eccentric_from_true(f, e);
  return E - e * std::sin(E);
}

// ---------------------------------------------------------------------------
// Orbit geometry: the auxiliary symbols of the perturbation theory

template <class Real = double>
struct OrbitGeometry {
  Real a = 1;      // semi-major axis
  Real e = 0;      // eccentricity
  Real eta = 1;    // G / L = sqrt(1 - e^2)
  Real p = 1;      // conic parameter G^2 / mu
  Real s = 0;      // sin I
  Real c = 1;      // cos I
  Real n = 1;      // mean motion mu^2 / L^3
  Real f = 0;      // true anomaly
  Real ell = 0;    // mean anomaly
  Real phi = 0;    // equation of the center f - ell, in (-pi, pi]
  Real kappa = 0;  // e cos f = p/r - 1
  Real sigma = 0;  // e sin f = p R / Theta
  Real r = 1;      // radius
  Real g = 0;      // argument of the perigee (omega)
  Real theta = 0;  // argument of the latitude f + g
  Real L = 1, G = 1, H = 1;
};

template <class Real>
OrbitGeometry<Real> geometry(const DelaunayState<Real>& d, const ModelParams<Real>& params) {
  OrbitGeometry<Real> o;
  o.L = d.L;
  o.G = d.G;
  o.H = d.H;
  o.eta = d.G / d.L;
  o.e = detail::complement(o.eta);
  o.a = d.L * d.L / params.mu;
  o.p = d.G * d.G / params.mu;
  o.c = d.H / d.G;
  o.s = detail::complement(o.c);
  o.n = params.mu * params.mu / (d.L * d.L * d.L);
  o.ell = d.ell;
  const Real E = solve_kepler(d.ell, o.e);
  o.f = true_from_eccentric(E, o.e);
  o.phi = wrap_pi(o.f - d.ell);
  o.kappa = o.e * std::cos(o.f);
  o.sigma = o.e * std::sin(o.f);
  o.r = o.p / (1 + o.kappa);
  o.g = d.g;
  o.theta = o.f + d.g;
  return o;
}

template <class Real>
OrbitGeometry<Real> geometry(const PolarNodalState<Real>& pn, const ModelParams<Real>& params) {
  OrbitGeometry<Real> o;
  o.G = pn.Theta;
  o.H = pn.N;
  o.p = pn.Theta * pn.Theta / params.mu;
  o.kappa = o.p / pn.r - 1;
  o.sigma = o.p * pn.Rdot / pn.Theta;
  o.e = std::hypot(o.kappa, o.sigma);
  if (!(o.e < 1)) throw domain_error("geometry: polar-nodal state is not elliptic");
  o.f = std::atan2(o.sigma, o.kappa);
  o.r = pn.r;
  o.theta = pn.theta;
  o.g = pn.theta - o.f;
  o.c = pn.N / pn.Theta;
  o.s = detail::complement(o.c);
  const Real energy = pn.Rdot * pn.Rdot / 2 + pn.Theta * pn.Theta / (2 * pn.r * pn.r) - params.mu / pn.r;
  o.a = -params.mu / (2 * energy);
  o.L = std::sqrt(params.mu * o.a);
  o.eta = o.G / o.L;
  o.n = params.mu * params.mu / (o.L * o.L * o.L);
  o.ell = mean_from_true(o.f, o.e);
  o.phi = wrap_pi(o.f - o.ell);
  return o;
}

// ---------------------------------------------------------------------------
// Chart conversions.  Angles are left on the universal cover; use wrapped()
// for reporting.

template <class Real>
PolarNodalState<Real> delaunay_to_polar_nodal(const DelaunayState<Real>& d, const ModelParams<Real>& params) {
  const OrbitGeometry<Real> o = geometry(d, params);
  PolarNodalState<Real> pn;
  pn.r = o.r;
  pn.theta = o.theta;
  pn.nu = d.h;
  pn.Rdot = params.mu / d.G * o.sigma;
  pn.Theta = d.G;
  pn.N = d.H;
  return pn;
}

template <class Real>
DelaunayState<Real> polar_nodal_to_delaunay(const PolarNodalState<Real>& pn, const ModelParams<Real>& params) {
  const OrbitGeometry<Real> o = geometry(pn, params);
  return {o.ell, o.g, pn.nu, o.L, pn.Theta, pn.N};
}

/// Inclinations closer than this to 0 or pi leave the node undefined.
template <class Real>
inline constexpr Real degenerate_inclination = Real(1e-9);

template <class Real>
CartesianState<Real> polar_nodal_to_cartesian(const PolarNodalState<Real>& pn) {
  const Real ci = pn.N / pn.Theta;
  const Real si = detail::complement(ci);
  const Real cn = std::cos(pn.nu), sn = std::sin(pn.nu);
  const Real ct = std::cos(pn.theta), st = std::sin(pn.theta);
  // columns of node(nu) * inclination(I) * latitude(theta) acting on x and y
  const std::array<Real, 3> ux{cn * ct - sn * ci * st, sn * ct + cn * ci * st, si * st};
  const std::array<Real, 3> uy{-cn * st - sn * ci * ct, -sn * st + cn * ci * ct, si * ct};
  const Real vt = pn.Theta / pn.r;
  CartesianState<Real> c;
  for (int k = 0; k < 3; ++k) {
    c.position[k] = pn.r * ux[k];
    c.velocity[k] = pn.Rdot * ux[k] + vt * uy[k];
  }
  return c;
}

template <class Real>
PolarNodalState<Real> cartesian_to_polar_nodal(const CartesianState<Real>& c) {
  c.validate();
  const auto& x = c.position;
  const auto& v = c.velocity;
  const auto w = detail::cross(x, v);
  PolarNodalState<Real> pn;
  pn.r = detail::norm(x);
  pn.Rdot = detail::dot(x, v) / pn.r;
  pn.Theta = detail::norm(w);
  pn.N = w[2];
  const Real sin_i = std::hypot(w[0], w[1]) / pn.Theta;
  if (sin_i < degenerate_inclination<Real>)
    throw degenerate_chart_error("cartesian_to_polar_nodal: node undefined for equatorial orbit");
  pn.nu = std::atan2(w[0], -w[1]);
  const std::array<Real, 3> node{std::cos(pn.nu), std::sin(pn.nu), 0};
  const auto wh = std::array<Real, 3>{w[0] / pn.Theta, w[1] / pn.Theta, w[2] / pn.Theta};
  const auto m = detail::cross(wh, node);
  pn.theta = std::atan2(detail::dot(x, m), detail::dot(x, node));
  return pn;
}

template <class Real>
CartesianState<Real> delaunay_to_cartesian(const DelaunayState<Real>& d, const ModelParams<Real>& params) {
  return polar_nodal_to_cartesian(delaunay_to_polar_nodal(d, params));
}

template <class Real>
DelaunayState<Real> cartesian_to_delaunay(const CartesianState<Real>& c, const ModelParams<Real>& params) {
  return polar_nodal_to_delaunay(cartesian_to_polar_nodal(c), params);
}

template <class Real>
DelaunayState<Real> keplerian_to_delaunay(const KeplerianElements<Real>& k, const ModelParams<Real>& params) {
  if (!(k.a > 0)) throw domain_error("keplerian: semi-major axis must be positive");
  if (!(k.e >= 0 && k.e < 1)) throw domain_error("keplerian: eccentricity outside [0, 1)");
  DelaunayState<Real> d;
  d.L = std::sqrt(params.mu * k.a);
  d.G = d.L * detail::complement(k.e);
  d.H = d.G * std::cos(k.i);
  d.ell = k.mean_anomaly;
  d.g = k.argp;
  d.h = k.raan;
  return d;
}

template <class Real>
KeplerianElements<Real> delaunay_to_keplerian(const DelaunayState<Real>& d, const ModelParams<Real>& params) {
  KeplerianElements<Real> k;
  k.a = d.L * d.L / params.mu;
  k.e = detail::complement(d.G / d.L);
  k.i = std::acos(std::clamp(d.H / d.G, Real(-1), Real(1)));
  k.raan = wrap_two_pi(d.h);
  k.argp = wrap_two_pi(d.g);
  k.mean_anomaly = wrap_two_pi(d.ell);
  return k;
}

/// Inclination as a function of the Delaunay actions, I = acos(H/G).
template <class Real>
Real inclination(const DelaunayState<Real>& d) {
  return std::acos(std::clamp(d.H / d.G, Real(-1), Real(1)));
}

template <class Real>
Real orbital_period(Real a, const ModelParams<Real>& params) {
  return two_pi_v<Real> * std::sqrt(a * a * a / params.mu);
}

}  // namespace radint
