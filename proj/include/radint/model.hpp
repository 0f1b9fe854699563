#pragma once

// Hamiltonian terms of the J2 main problem and of its Lie-transform
// simplifications.  Every term is a closed-form function of the orbit
// geometry (p, e, s, f, omega, r, ...), so the same code evaluates it from
// any chart once the geometry has been built.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "radint/elements.hpp"

namespace radint {

enum class Family { brouwer, parallax, quartic, neutral, perigee };

inline std::string to_string(Family family) {
  switch (family) {
    case Family::brouwer: return "BROUWER";
    case Family::parallax: return "PARALLAX";
    case Family::quartic: return "QUARTIC";
    case Family::neutral: return "NEUTRAL";
    case Family::perigee: return "PERIGEE";
  }
  return "UNKNOWN";
}

inline Family parse_family(std::string_view name) {
  std::string upper(name);
  for (auto& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  if (upper == "BROUWER") return Family::brouwer;
  if (upper == "PARALLAX") return Family::parallax;
  if (upper == "QUARTIC") return Family::quartic;
  if (upper == "NEUTRAL") return Family::neutral;
  if (upper == "PERIGEE") return Family::perigee;
  throw std::invalid_argument("unknown family '" + std::string(name) + "'");
}

/// A real function on phase space, tied to the chart its argument lives in.
template <class Real>
struct ScalarField {
  std::string name;
  Chart chart = Chart::delaunay;
  std::function<Real(const Phase<Real>&)> eval;  // empty means identically zero
  int depth = 0;                                  // finite-difference levels inside eval

  Real operator()(const Phase<Real>& x) const { return eval ? eval(x) : Real(0); }
  bool is_zero() const { return !eval; }

  static ScalarField zero(Chart chart = Chart::delaunay) { return {"0", chart, {}, 0}; }
};

/// Two printed forms of the first-order known term: in the true anomaly, and
/// rewritten with the conic equation.
enum class Htilde01Form { true_anomaly, conic };

namespace detail {

template <class Real>
void require_radius(Real r) {
  if (!(r > 0)) throw domain_error("Hamiltonian evaluated at r <= 0");
}

template <class Real>
void require_noncritical(const OrbitGeometry<Real>& o, const ModelParams<Real>& params, const char* where) {
  const Real s2 = o.s * o.s;
  if (std::abs(4 - 5 * s2) < params.critical_band)
    throw critical_inclination_error(std::string(where) + ": inside the critical-inclination guard band");
}

}  // namespace detail

/// e^2 cos 2w through the eccentricity-vector projections and theta only.
template <class Real>
Real e2_cos2w(const OrbitGeometry<Real>& o) {
  return (o.kappa * o.kappa - o.sigma * o.sigma) * std::cos(2 * o.theta) +
         2 * o.kappa * o.sigma * std::sin(2 * o.theta);
}

// ---------------------------------------------------------------------------
// Main problem

/// Disturbing function H_{1,0} = (mu/r)(R^2/r^2)(C20/2)(1 - 3/2 s^2 + 3/2 s^2 cos 2 theta).
template <class Real>
Real disturbing_potential(Real r, Real s, Real theta, const ModelParams<Real>& params) {
  detail::require_radius(r);
  const Real s2 = s * s;
  return params.mu / r * params.re * params.re / (r * r) * params.c20 / 2 *
         (1 - Real(1.5) * s2 + Real(1.5) * s2 * std::cos(2 * theta));
}

template <class Real>
Real eval_main_hamiltonian(const DelaunayState<Real>& d, const ModelParams<Real>& params) {
  const auto o = geometry(d, params);
  return -params.mu * params.mu / (2 * d.L * d.L) + params.epsilon * disturbing_potential(o.r, o.s, o.theta, params);
}

template <class Real>
Real kepler_energy(const PolarNodalState<Real>& pn, const ModelParams<Real>& params) {
  detail::require_radius(pn.r);
  return pn.Rdot * pn.Rdot / 2 + pn.Theta * pn.Theta / (2 * pn.r * pn.r) - params.mu / pn.r;
}

template <class Real>
Real eval_main_hamiltonian(const PolarNodalState<Real>& pn, const ModelParams<Real>& params) {
  const Real s = detail::complement(pn.N / pn.Theta);
  return kepler_energy(pn, params) + params.epsilon * disturbing_potential(pn.r, s, pn.theta, params);
}

/// Cartesian route: s^2 sin^2 theta = z^2 / r^2 collapses the bracket to 1 - 3 z^2/r^2.
template <class Real>
Real eval_main_hamiltonian(const CartesianState<Real>& c, const ModelParams<Real>& params) {
  const Real r = detail::norm(c.position);
  detail::require_radius(r);
  const Real v2 = detail::dot(c.velocity, c.velocity);
  const Real z = c.position[2];
  const Real pert = params.mu / r * params.re * params.re / (r * r) * params.c20 / 2 * (1 - 3 * z * z / (r * r));
  return v2 / 2 - params.mu / r + params.epsilon * pert;
}

// ---------------------------------------------------------------------------
// Decompositions of 1/r^2 through the conic equation

/// 1/r^2 split into a part kept in the new Hamiltonian and a Fourier series
/// in f that the generating function absorbs.
template <class Real>
struct RadiusSplit {
  Real kernel = 0;
  Real image = 0;
  Real total() const { return kernel + image; }
};

/// Raises the exponent to four: (1/r^2)(p^2/r^2) 2/(2+e^2) - (1/r^2) 2/(2+e^2)(2e cos f + e^2/2 cos 2f).
template <class Real>
RadiusSplit<Real> inverse_radius_square_quartic(const OrbitGeometry<Real>& o) {
  const Real inv2 = 1 / (o.r * o.r);
  const Real k = 2 / (2 + o.e * o.e);
  const Real pr = o.p / o.r;
  return {inv2 * pr * pr * k, -inv2 * k * (2 * o.e * std::cos(o.f) + o.e * o.e / 2 * std::cos(2 * o.f))};
}

/// Keeps the exponent at three: (1/r^2)(p/r) - (1/r^2) e cos f.
template <class Real>
RadiusSplit<Real> inverse_radius_square_neutral(const OrbitGeometry<Real>& o) {
  const Real inv2 = 1 / (o.r * o.r);
  return {inv2 * o.p / o.r, -inv2 * o.e * std::cos(o.f)};
}

// ---------------------------------------------------------------------------
// First order

template <class Real>
Real eval_Htilde01(const OrbitGeometry<Real>& o, const ModelParams<Real>& params,
                   Htilde01Form form = Htilde01Form::true_anomaly) {
  detail::require_radius(o.r);
  const Real s2 = o.s * o.s;
  const Real re2 = params.re * params.re;
  const Real w2 = 2 * o.g;
  if (form == Htilde01Form::true_anomaly) {
    return params.mu / o.r * params.c20 / 2 * re2 / (o.r * o.r) *
           (1 - Real(1.5) * s2 + Real(1.5) * s2 * std::cos(2 * o.f + w2));
  }
  const Real e = o.e;
  return params.mu / o.p * params.c20 / 8 * re2 / (o.r * o.r) *
         ((4 - 6 * s2) * (1 + e * std::cos(o.f)) + 3 * s2 * e * std::cos(o.f + w2) +
          6 * s2 * std::cos(2 * o.f + w2) + 3 * s2 * e * std::cos(3 * o.f + w2));
}

/// New first-order Hamiltonian of each family (PERIGEE keeps NEUTRAL's; use eval_K0m_perigee).
template <class Real>
Real eval_H01(Family family, const OrbitGeometry<Real>& o, const ModelParams<Real>& params) {
  detail::require_radius(o.r);
  const Real s2 = o.s * o.s;
  const Real re2_p2 = params.re * params.re / (o.p * o.p);
  const Real mu_r = params.mu / o.r;
  const Real pr = o.p / o.r;
  switch (family) {
    case Family::brouwer: return params.mu / o.a * params.c20 / 4 * re2_p2 * o.eta * (2 - 3 * s2);
    case Family::parallax: return params.mu / o.p * params.c20 / 4 * params.re * params.re / (o.r * o.r) * (2 - 3 * s2);
    case Family::quartic:
      return params.c20 / 2 * re2_p2 * mu_r * pr * pr * pr / (2 + o.e * o.e) * (2 - 3 * s2);
    case Family::neutral: return params.c20 / 4 * re2_p2 * mu_r * pr * pr * (2 - 3 * s2);
    case Family::perigee: break;
  }
  throw unsupported_term_error("eval_H01: PERIGEE first order is K01, see eval_K0m_perigee");
}

// ---------------------------------------------------------------------------
// Second order

/// Terms of the neutral H~02 that must be removed before solving for W2.
template <class Real>
Real eval_Q(const OrbitGeometry<Real>& o, const ModelParams<Real>& params) {
  detail::require_radius(o.r);
  const Real s2 = o.s * o.s, e2 = o.e * o.e;
  const Real q = params.re * params.re / (o.p * o.p);
  return -Real(3) / 64 * params.c20 * params.c20 * q * q * params.mu / o.r * o.p / o.r * s2 *
         (8 * (3 - 4 * s2) + (16 - 23 * s2) * e2 - 2 * (14 - 15 * s2) * e2_cos2w(o));
}

template <class Real>
Real eval_H02(Family family, const OrbitGeometry<Real>& o, const ModelParams<Real>& params) {
  detail::require_radius(o.r);
  if (family == Family::neutral) return o.p / o.r * eval_Q(o, params);
  if (family == Family::parallax) {
    const Real s2 = o.s * o.s, e2 = o.e * o.e;
    const Real q = params.re * params.re / (o.p * o.p);
    return params.c20 * params.c20 / 64 * q * q * o.p / o.r * params.mu / o.r *
           (-80 + 168 * s2 - 84 * s2 * s2 - 3 * (8 - 8 * s2 - 5 * s2 * s2) * e2 +
            6 * (14 - 15 * s2) * s2 * e2_cos2w(o));
  }
  throw unsupported_term_error("eval_H02: closed form available for PARALLAX and NEUTRAL only");
}

/// Known second-order terms of the neutral transformation with A1 = 0.
template <class Real>
Real eval_Htilde02_neutral(const OrbitGeometry<Real>& o, const ModelParams<Real>& params) {
  detail::require_radius(o.r);
  const Real s2 = o.s * o.s, s4 = s2 * s2, e = o.e, e2 = e * e;
  const Real f = o.f, w = o.g;
  using std::cos;
  const Real body =
      6 * s2 * (e2 * (23 * s2 - 16) + 8 * (4 * s2 - 3)) + 12 * e * (39 * s2 - 28) * s2 * cos(f) +
      6 * e2 * (23 * s2 - 16) * s2 * cos(2 * f) + 12 * e2 * (14 - 15 * s2) * s2 * cos(2 * w) +
      48 * e * (11 - 12 * s2) * s2 * cos(f + 2 * w) -
      24 * s2 * (e2 * (11 * s2 - 10) + 2 * (9 * s2 - 8)) * cos(2 * f + 2 * w) -
      48 * e * (8 * s2 - 7) * s2 * cos(3 * f + 2 * w) + 12 * e2 * (6 - 7 * s2) * s2 * cos(4 * f + 2 * w) -
      15 * e2 * s4 * cos(2 * f + 4 * w) - 18 * e * s4 * cos(3 * f + 4 * w) -
      6 * (e2 - 4) * s4 * cos(4 * f + 4 * w) + 30 * e * s4 * cos(5 * f + 4 * w) +
      9 * e2 * s4 * cos(6 * f + 4 * w);
  const Real q = params.re * params.re / (o.p * o.p);
  return params.c20 * params.c20 / 128 * q * q * params.mu / o.r * o.p / o.r * body;
}

// ---------------------------------------------------------------------------
// Third order and the perigee elimination

template <class Real>
Real eval_H03_neutral(const OrbitGeometry<Real>& o, const ModelParams<Real>& params) {
  detail::require_radius(o.r);
  const Real s2 = o.s * o.s, s4 = s2 * s2, e2 = o.e * o.e, e4 = e2 * e2;
  const Real q = params.re * params.re / (o.p * o.p);
  const Real c3 = params.c20 * params.c20 * params.c20;
  const Real pr = o.p / o.r;
  const Real body = 16 * (31 - 26 * s2) * s2 - 4 * (440 - 1614 * s2 + 1217 * s4) * e2 -
                    9 * (2 - 3 * s2) * (16 - 23 * s2) * e4 +
                    2 * (1984 - 5264 * s2 + 3405 * s4 + 9 * (28 - 72 * s2 + 45 * s4) * e2) * e2_cos2w(o);
  return Real(9) / 1024 * c3 * q * q * q * params.mu / o.r * pr * pr * s2 * body;
}

namespace detail {

template <class Real>
Real k02_body(Real s2, Real e2) {
  return 8 * (3 - 4 * s2) + (16 - 23 * s2) * e2;
}

}  // namespace detail

/// K_{0,m} of the perigee elimination stacked on the neutral transformation.
template <class Real>
Real eval_K0m_perigee(int m, const OrbitGeometry<Real>& o, const ModelParams<Real>& params) {
  detail::require_radius(o.r);
  const Real s2 = o.s * o.s, s4 = s2 * s2, e2 = o.e * o.e;
  const Real q = params.re * params.re / (o.p * o.p);
  const Real pr = o.p / o.r;
  const Real mu_r = params.mu / o.r;
  switch (m) {
    case 1: return eval_H01(Family::neutral, o, params);
    case 2:
      return -Real(3) / 64 * params.c20 * params.c20 * q * q * mu_r * pr * pr * s2 * detail::k02_body(s2, e2);
    case 3: {
      detail::require_noncritical(o, params, "K03");
      const Real d = 4 - 5 * s2;
      const Real s6 = s4 * s2, s8 = s4 * s4;
      const Real body = 16 * s2 * d * d * (31 - 26 * s2) -
                        2 * d * (3520 - 17116 * s2 + 25456 * s4 - 11945 * s6) * e2 -
                        (3040 - 15116 * s2 + 29176 * s4 - 25815 * s6 + 8775 * s8) * e2 * e2;
      const Real c3 = params.c20 * params.c20 * params.c20;
      return Real(9) / 1024 * c3 * q * q * q * mu_r * pr * pr * s2 / (d * d) * body;
    }
    default: break;
  }
  throw unsupported_term_error("eval_K0m_perigee: order must be 1, 2 or 3");
}

// ---------------------------------------------------------------------------
// Brouwer's second-order obstruction

/// The term of {H10; W1} that couples the equation of the center with sin(2f + 2w).
template <class Real>
Real eval_chi(const OrbitGeometry<Real>& o, const ModelParams<Real>& params) {
  detail::require_radius(o.r);
  const Real s2 = o.s * o.s;
  const Real q = params.re * params.re / (o.p * o.p);
  const Real pr = o.p / o.r;
  return Real(9) / 8 * params.mu / o.r * params.c20 * params.c20 * q * q * pr * pr * s2 * (4 - 5 * s2) * o.phi *
         std::sin(2 * o.f + 2 * o.g);
}

/// Closed-form mean-anomaly average of chi.
template <class Real>
Real chi_average(const OrbitGeometry<Real>& o, const ModelParams<Real>& params) {
  if (!(o.e >= 0 && o.e < 1)) throw domain_error("chi_average: eccentricity outside [0, 1)");
  const Real s2 = o.s * o.s;
  const Real q = params.re * params.re / (o.p * o.p);
  const Real eta = o.eta;
  return Real(3) / 16 * params.mu / o.p * params.c20 * params.c20 * q * q * (1 - eta) / (1 + eta) * (1 + 2 * eta) *
         eta * eta * eta * s2 * (4 - 5 * s2) * std::cos(2 * o.g);
}

// ---------------------------------------------------------------------------
// The radial intermediary

/// eps K01 + eps^2/2 K02 + eps^3/6 K03 in polar-nodal variables.  With
/// truncate_e2 the eccentricity-dependent parts of the second and third
/// orders are dropped, which leaves a potential in (r, Theta, N) only.
template <class Real>
Real intermediary_perturbation(int order, bool truncate_e2, const PolarNodalState<Real>& pn,
                               const ModelParams<Real>& params) {
  if (order < 0 || order > 3) throw unsupported_term_error("intermediary: order must be 0..3");
  detail::require_radius(pn.r);
  if (order == 0) return 0;
  const Real eps = params.epsilon;

  OrbitGeometry<Real> o;
  o.p = pn.Theta * pn.Theta / params.mu;
  o.r = pn.r;
  o.c = pn.N / pn.Theta;
  o.s = detail::complement(o.c);
  if (!truncate_e2) {
    o.kappa = o.p / pn.r - 1;
    o.sigma = o.p * pn.Rdot / pn.Theta;
    o.e = std::hypot(o.kappa, o.sigma);
  }
  const Real s2 = o.s * o.s;
  const Real q = params.re * params.re / (o.p * o.p);
  const Real pr = o.p / o.r;
  const Real mu_r = params.mu / o.r;

  Real value = eps * eval_H01(Family::neutral, o, params);
  if (order >= 2) {
    const Real k02 = truncate_e2 ? -Real(3) / 64 * params.c20 * params.c20 * q * q * mu_r * pr * pr * s2 * 8 * (3 - 4 * s2)
                                 : eval_K0m_perigee(2, o, params);
    value += eps * eps / 2 * k02;
  }
  if (order >= 3) {
    const Real c3 = params.c20 * params.c20 * params.c20;
    const Real k03 = truncate_e2 ? Real(9) / 1024 * c3 * q * q * q * mu_r * pr * pr * s2 * 16 * s2 * (31 - 26 * s2)
                                 : eval_K0m_perigee(3, o, params);
    value += eps * eps * eps / 6 * k03;
  }
  return value;
}

/// The radial intermediary K00 + eps K01 + eps^2/2 K02 + eps^3/6 K03.
template <class Real>
Real intermediary_hamiltonian(int order, bool truncate_e2, const PolarNodalState<Real>& pn,
                              const ModelParams<Real>& params) {
  return kepler_energy(pn, params) + intermediary_perturbation(order, truncate_e2, pn, params);
}

}  // namespace radint
