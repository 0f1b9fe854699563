#pragma once

// Generating-function terms W1, W2 of every family, the arbitrary functions
// A1 and A2, and the polar-variable forms of the neutral generator.

#include <cmath>

#include "radint/model.hpp"

namespace radint {

/// How the arbitrary function A1 (dA1/dl = 0) of W1 is fixed.
enum class A1Mode {
  zero,               // A1 = 0
  long_period_free,   // W1 has zero mean-anomaly average (NEUTRAL)
  perigee_determined  // A1 solves the perigee-elimination condition (PERIGEE)
};

inline std::string to_string(A1Mode mode) {
  switch (mode) {
    case A1Mode::zero: return "ZERO";
    case A1Mode::long_period_free: return "LONG_PERIOD_FREE";
    case A1Mode::perigee_determined: return "PERIGEE_DETERMINED";
  }
  return "UNKNOWN";
}

struct GeneratorChoice {
  Family family = Family::neutral;
  int order = 1;
  A1Mode a1_mode = A1Mode::zero;

  /// Default A1 of a family: zero, except PERIGEE which forces its own.
  static GeneratorChoice defaults(Family family, int order = 1) {
    return {family, order, family == Family::perigee ? A1Mode::perigee_determined : A1Mode::zero};
  }

  void validate() const {
    if (order != 1 && order != 2) throw unsupported_term_error("GeneratorChoice: order must be 1 or 2");
    if (family == Family::perigee && a1_mode != A1Mode::perigee_determined)
      throw unsupported_term_error("GeneratorChoice: PERIGEE requires PERIGEE_DETERMINED A1");
    if (family != Family::perigee && a1_mode == A1Mode::perigee_determined)
      throw unsupported_term_error("GeneratorChoice: PERIGEE_DETERMINED A1 belongs to the PERIGEE family");
    if (a1_mode == A1Mode::long_period_free && family != Family::neutral)
      throw unsupported_term_error("GeneratorChoice: LONG_PERIOD_FREE A1 is available for NEUTRAL only");
    if (order == 2 && family != Family::neutral && family != Family::perigee)
      throw unsupported_term_error("GeneratorChoice: W2 is available for NEUTRAL and PERIGEE only");
  }
};

// ---------------------------------------------------------------------------
// Arbitrary functions

/// A1 that removes the long-period part of the neutral W1.
template <class Real>
Real eval_A1_long_period_free(const OrbitGeometry<Real>& o, const ModelParams<Real>& params) {
  if (!(o.e < 1)) throw domain_error("A1: eccentricity outside [0, 1)");
  const Real eta = o.eta;
  const Real q = params.re * params.re / (o.p * o.p);
  return o.G / 8 * params.c20 * q * (1 - eta) / (1 + eta) * (1 + 2 * eta) * o.s * o.s * std::sin(2 * o.g);
}

template <class Real>
Real eval_A1_perigee(const OrbitGeometry<Real>& o, const ModelParams<Real>& params) {
  detail::require_noncritical(o, params, "A1 (perigee)");
  const Real s2 = o.s * o.s;
  const Real q = params.re * params.re / (o.p * o.p);
  return -params.c20 / 32 * q * o.G * (14 - 15 * s2) / (4 - 5 * s2) * s2 * o.e * o.e * std::sin(2 * o.g);
}

template <class Real>
Real eval_A2_perigee(const OrbitGeometry<Real>& o, const ModelParams<Real>& params) {
  detail::require_noncritical(o, params, "A2 (perigee)");
  const Real s2 = o.s * o.s, s4 = s2 * s2, e2 = o.e * o.e;
  const Real d = 4 - 5 * s2;
  const Real k = (14 - 15 * s2) / d;
  const Real q = params.re * params.re / (o.p * o.p);
  const Real body = e2 * s2 * (4 * (824 - 1997 * s2 + 1215 * s4) + k * (56 - 36 * s2 - 45 * s4) * e2) * std::sin(2 * o.g) -
                    k * k / 2 * (13 - 15 * s2) * e2 * e2 * s4 * std::sin(4 * o.g);
  return -Real(1) / 512 * params.c20 * params.c20 * q * q * o.G / d * body;
}

/// Left side of the condition that fixes the perigee A1:
/// (4 - 5 s^2) dA1/dg + (1/16) C20 (R/p)^2 G s^2 (14 - 15 s^2) e^2 cos 2w.
template <class Real>
Real perigee_a1_condition(const OrbitGeometry<Real>& o, const ModelParams<Real>& params, Real dA1_dg) {
  const Real s2 = o.s * o.s;
  const Real q = params.re * params.re / (o.p * o.p);
  return (4 - 5 * s2) * dA1_dg +
         params.c20 / 16 * q * o.G * s2 * (14 - 15 * s2) * o.e * o.e * std::cos(2 * o.g);
}

// ---------------------------------------------------------------------------
// First and second order generators

template <class Real>
Real eval_A1(const GeneratorChoice& choice, const OrbitGeometry<Real>& o, const ModelParams<Real>& params) {
  switch (choice.a1_mode) {
    case A1Mode::zero: return 0;
    case A1Mode::long_period_free: return eval_A1_long_period_free(o, params);
    case A1Mode::perigee_determined: return eval_A1_perigee(o, params);
  }
  return 0;
}

template <class Real>
Real eval_W1(const GeneratorChoice& choice, const OrbitGeometry<Real>& o, const ModelParams<Real>& params) {
  choice.validate();
  if (choice.family == Family::perigee) return eval_A1_perigee(o, params);

  const Real s2 = o.s * o.s, e = o.e, f = o.f, w2 = 2 * o.g;
  const Real k = o.G / 8 * params.c20 * params.re * params.re / (o.p * o.p);
  const Real tail = s2 * (3 * e * std::sin(f + w2) + 3 * std::sin(2 * f + w2) + e * std::sin(3 * f + w2));
  Real body = tail;
  switch (choice.family) {
    case Family::brouwer: body += (4 - 6 * s2) * (o.phi + e * std::sin(f)); break;
    case Family::parallax: body += (4 - 6 * s2) * e * std::sin(f); break;
    case Family::quartic: {
      const Real e2 = e * e;
      body += (e2 - 2) / (e2 + 2) * (4 - 6 * s2) * e * std::sin(f) - (2 - 3 * s2) / (2 + e2) * e2 * std::sin(2 * f);
      break;
    }
    case Family::neutral:
    case Family::perigee: break;
  }
  return k * body + eval_A1(choice, o, params);
}

template <class Real>
Real eval_W2(Family family, const OrbitGeometry<Real>& o, const ModelParams<Real>& params) {
  const Real s2 = o.s * o.s, s4 = s2 * s2, e = o.e, e2 = e * e, e3 = e2 * e;
  const Real f = o.f, w = o.g;
  const Real q = params.re * params.re / (o.p * o.p);
  using std::sin;
  if (family == Family::neutral) {
    const Real body =
        -12 * e * (2 - e2) * (16 - 23 * s2) * s2 * sin(f) - 6 * e2 * (16 - 23 * s2) * s2 * sin(2 * f) +
        12 * e3 * (15 * s2 - 14) * s2 * sin(f - 2 * w) +
        12 * e * s2 * (e2 * (15 * s2 - 14) - 96 * s2 + 88) * sin(f + 2 * w) -
        24 * s2 * (e2 * (11 * s2 - 10) + 2 * (9 * s2 - 8)) * sin(2 * f + 2 * w) -
        32 * e * (8 * s2 - 7) * s2 * sin(3 * f + 2 * w) + 6 * e2 * (6 - 7 * s2) * s2 * sin(4 * f + 2 * w) -
        15 * e2 * s4 * sin(2 * f + 4 * w) - 12 * e * s4 * sin(3 * f + 4 * w) -
        3 * (e2 - 4) * s4 * sin(4 * f + 4 * w) + 12 * e * s4 * sin(5 * f + 4 * w) + 3 * e2 * s4 * sin(6 * f + 4 * w);
    return o.G / 256 * params.c20 * params.c20 * q * q * body;
  }
  if (family == Family::perigee) {
    detail::require_noncritical(o, params, "W2 (perigee)");
    const Real periodic = 3 * e2 * sin(f - 2 * w) - e2 * sin(3 * f + 2 * w) - 6 * e * sin(2 * f + 2 * w) -
                          12 * sin(f + 2 * w);
    return o.G / 128 * params.c20 * params.c20 * q * q * e * s2 * (14 - 15 * s2) / (4 - 5 * s2) * (2 - 3 * s2) *
               periodic +
           eval_A2_perigee(o, params);
  }
  throw unsupported_term_error("eval_W2: available for NEUTRAL and PERIGEE only");
}

/// First-order inclination correction shared by the BROUWER, PARALLAX and
/// QUARTIC generators with A1 = 0.
template <class Real>
Real inclination_correction_I01(const OrbitGeometry<Real>& o, const ModelParams<Real>& params) {
  if (!(o.e >= 0 && o.e < 1)) throw domain_error("I01: eccentricity outside [0, 1)");
  const Real q = params.re * params.re / (o.p * o.p);
  const Real w2 = 2 * o.g;
  return -params.c20 / 4 * q * o.s * o.c *
         (3 * o.e * std::cos(o.f + w2) + 3 * std::cos(2 * o.f + w2) + o.e * std::cos(3 * o.f + w2));
}

/// Neutral W1 (order 1) or W2 (order 2) written with kappa, sigma and theta.
template <class Real>
Real eval_W_polar(int order, const PolarNodalState<Real>& pn, const ModelParams<Real>& params) {
  const Real p = pn.Theta * pn.Theta / params.mu;
  const Real kappa = p / pn.r - 1;
  const Real sigma = p * pn.Rdot / pn.Theta;
  const Real s2 = 1 - (pn.N / pn.Theta) * (pn.N / pn.Theta);
  const Real s4 = s2 * s2;
  const Real G = pn.Theta;
  const Real q = params.re * params.re / (p * p);
  const Real c2 = std::cos(2 * pn.theta), sn2 = std::sin(2 * pn.theta);
  if (order == 1) return G / 8 * params.c20 * q * s2 * ((3 + 4 * kappa) * sn2 - 2 * sigma * c2);
  if (order == 2) {
    const Real k2 = kappa * kappa, g2 = sigma * sigma;
    const Real body =
        3 * (16 - 23 * s2) * s2 * (k2 + g2 - kappa - 2) * sigma -
        (16 * (13 - 14 * s2) - 3 * (6 - 7 * s2) * kappa + 6 * (14 - 15 * s2) * (k2 - g2)) * s2 * sigma * c2 +
        3 * s4 * (2 + 3 * kappa) * sigma * std::cos(4 * pn.theta) +
        2 *
            (6 * (8 - 9 * s2) + 16 * (10 - 11 * s2) * kappa - 6 * (14 - 15 * s2) * kappa * g2 +
             Real(3) / 4 * (46 - 51 * s2) * k2 + Real(3) / 4 * (34 - 37 * s2) * g2) *
            s2 * sn2 +
        Real(3) / 4 * (4 - 5 * k2 + 3 * g2) * s4 * std::sin(4 * pn.theta);
    return G / 64 * params.c20 * params.c20 * q * q * body;
  }
  throw unsupported_term_error("eval_W_polar: order must be 1 or 2");
}

}  // namespace radint
