#pragma once

// Numerical flows: the main problem in Cartesian coordinates (truth), the
// radial intermediary in polar-nodal variables, and the harness comparing
// the two through the mean <-> osculating transformation.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include <boost/numeric/odeint/stepper/controlled_runge_kutta.hpp>
#include <boost/numeric/odeint/stepper/controlled_step_result.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

#include "radint/lie.hpp"

namespace radint {

struct IntegratorStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evaluations = 0;
};

template <class Real = double>
struct Sample {
  Real t = 0;
  Phase<Real> state{};  // in the trajectory's chart
  Real energy = 0;      // value of the propagated Hamiltonian
  Real Theta = 0;
  Real N = 0;
};

template <class Real = double>
struct Trajectory {
  std::string model;
  Chart chart = Chart::cartesian;
  std::vector<Sample<Real>> samples;
  IntegratorStats stats;

  // Accepted steps, kept for dense output.
  std::vector<Real> node_t;
  std::vector<Phase<Real>> node_y;
  std::vector<Phase<Real>> node_dy;

  /// Cubic Hermite interpolation between accepted steps.
  Phase<Real> interpolate(Real t) const {
    if (node_t.size() < 2) throw std::out_of_range("Trajectory::interpolate: no dense output stored");
    if (t < node_t.front() || t > node_t.back()) throw std::out_of_range("Trajectory::interpolate: t outside span");
    auto it = std::upper_bound(node_t.begin(), node_t.end(), t);
    std::size_t k = static_cast<std::size_t>(std::distance(node_t.begin(), it));
    k = std::clamp<std::size_t>(k, 1, node_t.size() - 1);
    const Real t0 = node_t[k - 1], h = node_t[k] - t0;
    const Real u = (t - t0) / h;
    const Real h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
    const Real h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
    Phase<Real> y;
    for (int i = 0; i < 6; ++i)
      y[i] = h00 * node_y[k - 1][i] + h10 * h * node_dy[k - 1][i] + h01 * node_y[k][i] + h11 * h * node_dy[k][i];
    return y;
  }

  /// Largest |q(t) - q(t0)| / |q(t0)| over the samples for q = energy, Theta, N.
  Real relative_drift(Real Sample<Real>::*member) const {
    Real worst = 0;
    if (samples.empty()) return 0;
    const Real ref = samples.front().*member;
    const Real scale = std::max(std::abs(ref), std::numeric_limits<Real>::min());
    for (const auto& s : samples) worst = std::max(worst, std::abs(s.*member - ref) / scale);
    return worst;
  }
};

/// n equally spaced times from t0 to tf inclusive.
template <class Real>
std::vector<Real> uniform_grid(Real t0, Real tf, int n) {
  if (n < 2) throw std::invalid_argument("uniform_grid: need at least two samples");
  std::vector<Real> grid(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) grid[static_cast<std::size_t>(k)] = t0 + (tf - t0) * k / (n - 1);
  grid.back() = tf;
  return grid;
}

/// Smallest integrator tolerance accepted for a floating-point type.
template <class Real>
Real min_tolerance() {
  return Real(1e-13) * (std::numeric_limits<Real>::epsilon() / std::numeric_limits<double>::epsilon());
}

namespace detail {

/// Embedded Runge-Kutta-Fehlberg 7(8) driver that lands exactly on every
/// output time.  `record(t, y)` is called at each output time.
template <class Real, class Rhs, class Record>
IntegratorStats integrate_outputs(Rhs rhs, Phase<Real> y, const std::vector<Real>& outputs, Real tol,
                                  Record record, Trajectory<Real>& dense) {
  namespace odeint = boost::numeric::odeint;
  using stepper_type = odeint::runge_kutta_fehlberg78<Phase<Real>, Real, Phase<Real>, Real>;
  auto stepper = odeint::controlled_runge_kutta<stepper_type>(
      odeint::default_error_checker<Real, typename stepper_type::algebra_type, typename stepper_type::operations_type>(
          tol, tol));

  IntegratorStats stats;
  auto system = [&](const Phase<Real>& x, Phase<Real>& dxdt, Real t) {
    ++stats.rhs_evaluations;
    rhs(x, dxdt, t);
  };
  auto store_node = [&](Real t) {
    Phase<Real> dy;
    system(y, dy, t);
    dense.node_t.push_back(t);
    dense.node_y.push_back(y);
    dense.node_dy.push_back(dy);
  };

  if (outputs.empty()) return stats;
  for (std::size_t k = 1; k < outputs.size(); ++k)
    if (!(outputs[k] > outputs[k - 1])) throw std::invalid_argument("integrate: output times must increase");

  Real t = outputs.front();
  Real dt = (outputs.size() > 1 ? outputs[1] - outputs[0] : Real(1)) / 8;
  store_node(t);
  record(t, y);
  for (std::size_t k = 1; k < outputs.size(); ++k) {
    const Real target = outputs[k];
    while (t < target) {
      const Real remaining = target - t;
      const bool clamped = dt >= remaining;
      Real h = clamped ? remaining : dt;
      Real t_try = t;
      Phase<Real> y_try = y;
      if (stepper.try_step(system, y_try, t_try, h) == odeint::success) {
        ++stats.accepted;
        for (Real v : y_try)
          if (!std::isfinite(v)) throw integration_error("integrate: non-finite state");
        y = y_try;
        t = clamped ? target : t_try;
        dt = clamped ? std::max(dt, h) : h;
        store_node(t);
      } else {
        ++stats.rejected;
        dt = h;
        if (dt < 64 * std::numeric_limits<Real>::epsilon() * std::max(Real(1), std::abs(t)))
          throw integration_error("integrate: step-size underflow at t = " + std::to_string(static_cast<double>(t)));
      }
    }
    record(t, y);
  }
  return stats;
}

template <class Real>
void main_problem_rhs(const Phase<Real>& x, Phase<Real>& dxdt, const ModelParams<Real>& params) {
  const Real r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  const Real r = std::sqrt(r2);
  const Real r3 = r2 * r, r5 = r3 * r2, r7 = r5 * r2;
  const Real z2 = x[2] * x[2];
  // V = k (r^-3 - 3 z^2 r^-5), k = eps mu R^2 C20 / 2
  const Real k = params.epsilon * params.mu * params.re * params.re * params.c20 / 2;
  const Real common = k * (-3 / r5 + 15 * z2 / r7);
  const Real kepler = -params.mu / r3;
  dxdt[0] = x[3];
  dxdt[1] = x[4];
  dxdt[2] = x[5];
  dxdt[3] = kepler * x[0] - common * x[0];
  dxdt[4] = kepler * x[1] - common * x[1];
  dxdt[5] = kepler * x[2] - (common * x[2] - 6 * k * x[2] / r5);
}

template <class Real>
Sample<Real> cartesian_sample(Real t, const Phase<Real>& y, const ModelParams<Real>& params) {
  const auto c = CartesianState<Real>::from_phase(y);
  const auto w = cross(c.position, c.velocity);
  return {t, y, eval_main_hamiltonian(c, params), norm(w), w[2]};
}

}  // namespace detail

/// Main-problem trajectory in Cartesian coordinates, sampled at `outputs`.
template <class Real>
Trajectory<Real> propagate_main(const CartesianState<Real>& state0, const std::vector<Real>& outputs, Real tol,
                                const ModelParams<Real>& params) {
  params.validate();
  state0.validate();
  if (!(tol >= min_tolerance<Real>() * Real(0.999) && tol <= Real(1e-6)))
    throw domain_error("propagate_main: tol outside [" + std::to_string(static_cast<double>(min_tolerance<Real>())) +
                       ", 1e-6]");
  Trajectory<Real> traj;
  traj.model = "MAIN";
  traj.chart = Chart::cartesian;
  auto rhs = [&params](const Phase<Real>& x, Phase<Real>& dxdt, Real) {
    if (!(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] > 0)) throw integration_error("propagate_main: r = 0");
    detail::main_problem_rhs(x, dxdt, params);
  };
  auto record = [&](Real t, const Phase<Real>& y) { traj.samples.push_back(detail::cartesian_sample(t, y, params)); };
  traj.stats = detail::integrate_outputs<Real>(rhs, state0.phase(), outputs, tol, record, traj);
  return traj;
}

/// Step for the finite-difference gradient of the intermediary perturbation.
template <class Real>
Real intermediary_fd_step() {
  return std::numeric_limits<Real>::digits > 53 ? Real(2e-4) : Real(1e-3);
}

/// Intermediary trajectory in polar-nodal variables.  The Kepler part of the
/// vector field is exact; the perturbation gradient uses Richardson
/// differences.
template <class Real>
Trajectory<Real> propagate_intermediary(int order, bool truncate_e2, const PolarNodalState<Real>& state0,
                                        const std::vector<Real>& outputs, Real tol, const ModelParams<Real>& params) {
  params.validate();
  state0.validate();
  if (order < 0 || order > 3) throw unsupported_term_error("propagate_intermediary: order must be 0..3");
  if (!(tol >= min_tolerance<Real>() * Real(0.999) && tol <= Real(1e-6)))
    throw domain_error("propagate_intermediary: tol outside the accepted range");
  // Evaluate once so guard violations surface before integration starts.
  (void)intermediary_perturbation(order, truncate_e2, state0, params);

  Trajectory<Real> traj;
  traj.model = "INTERMEDIARY(order=" + std::to_string(order) + (truncate_e2 ? ",truncated)" : ")");
  traj.chart = Chart::polar_nodal;
  const Real step = intermediary_fd_step<Real>();
  auto perturbation = [&](const Phase<Real>& x) {
    return intermediary_perturbation(order, truncate_e2, PolarNodalState<Real>::from_phase(x), params);
  };
  auto rhs = [&](const Phase<Real>& x, Phase<Real>& dxdt, Real) {
    const Real r = x[0], Rdot = x[3], Theta = x[4];
    if (!(r > 0)) throw integration_error("propagate_intermediary: r <= 0");
    Phase<Real> grad{};
    if (order > 0)
      for (int i = 0; i < 6; ++i) grad[i] = partial(perturbation, x, i, step, FdScheme::richardson);
    dxdt[0] = Rdot + grad[3];
    dxdt[1] = Theta / (r * r) + grad[4];
    dxdt[2] = grad[5];
    dxdt[3] = Theta * Theta / (r * r * r) - params.mu / (r * r) - grad[0];
    dxdt[4] = -grad[1];
    dxdt[5] = -grad[2];
  };
  auto record = [&](Real t, const Phase<Real>& y) {
    const auto pn = PolarNodalState<Real>::from_phase(y);
    traj.samples.push_back({t, y, intermediary_hamiltonian(order, truncate_e2, pn, params), pn.Theta, pn.N});
  };
  traj.stats = detail::integrate_outputs<Real>(rhs, state0.phase(), outputs, tol, record, traj);
  return traj;
}

// ---------------------------------------------------------------------------
// Comparison harness

struct ComparisonCell {
  int order = 1;
  double c20 = 0;
  double rms_position_error = 0;
  double max_position_error = 0;
  double roundtrip_error = 0;  // mean -> osculating -> mean, explicit inverse series
  std::string status = "ok";
};

/// Least-squares fit of log(error) = intercept + exponent log|c20|.
struct LogFit {
  double exponent = 0;
  double intercept = 0;
  double residual = 0;  // rms of the log-log fit residuals
  int points = 0;
};

/// One row per transformation order: trajectory error and round-trip error fits.
struct ExponentFit {
  int order = 1;
  LogFit position;   // max_position_error
  LogFit roundtrip;  // roundtrip_error
};

struct ComparisonReport {
  double rms_position_error = 0;  // largest over the cells
  double max_position_error = 0;  // largest over the cells
  std::vector<ComparisonCell> cells;
  std::vector<ExponentFit> fits;
  KeplerianElements<double> orbit;
  std::vector<int> orders;
  std::vector<double> c20_list;
  double t_span = 0;
};

struct CompareOptions {
  int samples_per_period = 20;
  double tol = 0;  // 0 selects min_tolerance of the working precision
  int jobs = 0;    // 0 selects the hardware concurrency
};

/// Families, transform order and intermediary order used for harness order k.
inline TransformSpec compare_transform(int order) {
  TransformSpec spec;
  spec.order = order;
  spec.families = order == 1 ? std::vector<Family>{Family::neutral} : std::vector<Family>{Family::neutral, Family::perigee};
  return spec;
}

inline LogFit fit_exponent(const std::vector<double>& x, const std::vector<double>& y) {
  LogFit fit;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0 && y[i] > 0 && std::isfinite(y[i])) {
      lx.push_back(std::log(std::abs(x[i])));
      ly.push_back(std::log(y[i]));
    }
  fit.points = static_cast<int>(lx.size());
  if (lx.size() < 2) {
    fit.exponent = std::numeric_limits<double>::quiet_NaN();
    fit.intercept = std::numeric_limits<double>::quiet_NaN();
    fit.residual = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  fit.exponent = sxx > 0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
  fit.intercept = my - fit.exponent * mx;
  double ss = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double d = ly[i] - (fit.intercept + fit.exponent * lx[i]);
    ss += d * d;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

namespace detail {

template <class Real>
Real state_distance(const DelaunayState<Real>& a, const DelaunayState<Real>& b) {
  const Phase<Real> x = a.phase(), y = b.phase();
  Real worst = 0;
  for (int i = 0; i < 6; ++i) worst = std::max(worst, std::abs(x[i] - y[i]) / std::max(Real(1), std::abs(x[i])));
  return worst;
}

template <class Real>
ComparisonCell compare_cell(const KeplerianElements<Real>& orbit, int order, Real c20, Real t_span,
                            const ModelParams<Real>& base, const CompareOptions& options) {
  ComparisonCell cell;
  cell.order = order;
  cell.c20 = static_cast<double>(c20);
  try {
    const ModelParams<Real> params = base.with_c20(c20);
    const Real tol = options.tol > 0 ? static_cast<Real>(options.tol) : min_tolerance<Real>();
    const DelaunayState<Real> osc0 = keplerian_to_delaunay(orbit, params);
    const Real period = orbital_period(orbit.a, params);
    const int n = std::max(2, static_cast<int>(std::ceil(t_span / period * options.samples_per_period)) + 1);
    const std::vector<Real> grid = uniform_grid(Real(0), t_span, n);

    TransformSpec to_mean = compare_transform(order);
    to_mean.direction = Direction::osculating_to_mean;
    to_mean.tolerance = static_cast<double>(std::max(Real(1e-18), 64 * std::numeric_limits<Real>::epsilon()));
    TransformSpec to_osc = compare_transform(order);

    // Round trip with the explicit inverse series.
    TransformSpec series = to_mean;
    series.inversion = Inversion::series;
    const DelaunayState<Real> roundtrip = transform_state(series, transform_state(to_osc, osc0, params), params);
    cell.roundtrip_error = static_cast<double>(state_distance(osc0, roundtrip));

    const Trajectory<Real> truth = propagate_main(delaunay_to_cartesian(osc0, params), grid, tol, params);
    const DelaunayState<Real> mean0 = transform_state(to_mean, osc0, params);
    const Trajectory<Real> inter =
        propagate_intermediary(order, false, delaunay_to_polar_nodal(mean0, params), grid, tol, params);

    Real sum2 = 0, worst = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto mean = polar_nodal_to_delaunay(PolarNodalState<Real>::from_phase(inter.samples[k].state), params);
      const auto osc = delaunay_to_cartesian(transform_state(to_osc, mean, params), params);
      const auto ref = CartesianState<Real>::from_phase(truth.samples[k].state);
      std::array<Real, 3> d{osc.position[0] - ref.position[0], osc.position[1] - ref.position[1],
                            osc.position[2] - ref.position[2]};
      const Real err = norm(d);
      sum2 += err * err;
      worst = std::max(worst, err);
    }
    cell.rms_position_error = static_cast<double>(std::sqrt(sum2 / static_cast<Real>(grid.size())));
    cell.max_position_error = static_cast<double>(worst);
  } catch (const std::exception& ex) {
    cell.status = std::string("failed: ") + ex.what();
  }
  return cell;
}

}  // namespace detail

/// Truth vs. intermediary + transformation for every (order, c20) cell.
/// Failures are recorded per cell.  Cells run concurrently on `jobs` threads.
template <class Real = long double>
ComparisonReport compare(const KeplerianElements<double>& orbit0, const std::vector<int>& orders,
                         const std::vector<double>& c20_list, double t_span, const ModelParams<double>& params,
                         const CompareOptions& options = {}) {
  if (c20_list.size() < 2) throw std::invalid_argument("compare: at least two c20 values are needed for a fit");
  if (orders.empty()) throw std::invalid_argument("compare: no orders requested");
  for (int k : orders)
    if (k != 1 && k != 2) throw unsupported_term_error("compare: orders must be 1 or 2");
  if (!(t_span > 0)) throw std::invalid_argument("compare: t_span must be positive");

  const KeplerianElements<Real> orbit{Real(orbit0.a),    Real(orbit0.e),    Real(orbit0.i),
                                      Real(orbit0.raan), Real(orbit0.argp), Real(orbit0.mean_anomaly)};
  const ModelParams<Real> base = params.cast<Real>();

  ComparisonReport report;
  report.orbit = orbit0;
  report.orders = orders;
  report.c20_list = c20_list;
  report.t_span = t_span;
  for (int k : orders)
    for (double c : c20_list) report.cells.push_back({k, c});

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned jobs = std::min<unsigned>(options.jobs > 0 ? static_cast<unsigned>(options.jobs) : hw,
                                           static_cast<unsigned>(report.cells.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < report.cells.size(); i = next++) {
      const ComparisonCell& spec = report.cells[i];
      report.cells[i] =
          detail::compare_cell<Real>(orbit, spec.order, static_cast<Real>(spec.c20), Real(t_span), base, options);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (int k : orders) {
    std::vector<double> x, pos, trip;
    for (const auto& c : report.cells) {
      if (c.order != k || c.status != "ok") continue;
      x.push_back(c.c20);
      pos.push_back(c.max_position_error);
      trip.push_back(c.roundtrip_error);
    }
    report.fits.push_back({k, fit_exponent(x, pos), fit_exponent(x, trip)});
  }
  for (const auto& c : report.cells) {
    if (c.status != "ok") continue;
    report.rms_position_error = std::max(report.rms_position_error, c.rms_position_error);
    report.max_position_error = std::max(report.max_position_error, c.max_position_error);
  }
  return report;
}

}  // namespace radint
