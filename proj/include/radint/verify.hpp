#pragma once

// Verification suites: each check maps a sampled Delaunay state to a
// dimensionless residual (or skips it).  A suite passes when every residual
// is finite and at most the run tolerance.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ctime>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "radint/io.hpp"
#include "radint/quadrature.hpp"
#include "radint/sampling.hpp"

namespace radint {

struct VerifyConfig {
  std::string suite = "homological";
  int n_points = 1000;
  std::uint64_t seed = 1;
  double tol = 1e-6;
  int jobs = 0;  // 0 selects the hardware concurrency; does not affect results
  int worst = 5;  // worst offenders listed per check
  bool per_point = true;
  ModelParams<double> params{};
  SamplingRanges ranges{};
};

struct Check {
  std::string name;
  std::string description;
  // Residual at a point, or nullopt when the point is outside the check's domain.
  std::function<std::optional<double>(const DelaunayState<double>&, const ModelParams<double>&)> residual;
};

struct Suite {
  std::string name;
  bool exclude_critical = false;
  std::vector<Check> checks;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"homological", "brackets",    "averages",
                                                 "inclination", "perigee",     "decompositions"};
  return names;
}

namespace detail {

using Geo = OrbitGeometry<double>;
using Params = ModelParams<double>;
using Opt = std::optional<double>;

inline bool in_critical_band(const Geo& o, const Params& p) { return std::abs(4 - 5 * o.s * o.s) < p.critical_band; }

inline double rel(double a, double b, double scale) {
  return std::abs(a - b) / std::max({scale, std::numeric_limits<double>::min()});
}

inline ScalarField<double> synthetic_field(int k) {
  static const char* names[] = {"F", "G", "K"};
  auto body = [k](const Phase<double>& x) {
    switch (k) {
      case 0: return std::sin(x[0]) * x[4] + x[2] * x[3] * x[3];
      case 1: return std::cos(x[1]) * x[5] + x[0] * x[4];
      default: return x[3] * x[1] * x[2] + std::sin(x[5]);
    }
  };
  return {names[k], Chart::cartesian, body};
}

inline Check order1_check(Family family) {
  return {"order1_" + to_string(family), "L0(W1) - (H~01 - H01), scaled by mu C20 R^2/p^3",
          [family](const DelaunayState<double>& d, const Params& p) -> Opt {
            const Geo o = geometry(d, p);
            return std::abs(homological_residual(family, 1, d.phase(), p)) / term_scale(1, o, p);
          }};
}

inline Suite homological_suite() {
  Suite s{"homological", false, {}};
  for (Family f : {Family::brouwer, Family::parallax, Family::quartic, Family::neutral}) s.checks.push_back(order1_check(f));
  s.checks.push_back({"order1_PERIGEE", "n dA1/dl, scaled; skipped in the critical band",
                      [](const DelaunayState<double>& d, const Params& p) -> Opt {
                        const Geo o = geometry(d, p);
                        if (in_critical_band(o, p)) return std::nullopt;
                        return std::abs(homological_residual(Family::perigee, 1, d.phase(), p)) / term_scale(1, o, p);
                      }});
  s.checks.push_back({"order2_NEUTRAL", "L0(W2) - ({H01 + H10; W1} - H02), scaled by mu C20^2 R^4/p^5",
                      [](const DelaunayState<double>& d, const Params& p) -> Opt {
                        const Geo o = geometry(d, p);
                        return std::abs(homological_residual(Family::neutral, 2, d.phase(), p)) / term_scale(2, o, p);
                      }});
  s.checks.push_back({"order2_PERIGEE",
                      "L0(W2) - (H02 + 2{K01; A1} - K02), scaled by mu C20^2 R^4/(p^5 |4 - 5 s^2|); skipped in the "
                      "critical band",
                      [](const DelaunayState<double>& d, const Params& p) -> Opt {
                        const Geo o = geometry(d, p);
                        if (in_critical_band(o, p)) return std::nullopt;
                        const double scale = term_scale(2, o, p) / std::abs(4 - 5 * o.s * o.s);
                        return std::abs(homological_residual(Family::perigee, 2, d.phase(), p)) / scale;
                      }});
  return s;
}

inline Suite brackets_suite() {
  Suite s{"brackets", false, {}};
  s.checks.push_back({"canonical_pairs", "max |{x_i; x_j} - J_ij| over the Delaunay coordinate functions",
                      [](const DelaunayState<double>& d, const Params&) -> Opt {
                        double worst = 0;
                        const BracketConfig<double> cfg{};
                        for (int i = 0; i < 6; ++i)
                          for (int j = 0; j < 6; ++j) {
                            const double expected = (j == i + 3) ? 1 : (i == j + 3) ? -1 : 0;
                            const double value = poisson_bracket(detail::coordinate_field<double>(i),
                                                                 detail::coordinate_field<double>(j), d.phase(), cfg);
                            worst = std::max(worst, std::abs(value - expected));
                          }
                        return worst;
                      }});
  s.checks.push_back({"self_bracket", "|{W1; W1}| for the neutral W1, scaled by C20^2 G mu/p",
                      [](const DelaunayState<double>& d, const Params& p) -> Opt {
                        const auto W = term_field<double>("W1_NEUTRAL", p);
                        return std::abs(poisson_bracket(W, W, d.phase(), {})) / term_scale(2, geometry(d, p), p);
                      }});
  s.checks.push_back({"antisymmetry", "|{H10; W1} + {W1; H10}| for the parallax W1, scaled",
                      [](const DelaunayState<double>& d, const Params& p) -> Opt {
                        const auto H = term_field<double>("H10", p);
                        const auto W = term_field<double>("W1_PARALLAX", p);
                        const double sum = poisson_bracket(H, W, d.phase(), {}) + poisson_bracket(W, H, d.phase(), {});
                        return std::abs(sum) / term_scale(2, geometry(d, p), p);
                      }});
  s.checks.push_back({"lie_derivative", "|n dW1/dl - {W1; H00}| for the neutral W1, scaled",
                      [](const DelaunayState<double>& d, const Params& p) -> Opt {
                        const auto W = term_field<double>("W1_NEUTRAL", p);
                        const auto H00 = term_field<double>("H00", p);
                        return rel(lie_derivative_L0(W, d.phase(), p), poisson_bracket(W, H00, d.phase(), {}),
                                   term_scale(1, geometry(d, p), p));
                      }});
  s.checks.push_back({"step_halving", "{H10; W1(PARALLAX)} at base step 1e-6 against 5e-7, scaled",
                      [](const DelaunayState<double>& d, const Params& p) -> Opt {
                        const auto H = term_field<double>("H10", p);
                        const auto W = term_field<double>("W1_PARALLAX", p);
                        BracketConfig<double> fine;
                        fine.base_step = 5e-7;
                        return rel(poisson_bracket(H, W, d.phase(), {}), poisson_bracket(H, W, d.phase(), fine),
                                   term_scale(2, geometry(d, p), p));
                      }});
  s.checks.push_back({"synthetic_oracle", "{F; G} against the analytic bracket of two polynomial-trigonometric fields",
                      [](const DelaunayState<double>& d, const Params&) -> Opt {
                        const Phase<double> x = d.phase();
                        const ScalarField<double> F{"F", Chart::cartesian,
                                                    [](const Phase<double>& y) { return y[0] * y[0] * y[4] + std::sin(y[2]); }};
                        const ScalarField<double> G{"G", Chart::cartesian,
                                                    [](const Phase<double>& y) { return y[3] * y[5] + y[1] * y[4]; }};
                        const double exact = 2 * x[0] * x[4] * x[5] + x[3] * std::cos(x[2]) - x[0] * x[0] * x[4];
                        return rel(poisson_bracket(F, G, x, {}), exact, std::max(1.0, std::abs(exact)));
                      }});
  s.checks.push_back({"jacobi", "{F;{G;K}} + {G;{K;F}} + {K;{F;G}} for smooth synthetic fields, scaled by the largest term",
                      [](const DelaunayState<double>& d, const Params&) -> Opt {
                        // O(1) fields: a 1e-4 inner step keeps eps/(inner * outer) below the budget.
                        BracketConfig<double> cfg;
                        cfg.base_step = 1e-4;
                        const Phase<double> x = d.phase();
                        const auto F = synthetic_field(0), G = synthetic_field(1), K = synthetic_field(2);
                        const double a = poisson_bracket(F, bracket_field(G, K, cfg), x, cfg);
                        const double b = poisson_bracket(G, bracket_field(K, F, cfg), x, cfg);
                        const double c = poisson_bracket(K, bracket_field(F, G, cfg), x, cfg);
                        return std::abs(a + b + c) / std::max({1.0, std::abs(a), std::abs(b), std::abs(c)});
                      }});
  return s;
}

inline Suite averages_suite() {
  Suite s{"averages", false, {}};
  s.checks.push_back({"brouwer_H01", "H01(BROUWER) against the 64-node average of H~01, relative to max(|H01|, scale)",
                      [](const DelaunayState<double>& d, const Params& p) -> Opt {
                        const Geo o = geometry(d, p);
                        const auto Ht = term_field<double>("Htilde01", p);
                        const double avg = average_over_mean_anomaly(Ht, o, p, 64);
                        const double h01 = eval_H01(Family::brouwer, o, p);
                        return rel(avg, h01, std::max(std::abs(h01), term_scale(1, o, p)));
                      }});
  s.checks.push_back({"chi_average", "<chi> closed form against the 256-node average, relative to max(|<chi>|, scale)",
                      [](const DelaunayState<double>& d, const Params& p) -> Opt {
                        const Geo o = geometry(d, p);
                        const auto chi = term_field<double>("CHI_BROUWER", p);
                        const double avg = average_over_mean_anomaly(chi, o, p, 256);
                        const double closed = chi_average(o, p);
                        return rel(avg, closed, std::max(std::abs(closed), term_scale(2, o, p)));
                      }});
  s.checks.push_back({"long_period_free", "average of W1(NEUTRAL, LONG_PERIOD_FREE) over l, scaled by |G C20 R^2/p^2|",
                      [](const DelaunayState<double>& d, const Params& p) -> Opt {
                        const Geo o = geometry(d, p);
                        const auto W = generator_field<double>({Family::neutral, 1, A1Mode::long_period_free}, 1, p);
                        const double scale = std::abs(o.G * p.c20) * p.re * p.re / (o.p * o.p);
                        return std::abs(average_over_mean_anomaly(W, o, p, 128)) / scale;
                      }});
  s.checks.push_back({"cos_f", "<cos f> + e",
                      [](const DelaunayState<double>& d, const Params& p) -> Opt {
                        const Geo o = geometry(d, p);
                        const auto F = [&p](const Phase<double>& x) {
                          return std::cos(geometry(DelaunayState<double>::from_phase(x), p).f);
                        };
                        return std::abs(average_over_mean_anomaly(F, o, p, 64) + o.e);
                      }});
  s.checks.push_back({"unit", "<1> - 1",
                      [](const DelaunayState<double>& d, const Params& p) -> Opt {
                        const Geo o = geometry(d, p);
                        const auto one = [](const Phase<double>&) { return 1.0; };
                        return std::abs(average_over_mean_anomaly(one, o, p, 64) - 1);
                      }});
  return s;
}

inline Suite inclination_suite() {
  Suite s{"inclination", false, {}};
  for (Family f : {Family::brouwer, Family::parallax, Family::quartic, Family::neutral}) {
    s.checks.push_back({"I01_" + to_string(f), "{I; W1} against the closed-form I01, scaled by |C20| R^2/p^2",
                        [f](const DelaunayState<double>& d, const Params& p) -> Opt {
                          const Geo o = geometry(d, p);
                          const auto W = generator_field<double>(GeneratorChoice::defaults(f, 1), 1, p);
                          const double bracket = poisson_bracket(inclination_field<double>(), W, d.phase(), {});
                          const double scale = std::abs(p.c20) * p.re * p.re / (o.p * o.p);
                          return rel(bracket, inclination_correction_I01(o, p), scale);
                        }});
  }
  return s;
}

/// K0m as a polar-nodal field; its theta and g partials must vanish.
inline ScalarField<double> k0m_polar(int m, const Params& p) {
  return {"K0" + std::to_string(m), Chart::polar_nodal, [m, p](const Phase<double>& x) {
            const auto pn = PolarNodalState<double>::from_phase(x);
            return eval_K0m_perigee(m, geometry(pn, p), p);
          }};
}

inline Suite perigee_suite() {
  Suite s{"perigee", true, {}};
  s.checks.push_back({"a1_condition", "(4 - 5 s^2) dA1/dg + forcing, scaled by |C20| R^2/p^2 G",
                      [](const DelaunayState<double>& d, const Params& p) -> Opt {
                        const Geo o = geometry(d, p);
                        if (in_critical_band(o, p)) return std::nullopt;
                        const auto A1 = term_field<double>("A1_PERIGEE", p);
                        const double dA = partial(A1, d.phase(), 1, BracketConfig<double>{});
                        const double scale = std::abs(p.c20) * p.re * p.re / (o.p * o.p) * o.G;
                        return std::abs(perigee_a1_condition(o, p, dA)) / scale;
                      }});
  for (int m = 1; m <= 3; ++m) {
    s.checks.push_back({"K0" + std::to_string(m) + "_theta",
                        "dK0m/dtheta in polar-nodal variables, scaled by mu C20^m R^2m/(p^(2m+1) |4 - 5 s^2|^(m-1))",
                        [m](const DelaunayState<double>& d, const Params& p) -> Opt {
                          const Geo o = geometry(d, p);
                          if (in_critical_band(o, p)) return std::nullopt;
                          const double scale = term_scale(m, o, p) / std::pow(std::abs(4 - 5 * o.s * o.s), m - 1);
                          const auto pn = delaunay_to_polar_nodal(d, p);
                          return std::abs(partial(k0m_polar(m, p), pn.phase(), 1, BracketConfig<double>{})) / scale;
                        }});
    s.checks.push_back({"K0" + std::to_string(m) + "_g", "dK0m/dg in Delaunay variables, scaled as above",
                        [m](const DelaunayState<double>& d, const Params& p) -> Opt {
                          const Geo o = geometry(d, p);
                          if (in_critical_band(o, p)) return std::nullopt;
                          const double scale = term_scale(m, o, p) / std::pow(std::abs(4 - 5 * o.s * o.s), m - 1);
                          const auto K = term_field<double>("K0" + std::to_string(m) + "_PERIGEE", p);
                          return std::abs(partial(K, d.phase(), 1, BracketConfig<double>{})) / scale;
                        }});
  }
  s.checks.push_back({"w2_homological", "second-order perigee homological residual, scaled as in the homological suite",
                      [](const DelaunayState<double>& d, const Params& p) -> Opt {
                        const Geo o = geometry(d, p);
                        if (in_critical_band(o, p)) return std::nullopt;
                        const double scale = term_scale(2, o, p) / std::abs(4 - 5 * o.s * o.s);
                        return std::abs(homological_residual(Family::perigee, 2, d.phase(), p)) / scale;
                      }});
  for (const char* name : {"A1_PERIGEE", "A2_PERIGEE"}) {
    const std::string term = name;
    s.checks.push_back({"dl_" + term, "n dA/dl, scaled by n |A| + term scale",
                        [term](const DelaunayState<double>& d, const Params& p) -> Opt {
                          const Geo o = geometry(d, p);
                          if (in_critical_band(o, p)) return std::nullopt;
                          const auto A = term_field<double>(term, p);
                          const int m = term[1] - '0';
                          const double scale = o.n * std::abs(A(d.phase())) + term_scale(m, o, p);
                          return std::abs(lie_derivative_L0(A, d.phase(), p)) / scale;
                        }});
  }
  return s;
}

inline Suite decompositions_suite() {
  Suite s{"decompositions", false, {}};
  s.checks.push_back({"kt1_vs_kt1D", "true-anomaly and conic forms of H~01, scaled",
                      [](const DelaunayState<double>& d, const Params& p) -> Opt {
                        const Geo o = geometry(d, p);
                        return rel(eval_Htilde01(o, p, Htilde01Form::true_anomaly),
                                   eval_Htilde01(o, p, Htilde01Form::conic), term_scale(1, o, p));
                      }});
  s.checks.push_back({"subtraction", "H~01 against (H(main) - H(Kepler)) / epsilon, scaled",
                      [](const DelaunayState<double>& d, const Params& p) -> Opt {
                        const Geo o = geometry(d, p);
                        const double kepler = -p.mu * p.mu / (2 * d.L * d.L);
                        const double diff = (eval_main_hamiltonian(d, p) - kepler) / p.epsilon;
                        return rel(eval_Htilde01(o, p), diff, term_scale(1, o, p));
                      }});
  s.checks.push_back({"chart_invariance", "main Hamiltonian through Delaunay, polar-nodal and Cartesian charts, relative",
                      [](const DelaunayState<double>& d, const Params& p) -> Opt {
                        const double hd = eval_main_hamiltonian(d, p);
                        const auto pn = delaunay_to_polar_nodal(d, p);
                        const double hp = eval_main_hamiltonian(pn, p);
                        const double hc = eval_main_hamiltonian(polar_nodal_to_cartesian(pn), p);
                        return std::max(rel(hd, hp, std::abs(hd)), rel(hd, hc, std::abs(hd)));
                      }});
  s.checks.push_back({"radius_split_quartic", "kernel + image of the quartic 1/r^2 split against 1/r^2, relative",
                      [](const DelaunayState<double>& d, const Params& p) -> Opt {
                        const Geo o = geometry(d, p);
                        const double direct = 1 / (o.r * o.r);
                        return rel(inverse_radius_square_quartic(o).total(), direct, direct);
                      }});
  s.checks.push_back({"radius_split_neutral", "kernel + image of the neutral 1/r^2 split against 1/r^2, relative",
                      [](const DelaunayState<double>& d, const Params& p) -> Opt {
                        const Geo o = geometry(d, p);
                        const double direct = 1 / (o.r * o.r);
                        return rel(inverse_radius_square_neutral(o).total(), direct, direct);
                      }});
  s.checks.push_back({"e2_cos2w", "e^2 cos 2w from kappa, sigma, theta against the Delaunay value",
                      [](const DelaunayState<double>& d, const Params& p) -> Opt {
                        const Geo o = geometry(d, p);
                        return std::abs(e2_cos2w(o) - o.e * o.e * std::cos(2 * o.g));
                      }});
  for (int order = 1; order <= 2; ++order) {
    s.checks.push_back({"W" + std::to_string(order) + "_polar",
                        "neutral W" + std::to_string(order) + " in kappa, sigma against the Delaunay form, scaled",
                        [order](const DelaunayState<double>& d, const Params& p) -> Opt {
                          const Geo o = geometry(d, p);
                          const double polar = eval_W_polar(order, delaunay_to_polar_nodal(d, p), p);
                          const double delaunay = order == 1
                                                      ? eval_W1(GeneratorChoice::defaults(Family::neutral), o, p)
                                                      : eval_W2(Family::neutral, o, p);
                          const double scale = o.G * std::pow(std::abs(p.c20) * p.re * p.re / (o.p * o.p), order);
                          return rel(polar, delaunay, scale);
                        }});
  }
  s.checks.push_back({"H02_is_pQ_over_r", "H02(NEUTRAL) against (p/r) Q, scaled",
                      [](const DelaunayState<double>& d, const Params& p) -> Opt {
                        const Geo o = geometry(d, p);
                        return rel(eval_H02(Family::neutral, o, p), o.p / o.r * eval_Q(o, p), term_scale(2, o, p));
                      }});
  s.checks.push_back({"family_relations",
                      "NEUTRAL = PARALLAX (p/r) and QUARTIC = PARALLAX (p/r)^2 2/(2+e^2), scaled",
                      [](const DelaunayState<double>& d, const Params& p) -> Opt {
                        const Geo o = geometry(d, p);
                        const double par = eval_H01(Family::parallax, o, p);
                        const double pr = o.p / o.r;
                        const double scale = term_scale(1, o, p);
                        return std::max(rel(eval_H01(Family::neutral, o, p), par * pr, scale),
                                        rel(eval_H01(Family::quartic, o, p), par * pr * pr * 2 / (2 + o.e * o.e), scale));
                      }});
  return s;
}

}  // namespace detail

inline Suite make_suite(const std::string& name) {
  if (name == "homological") return detail::homological_suite();
  if (name == "brackets") return detail::brackets_suite();
  if (name == "averages") return detail::averages_suite();
  if (name == "inclination") return detail::inclination_suite();
  if (name == "perigee") return detail::perigee_suite();
  if (name == "decompositions") return detail::decompositions_suite();
  throw std::invalid_argument("unknown suite '" + name + "'");
}

struct Offender {
  std::size_t index = 0;
  double residual = 0;
  DelaunayState<double> state;
};

struct CheckSummary {
  std::string name;
  std::string description;
  std::size_t count = 0;    // evaluated points
  std::size_t skipped = 0;  // outside the check's domain
  std::size_t failures = 0; // residual > tol or not finite
  double max = 0, p50 = 0, p90 = 0, p99 = 0;
  std::vector<Offender> worst;
  std::vector<std::optional<double>> residuals;  // per point; nullopt = skipped
  std::vector<std::string> errors;               // "index: message" for points that threw
  bool passed = true;
};

struct VerifyReport {
  VerifyConfig config;
  std::vector<CheckSummary> checks;
  bool passed = true;
};

namespace detail {

/// Nearest-rank percentile of a sorted sample.
inline double percentile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0;
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

}  // namespace detail

/// Runs one suite.  Point k is sample_state(seed, k), so the report does not
/// depend on `jobs`.
inline VerifyReport run_verify(const VerifyConfig& config) {
  if (config.n_points < 1) throw std::invalid_argument("verify: n_points must be positive");
  if (!(config.tol > 0)) throw std::invalid_argument("verify: tol must be positive");
  config.params.validate();
  const Suite suite = make_suite(config.suite);
  SamplingRanges ranges = config.ranges;
  ranges.exclude_critical = ranges.exclude_critical || suite.exclude_critical;

  const auto n = static_cast<std::size_t>(config.n_points);
  const std::size_t nc = suite.checks.size();
  std::vector<std::vector<std::optional<double>>> values(nc, std::vector<std::optional<double>>(n));
  std::vector<std::vector<std::string>> errors(nc, std::vector<std::string>(n));
  std::vector<DelaunayState<double>> states(n);

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned jobs = std::min<unsigned>(config.jobs > 0 ? static_cast<unsigned>(config.jobs) : hw,
                                           static_cast<unsigned>(n));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      states[k] = sample_state(config.seed, k, ranges, config.params);
      for (std::size_t c = 0; c < nc; ++c) {
        try {
          values[c][k] = suite.checks[c].residual(states[k], config.params);
        } catch (const std::exception& ex) {
          values[c][k] = std::numeric_limits<double>::quiet_NaN();
          errors[c][k] = ex.what();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  VerifyReport report;
  report.config = config;
  for (std::size_t c = 0; c < nc; ++c) {
    CheckSummary sum;
    sum.name = suite.checks[c].name;
    sum.description = suite.checks[c].description;
    std::vector<double> finite;
    std::vector<Offender> all;
    for (std::size_t k = 0; k < n; ++k) {
      const auto& v = values[c][k];
      if (!v) {
        ++sum.skipped;
        continue;
      }
      ++sum.count;
      if (!errors[c][k].empty()) sum.errors.push_back(std::to_string(k) + ": " + errors[c][k]);
      if (!std::isfinite(*v) || *v > config.tol) ++sum.failures;
      if (std::isfinite(*v)) finite.push_back(*v);
      all.push_back({k, std::isfinite(*v) ? *v : std::numeric_limits<double>::infinity(), states[k]});
    }
    std::sort(finite.begin(), finite.end());
    sum.max = finite.empty() ? 0 : finite.back();
    sum.p50 = detail::percentile(finite, 0.50);
    sum.p90 = detail::percentile(finite, 0.90);
    sum.p99 = detail::percentile(finite, 0.99);
    std::stable_sort(all.begin(), all.end(), [](const Offender& a, const Offender& b) { return a.residual > b.residual; });
    all.resize(std::min<std::size_t>(all.size(), static_cast<std::size_t>(std::max(0, config.worst))));
    sum.worst = std::move(all);
    if (config.per_point) sum.residuals = values[c];
    sum.passed = sum.failures == 0;
    report.passed = report.passed && sum.passed;
    report.checks.push_back(std::move(sum));
  }
  return report;
}

inline nlohmann::ordered_json to_json(const VerifyReport& r, bool timestamp) {
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json worst = nlohmann::ordered_json::array();
    for (const auto& w : c.worst)
      worst.push_back({{"index", w.index}, {"residual", finite_or_null(w.residual)}, {"delaunay", to_json(w.state)}});
    nlohmann::ordered_json item = {{"name", c.name},
                                   {"description", c.description},
                                   {"passed", c.passed},
                                   {"count", c.count},
                                   {"skipped", c.skipped},
                                   {"failures", c.failures},
                                   {"max", c.max},
                                   {"p50", c.p50},
                                   {"p90", c.p90},
                                   {"p99", c.p99},
                                   {"worst", worst}};
    if (!c.errors.empty()) item["errors"] = c.errors;
    if (!c.residuals.empty()) {
      nlohmann::ordered_json values = nlohmann::ordered_json::array();
      for (const auto& v : c.residuals) values.push_back(v ? finite_or_null(*v) : nlohmann::ordered_json(nullptr));
      item["residuals"] = values;
    }
    checks.push_back(item);
  }
  const auto& cfg = r.config;
  nlohmann::ordered_json out = {
      {"command", "verify"},
      {"config",
       {{"suite", cfg.suite},
        {"n_points", cfg.n_points},
        {"seed", cfg.seed},
        {"tol", cfg.tol},
        {"params", to_json(cfg.params)},
        {"sampling",
         {{"a", {cfg.ranges.a_min, cfg.ranges.a_max}},
          {"e", {cfg.ranges.e_min, cfg.ranges.e_max}},
          {"i_deg", {cfg.ranges.inc_min_deg, cfg.ranges.inc_max_deg}},
          {"exclude_critical", cfg.ranges.exclude_critical || make_suite(cfg.suite).exclude_critical}}}}},
      {"seed", cfg.seed},
      {"passed", r.passed},
      {"checks", checks}};
  if (timestamp) out["timestamp"] = static_cast<long long>(std::time(nullptr));
  return out;
}

}  // namespace radint
