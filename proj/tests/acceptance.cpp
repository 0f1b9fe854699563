// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "radint/cli.hpp"
#include "support.hpp"

using namespace radint;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("%s %d %s: %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

const CheckSummary& find(const VerifyReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c;
  throw std::runtime_error("acceptance: no check named " + name);
}

VerifyReport verify(const std::string& suite) {
  VerifyConfig cfg;
  cfg.suite = suite;
  cfg.n_points = 1000;
  cfg.seed = 20240601;
  cfg.tol = 1;  // thresholds are applied below, per criterion
  cfg.per_point = false;
  return run_verify(cfg);
}

// Largest residual of a named check over the 10 x 10 x 10 (e, s, w) grid.
double grid_max(const std::string& suite, const std::string& check) {
  const Suite s = make_suite(suite);
  const Check* c = nullptr;
  for (const auto& k : s.checks)
    if (k.name == check) c = &k;
  const ModelParams<double> p;
  double worst = 0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      for (int k = 0; k < 10; ++k) {
        const double e = 0.8 * i / 9, s_inc = j / 9.0, w = 2 * pi_v<double> * k / 10;
        const auto d = testing::state_s2(1.3, e, s_inc * s_inc, w, 0.0, p);
        worst = std::max(worst, c->residual(d, p).value_or(0.0));
      }
  return worst;
}

void criterion1() {
  const auto t0 = Clock::now();
  const VerifyReport r = verify("homological");
  const double elapsed = seconds_since(t0);
  double first = 0;
  for (const char* f : {"order1_BROUWER", "order1_PARALLAX", "order1_QUARTIC", "order1_NEUTRAL"})
    first = std::max(first, find(r, f).max);
  const double second = find(r, "order2_NEUTRAL").max;
  report(1, first <= 1e-6 && second <= 1e-5 && elapsed < 30, "homological residuals",
         fmt("order-1 max %.3g (<= 1e-6), order-2 NEUTRAL max %.3g (<= 1e-5), %.1f s (< 30 s)", first, second, elapsed));
}

void criterion2() {
  const double worst = grid_max("averages", "brouwer_H01");
  report(2, worst <= 1e-12, "Brouwer average", fmt("max relative difference %.3g over 1000 grid points (<= 1e-12)", worst));
}

void criterion3() {
  const double worst = grid_max("averages", "chi_average");
  report(3, worst <= 1e-10, "<chi> closed form", fmt("max relative difference %.3g over 1000 grid points (<= 1e-10)", worst));
}

void criterion4() {
  const VerifyReport r = verify("inclination");
  double worst = 0;
  for (const char* f : {"I01_BROUWER", "I01_PARALLAX", "I01_QUARTIC"}) worst = std::max(worst, find(r, f).max);
  report(4, worst <= 1e-8, "inclination correction", fmt("max scaled difference %.3g at 1000 points (<= 1e-8)", worst));
}

VerifyReport& perigee() {
  static VerifyReport r = verify("perigee");
  return r;
}

void criterion5() {
  const auto& c = find(perigee(), "a1_condition");
  report(5, c.max <= 1e-9 && c.failures == 0, "perigee A1 condition",
         fmt("max scaled residual %.3g at %.0f points outside the critical band (<= 1e-9)", c.max,
             static_cast<double>(c.count)));
}

void criterion6() {
  double worst = 0;
  for (int m = 1; m <= 3; ++m)
    for (const char* v : {"_theta", "_g"}) worst = std::max(worst, find(perigee(), "K0" + std::to_string(m) + v).max);
  report(6, worst <= 1e-10, "K0m theta/g independence", fmt("max scaled partial %.3g at 1000 points (<= 1e-10)", worst));
}

void criterion7() {
  const auto t0 = Clock::now();
  const ModelParams<double> p;
  const KeplerianElements<double> orbit = default_orbit();
  const ComparisonReport r = compare(orbit, {1, 2}, {1e-3, 1e-4, 1e-5}, 10 * orbital_period(orbit.a, p), p);
  const double elapsed = seconds_since(t0);
  bool ok = elapsed < 300;
  std::string detail;
  for (const auto& f : r.fits) {
    const double target = f.order + 1;
    ok = ok && f.position.points == 3 && f.roundtrip.points == 3 && std::abs(f.position.exponent - target) <= 0.3 &&
         std::abs(f.roundtrip.exponent - target) <= 0.3;
    detail += fmt("k=%.0f trajectory %.3f, round trip %.3f (target %.0f +- 0.3); ", f.order, f.position.exponent,
                  f.roundtrip.exponent, target);
  }
  report(7, ok, "transformation-order scaling", detail + fmt("%.1f s (< 300 s)", elapsed));
}

void criterion8() {
  const ModelParams<double> p;
  const auto d = keplerian_to_delaunay(default_orbit(), p);
  const double T = orbital_period(default_orbit().a, p);
  const auto grid = uniform_grid(0.0, 10 * T, 201);
  const auto truth = propagate_main(delaunay_to_cartesian(d, p), grid, 1e-12, p);
  double main_worst = std::max(truth.relative_drift(&Sample<double>::energy), truth.relative_drift(&Sample<double>::N));
  double inter_worst = 0;
  for (int order = 1; order <= 3; ++order)
    for (bool truncate : {false, true}) {
      const auto t = propagate_intermediary(order, truncate, delaunay_to_polar_nodal(d, p), grid, 1e-12, p);
      inter_worst = std::max({inter_worst, t.relative_drift(&Sample<double>::energy),
                              t.relative_drift(&Sample<double>::Theta), t.relative_drift(&Sample<double>::N)});
    }
  report(8, main_worst <= 1e-10 && inter_worst <= 1e-10, "conservation",
         fmt("main energy/N drift %.3g, intermediary H/Theta/N drift %.3g over 10 orbits at tol 1e-12 (<= 1e-10)",
             main_worst, inter_worst));
}

void criterion9() {
  const ModelParams<double> p;
  const std::vector<double> es{0.01, 0.02, 0.04, 0.08};
  std::vector<double> diffs;
  for (double e : es) {
    // kappa = 0, sigma = e at I = 50 deg
    const double Theta = 1.05, pp = Theta * Theta / p.mu;
    const PolarNodalState<double> pn{pp, 0.4, 0.2, e * Theta / pp, Theta, Theta * std::cos(50 * testing::deg)};
    diffs.push_back(std::abs(intermediary_hamiltonian(3, true, pn, p) - intermediary_hamiltonian(3, false, pn, p)));
  }
  const LogFit fit = fit_exponent(es, diffs);
  report(9, std::abs(fit.exponent - 2) <= 0.1, "truncated intermediary",
         fmt("exponent %.4f (target 2 +- 0.1), fit residual %.2g", fit.exponent, fit.residual));
}

}  // namespace

int main() {
  const std::function<void()> criteria[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                            criterion6, criterion7, criterion8, criterion9};
  int id = 0;
  for (const auto& run : criteria) {
    ++id;
    try {
      run();
    } catch (const std::exception& ex) {
      report(id, false, "criterion", std::string("threw: ") + ex.what());
    }
  }
  std::printf("%d of 9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
