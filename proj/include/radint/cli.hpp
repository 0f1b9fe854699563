#pragma once

// Command-line front end.  run_cli() parses arguments, runs one subcommand
// and returns the process exit code: 0 pass, 1 assertion failure, 2 usage or
// input error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "radint/io.hpp"
#include "radint/verify.hpp"

namespace radint {

enum ExitCode : int { exit_pass = 0, exit_failure = 1, exit_usage = 2 };

/// Default harness orbit: a = 1.1, e = 0.05, I = 50 deg.
inline KeplerianElements<double> default_orbit() {
  const double deg = pi_v<double> / 180;
  return {1.1, 0.05, 50 * deg, 0.3, 0.7, 0.2};
}

namespace detail {

struct Common {
  std::string output = "json";
  std::string out_path;
  int jobs = 0;
  bool no_timestamp = false;
  std::uint64_t seed = 1;
  std::optional<double> mu, re, c20;
};

struct VerifyArgs {
  std::string suite = "homological";
  int n_points = 1000;
  double tol = 1e-6;
  bool no_residuals = false;
};

struct PropagateArgs {
  std::string model = "main";
  std::string state_file;
  std::optional<double> tf;
  double periods = 10;
  double tol = 1e-12;
  int samples = 201;
  int order = 2;
  bool truncate = false;
};

struct CompareArgs {
  std::string orbit_file;
  std::vector<int> orders{1};
  std::vector<double> c20_sweep{1e-3, 1e-4, 1e-5};
  std::optional<double> tf;
  double periods = 10;
  int samples_per_period = 20;
};

struct AverageArgs {
  std::string term = "Htilde01";
  std::string state_file;
  double a = 1.1, e = 0.05, i_deg = 50, argp_deg = 40;
  int nodes = 0;  // 0: double from 16 until converged
};

struct TermsArgs {
  std::string family;
  std::optional<int> order;
};

inline void add_common(CLI::App* cmd, Common& c, bool with_params) {
  cmd->add_option("--output", c.output, "Output format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", c.out_path, "Output file (default: stdout)");
  cmd->add_option("--jobs", c.jobs, "Worker threads (default: available cores)")->check(CLI::NonNegativeNumber);
  cmd->add_flag("--no-timestamp", c.no_timestamp, "Omit the timestamp so reports are byte-identical");
  cmd->add_option("--seed", c.seed, "64-bit seed of the counter-based generator");
  if (with_params) {
    cmd->add_option("--mu", c.mu, "Gravitational parameter");
    cmd->add_option("--re", c.re, "Equatorial radius");
    cmd->add_option("--c20", c.c20, "Zonal coefficient C20 (= -J2)");
  }
}

inline ModelParams<double> params_from(const Common& c, ModelParams<double> base = {}) {
  if (c.mu) base.mu = *c.mu;
  if (c.re) base.re = *c.re;
  if (c.c20) base.c20 = *c.c20;
  base.validate();
  return base;
}

/// Writes to --out or the given stream.
inline void emit(const std::string& text, const Common& c, std::ostream& out) {
  if (c.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(c.out_path);
  if (!file) throw input_error("cannot write '" + c.out_path + "'");
  file << text;
}

inline std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

inline int cmd_verify(const VerifyArgs& a, const Common& c, std::ostream& out) {
  VerifyConfig cfg;
  cfg.suite = a.suite;
  cfg.n_points = a.n_points;
  cfg.seed = c.seed;
  cfg.tol = a.tol;
  cfg.jobs = c.jobs;
  cfg.per_point = !a.no_residuals;
  cfg.params = params_from(c);
  const VerifyReport report = run_verify(cfg);
  if (c.output == "csv") {
    std::ostringstream csv;
    csv << std::setprecision(17) << "check,count,skipped,failures,max,p50,p90,p99,passed\n";
    for (const auto& k : report.checks)
      csv << k.name << ',' << k.count << ',' << k.skipped << ',' << k.failures << ',' << k.max << ',' << k.p50 << ','
          << k.p90 << ',' << k.p99 << ',' << (k.passed ? "true" : "false") << '\n';
    emit(csv.str(), c, out);
  } else {
    emit(dump(to_json(report, !c.no_timestamp)), c, out);
  }
  return report.passed ? exit_pass : exit_failure;
}

inline int cmd_propagate(const PropagateArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
  const StateFile state = read_state_file(a.state_file, params_from(c));
  const ModelParams<double>& params = state.params;
  const double period = orbital_period(state.delaunay.L * state.delaunay.L / params.mu, params);
  const double tf = a.tf ? *a.tf : a.periods * period;
  if (!(tf > 0)) throw std::invalid_argument("propagate: final time must be positive");
  const std::vector<double> grid = uniform_grid(0.0, tf, a.samples);

  Trajectory<double> traj;
  double budget = 100 * a.tol;
  if (a.model == "main") {
    traj = propagate_main(state.cartesian, grid, a.tol, params);
  } else {
    const auto pn = delaunay_to_polar_nodal(state.delaunay, params);
    traj = propagate_intermediary(a.order, a.truncate, pn, grid, a.tol, params);
  }
  const double dH = traj.relative_drift(&Sample<double>::energy);
  const double dTheta = traj.relative_drift(&Sample<double>::Theta);
  const double dN = traj.relative_drift(&Sample<double>::N);

  if (c.output == "json") {
    nlohmann::ordered_json samples = nlohmann::ordered_json::array();
    for (const auto& s : traj.samples) {
      Phase<double> y = s.state;
      if (traj.chart == Chart::polar_nodal) y = polar_nodal_to_cartesian(PolarNodalState<double>::from_phase(y)).phase();
      samples.push_back({{"t", s.t}, {"state", y}, {"H", s.energy}, {"Theta", s.Theta}, {"N", s.N}});
    }
    nlohmann::ordered_json j = {{"command", "propagate"},
                                {"model", traj.model},
                                {"config", {{"state_file", a.state_file}, {"tf", tf}, {"tol", a.tol}, {"samples", a.samples}}},
                                {"params", to_json(params)},
                                {"energy_drift", dH},
                                {"Theta_drift", dTheta},
                                {"N_drift", dN},
                                {"accepted_steps", traj.stats.accepted},
                                {"rejected_steps", traj.stats.rejected},
                                {"samples", samples}};
    if (!c.no_timestamp) j["timestamp"] = static_cast<long long>(std::time(nullptr));
    emit(dump(j), c, out);
  } else {
    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    emit(csv.str(), c, out);
  }

  // Theta is an integral of the intermediary only.
  const bool ok = dH <= budget && dN <= budget && (a.model == "main" || dTheta <= budget);
  err << std::setprecision(3) << "propagate " << traj.model << ": samples=" << traj.samples.size()
      << " steps=" << traj.stats.accepted << " rejected=" << traj.stats.rejected << " energy_drift=" << dH
      << " Theta_drift=" << dTheta << " N_drift=" << dN << " budget=" << budget << (ok ? " ok" : " EXCEEDED") << '\n';
  return ok ? exit_pass : exit_failure;
}

inline int cmd_compare(const CompareArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
  if (a.c20_sweep.size() < 2) throw std::invalid_argument("compare: --c20 needs at least two sweep values");
  ModelParams<double> params = params_from(c);
  KeplerianElements<double> orbit = default_orbit();
  if (!a.orbit_file.empty()) {
    const StateFile state = read_state_file(a.orbit_file, params);
    params = state.params;
    orbit = delaunay_to_keplerian(state.delaunay, params);
  }
  const double period = orbital_period(orbit.a, params);
  const double tf = a.tf ? *a.tf : a.periods * period;
  CompareOptions options;
  options.samples_per_period = a.samples_per_period;
  options.jobs = c.jobs;
  const ComparisonReport report = compare(orbit, a.orders, a.c20_sweep, tf, params, options);

  std::size_t ok = 0;
  for (const auto& cell : report.cells) ok += cell.status == "ok" ? 1 : 0;
  if (c.output == "csv") {
    std::ostringstream csv;
    csv << std::setprecision(17) << "order,c20,rms_position_error,max_position_error,roundtrip_error,status\n";
    for (const auto& cell : report.cells)
      csv << cell.order << ',' << cell.c20 << ',' << cell.rms_position_error << ',' << cell.max_position_error << ','
          << cell.roundtrip_error << ',' << cell.status << '\n';
    emit(csv.str(), c, out);
  } else {
    nlohmann::ordered_json j = to_json(report);
    j["metadata"]["seed"] = c.seed;
    j["metadata"]["params"] = to_json(params);
    j["metadata"]["samples_per_period"] = a.samples_per_period;
    if (!c.no_timestamp) j["timestamp"] = static_cast<long long>(std::time(nullptr));
    emit(dump(j), c, out);
  }
  for (const auto& f : report.fits)
    err << "compare order " << f.order << ": position exponent=" << f.position.exponent
        << " (residual " << f.position.residual << "), round-trip exponent=" << f.roundtrip.exponent << " (residual "
        << f.roundtrip.residual << ")\n";
  return ok > 0 ? exit_pass : exit_failure;
}

inline int cmd_average(const AverageArgs& a, const Common& c, std::ostream& out) {
  ModelParams<double> params = params_from(c);
  DelaunayState<double> d;
  if (!a.state_file.empty()) {
    const StateFile state = read_state_file(a.state_file, params);
    params = state.params;
    d = state.delaunay;
  } else {
    const double deg = pi_v<double> / 180;
    d = keplerian_to_delaunay(KeplerianElements<double>{a.a, a.e, a.i_deg * deg, 0, a.argp_deg * deg, 0}, params);
  }
  const TermInfo& info = find_term(a.term);
  if (info.chart != Chart::delaunay) throw std::invalid_argument("average: term '" + a.term + "' is not a Delaunay field");
  const auto field = term_field<double>(a.term, params);
  const OrbitGeometry<double> o = geometry(d, params);

  AverageResult<double> result;
  if (a.nodes > 0) {
    result.value = average_over_mean_anomaly(field, o, params, a.nodes);
    result.nodes = a.nodes;
    result.converged = true;
  } else {
    result = average_until_converged(field, o, params);
  }
  nlohmann::ordered_json j = {{"command", "average"},
                              {"term", a.term},
                              {"delaunay", to_json(d)},
                              {"params", to_json(params)},
                              {"value", result.value},
                              {"nodes", result.nodes},
                              {"change", result.change},
                              {"converged", result.converged}};
  if (a.term == "Htilde01" || a.term == "H10") j["closed_form"] = eval_H01(Family::brouwer, o, params);
  if (a.term == "CHI_BROUWER") j["closed_form"] = chi_average(o, params);
  if (!c.no_timestamp) j["timestamp"] = static_cast<long long>(std::time(nullptr));
  if (c.output == "csv") {
    std::ostringstream csv;
    csv << std::setprecision(17) << "term,value,nodes,change,converged\n"
        << a.term << ',' << result.value << ',' << result.nodes << ',' << result.change << ','
        << (result.converged ? "true" : "false") << '\n';
    emit(csv.str(), c, out);
  } else {
    emit(dump(j), c, out);
  }
  return result.converged ? exit_pass : exit_failure;
}

inline int cmd_terms(const TermsArgs& a, const Common& c, std::ostream& out) {
  std::optional<Family> family;
  if (!a.family.empty() && a.family != "MAIN") family = parse_family(a.family);
  std::vector<TermInfo> terms = find_terms(family, a.order);
  if (a.family == "MAIN")
    std::erase_if(terms, [](const TermInfo& t) { return t.family.has_value(); });
  if (c.output == "csv") {
    std::ostringstream csv;
    csv << "name,family,order,kind,chart\n";
    for (const auto& t : terms)
      csv << t.name << ',' << (t.family ? to_string(*t.family) : "MAIN") << ',' << t.order << ',' << to_string(t.kind)
          << ',' << to_string(t.chart) << '\n';
    emit(csv.str(), c, out);
  } else {
    emit(dump(registry_json(terms)), c, out);
  }
  return exit_pass;
}

}  // namespace detail

/// Entry point shared by the executable and the tests.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Lie-transform toolkit for the J2 main problem and its radial intermediary", "radint"};
  app.set_config("--config", "", "TOML configuration file (sections named after subcommands)");
  app.require_subcommand(1);
  app.set_version_flag("--version", "radint 1.0.0");

  detail::Common vc, pc, cc, ac, tc;  // one per subcommand, so defaults stay separate
  detail::VerifyArgs va;
  detail::PropagateArgs pa;
  detail::CompareArgs ca;
  detail::AverageArgs aa;
  detail::TermsArgs ta;

  auto* verify = app.add_subcommand("verify", "Run a verification suite on seeded random states");
  verify->add_option("--suite", va.suite, "Suite name")->check(CLI::IsMember(suite_names()));
  verify->add_option("--n-points", va.n_points, "Number of sampled states")->check(CLI::Range(1, 100000000));
  verify->add_option("--tol", va.tol, "Largest accepted scaled residual")->check(CLI::PositiveNumber);
  verify->add_flag("--no-residuals", va.no_residuals, "Leave per-point residuals out of the report");
  detail::add_common(verify, vc, true);

  auto* propagate = app.add_subcommand("propagate", "Propagate the main problem or the intermediary");
  propagate->add_option("--model", pa.model, "main or intermediary")->check(CLI::IsMember({"main", "intermediary"}));
  propagate->add_option("--state", pa.state_file, "JSON state file")->required();
  propagate->add_option("--tf", pa.tf, "Final time (overrides --periods)")->check(CLI::PositiveNumber);
  propagate->add_option("--periods", pa.periods, "Final time in orbital periods")->check(CLI::PositiveNumber);
  propagate->add_option("--tol", pa.tol, "Integrator tolerance in [1e-13, 1e-6]");
  propagate->add_option("--samples", pa.samples, "Output samples")->check(CLI::Range(2, 10000000));
  propagate->add_option("--order", pa.order, "Intermediary order")->check(CLI::Range(0, 3));
  propagate->add_flag("--truncate", pa.truncate, "Drop the eccentricity terms of the intermediary");
  detail::add_common(propagate, pc, true);
  propagate->get_option("--output")->default_val("csv");

  auto* cmp = app.add_subcommand("compare", "Trajectory and round-trip errors over a C20 sweep");
  cmp->add_option("--orbit", ca.orbit_file, "JSON state file of the initial osculating orbit (default: LEO test orbit)");
  cmp->add_option("--orders", ca.orders, "Transformation orders")->delimiter(',')->check(CLI::Range(1, 2));
  cmp->add_option("--c20,--c20-sweep", ca.c20_sweep, "C20 values (at least two)")->delimiter(',');
  cmp->add_option("--tf", ca.tf, "Final time (overrides --periods)")->check(CLI::PositiveNumber);
  cmp->add_option("--periods", ca.periods, "Span in orbital periods")->check(CLI::PositiveNumber);
  cmp->add_option("--samples-per-period", ca.samples_per_period, "Comparison samples per period")
      ->check(CLI::PositiveNumber);
  detail::add_common(cmp, cc, false);
  cmp->add_option("--mu", cc.mu, "Gravitational parameter");
  cmp->add_option("--re", cc.re, "Equatorial radius");

  auto* avg = app.add_subcommand("average", "Mean-anomaly average of a registered term");
  avg->add_option("--term", aa.term, "Registered term name");
  avg->add_option("--state", aa.state_file, "JSON state file (overrides the element options)");
  avg->add_option("--a", aa.a, "Semi-major axis")->check(CLI::PositiveNumber);
  avg->add_option("--e", aa.e, "Eccentricity")->check(CLI::Range(0.0, 0.999999));
  avg->add_option("--i-deg", aa.i_deg, "Inclination in degrees")->check(CLI::Range(0.0, 180.0));
  avg->add_option("--argp-deg", aa.argp_deg, "Argument of perigee in degrees");
  avg->add_option("--nodes", aa.nodes, "Fixed node count (>= 16); default doubles until converged")
      ->check(CLI::Range(16, 1 << 20));
  detail::add_common(avg, ac, true);

  auto* terms = app.add_subcommand("terms", "Dump the term registry");
  terms->add_option("--family", ta.family, "Filter by family")
      ->check(CLI::IsMember({"BROUWER", "PARALLAX", "QUARTIC", "NEUTRAL", "PERIGEE", "MAIN"}));
  terms->add_option("--order", ta.order, "Filter by order");
  detail::add_common(terms, tc, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    out << sub->help();
    return exit_pass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_pass;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return exit_pass;
  } catch (const CLI::ParseError& e) {
    err << "radint: " << e.what() << '\n';
    return exit_usage;
  }

  try {
    if (*verify) return detail::cmd_verify(va, vc, out);
    if (*propagate) return detail::cmd_propagate(pa, pc, out, err);
    if (*cmp) return detail::cmd_compare(ca, cc, out, err);
    if (*avg) return detail::cmd_average(aa, ac, out);
    if (*terms) return detail::cmd_terms(ta, tc, out);
  } catch (const input_error& e) {
    err << "radint: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    err << "radint: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::logic_error& e) {
    // domain errors and unknown term names: the request itself is invalid
    err << "radint: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "radint: " << e.what() << '\n';
    return exit_failure;
  }
  return exit_usage;
}

}  // namespace radint
