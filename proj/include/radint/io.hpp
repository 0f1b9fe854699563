#pragma once

// State files, trajectory CSV and JSON helpers.
//
// A state file is a JSON object with exactly one chart key:
//   {"delaunay":  {"ell", "g", "h", "L", "G", "H"}}
//   {"keplerian": {"a", "e", "i_deg", "raan_deg", "argp_deg", "M_deg"}}
//   {"cartesian": {"position": [x, y, z], "velocity": [vx, vy, vz]}}
// An optional "params" object overrides mu, re, c20 and epsilon.

#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "radint/flows.hpp"

namespace radint {

/// Malformed input, reported with a location ("line 3, column 7" or a field path).
class input_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct StateFile {
  Chart chart = Chart::delaunay;
  bool keplerian = false;  // the file used the keplerian key (stored as Delaunay)
  DelaunayState<double> delaunay;
  CartesianState<double> cartesian;
  ModelParams<double> params;
};

namespace detail {

inline std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

inline double number_field(const nlohmann::json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) throw input_error("field '" + path + "." + key + "' is missing");
  const auto& v = obj.at(key);
  if (!v.is_number()) throw input_error("field '" + path + "." + key + "' must be a number");
  return v.get<double>();
}

inline std::array<double, 3> vector_field(const nlohmann::json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) throw input_error("field '" + path + "." + key + "' is missing");
  const auto& v = obj.at(key);
  if (!v.is_array() || v.size() != 3) throw input_error("field '" + path + "." + key + "' must be an array of 3 numbers");
  std::array<double, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!v[i].is_number())
      throw input_error("field '" + path + "." + key + "[" + std::to_string(i) + "]' must be a number");
    out[i] = v[i].get<double>();
  }
  return out;
}

}  // namespace detail

inline StateFile parse_state_json(const std::string& text, const ModelParams<double>& defaults = {}) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    throw input_error("malformed JSON at " + detail::line_column(text, ex.byte > 0 ? ex.byte - 1 : 0) + ": " +
                      ex.what());
  }
  if (!doc.is_object()) throw input_error("state file must be a JSON object");

  StateFile out;
  out.params = defaults;
  if (doc.contains("params")) {
    const auto& p = doc.at("params");
    if (!p.is_object()) throw input_error("field 'params' must be an object");
    if (p.contains("mu")) out.params.mu = detail::number_field(p, "params", "mu");
    if (p.contains("re")) out.params.re = detail::number_field(p, "params", "re");
    if (p.contains("c20")) out.params.c20 = detail::number_field(p, "params", "c20");
    if (p.contains("epsilon")) out.params.epsilon = detail::number_field(p, "params", "epsilon");
  }
  try {
    out.params.validate();
  } catch (const std::exception& ex) {
    throw input_error(std::string("field 'params': ") + ex.what());
  }

  int charts = 0;
  for (const char* key : {"delaunay", "keplerian", "cartesian"}) charts += doc.contains(key) ? 1 : 0;
  if (charts != 1) throw input_error("state file needs exactly one of 'delaunay', 'keplerian', 'cartesian'");

  try {
    if (doc.contains("delaunay")) {
      const auto& d = doc.at("delaunay");
      if (!d.is_object()) throw input_error("field 'delaunay' must be an object");
      out.chart = Chart::delaunay;
      out.delaunay = {detail::number_field(d, "delaunay", "ell"), detail::number_field(d, "delaunay", "g"),
                      detail::number_field(d, "delaunay", "h"),   detail::number_field(d, "delaunay", "L"),
                      detail::number_field(d, "delaunay", "G"),   detail::number_field(d, "delaunay", "H")};
      out.delaunay.validate();
      out.cartesian = delaunay_to_cartesian(out.delaunay, out.params);
    } else if (doc.contains("keplerian")) {
      const auto& k = doc.at("keplerian");
      if (!k.is_object()) throw input_error("field 'keplerian' must be an object");
      const double deg = pi_v<double> / 180;
      const KeplerianElements<double> el{detail::number_field(k, "keplerian", "a"),
                                         detail::number_field(k, "keplerian", "e"),
                                         detail::number_field(k, "keplerian", "i_deg") * deg,
                                         detail::number_field(k, "keplerian", "raan_deg") * deg,
                                         detail::number_field(k, "keplerian", "argp_deg") * deg,
                                         detail::number_field(k, "keplerian", "M_deg") * deg};
      if (!(el.a > 0)) throw input_error("field 'keplerian.a' must be positive");
      if (!(el.e >= 0 && el.e < 1)) throw input_error("field 'keplerian.e' must lie in [0, 1)");
      out.chart = Chart::delaunay;
      out.keplerian = true;
      out.delaunay = keplerian_to_delaunay(el, out.params);
      out.cartesian = delaunay_to_cartesian(out.delaunay, out.params);
    } else {
      const auto& c = doc.at("cartesian");
      if (!c.is_object()) throw input_error("field 'cartesian' must be an object");
      out.chart = Chart::cartesian;
      out.cartesian = {detail::vector_field(c, "cartesian", "position"), detail::vector_field(c, "cartesian", "velocity")};
      out.cartesian.validate();
      out.delaunay = cartesian_to_delaunay(out.cartesian, out.params);
    }
  } catch (const input_error&) {
    throw;
  } catch (const std::exception& ex) {
    throw input_error(std::string("invalid state: ") + ex.what());
  }
  return out;
}

inline StateFile read_state_file(const std::string& path, const ModelParams<double>& defaults = {}) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open state file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_state_json(buffer.str(), defaults);
  } catch (const input_error& ex) {
    throw input_error(path + ": " + ex.what());
  }
}

/// Trajectory as CSV with header t,x,y,z,vx,vy,vz,H,Theta,N (polar-nodal
/// samples are converted to Cartesian).
template <class Real>
void write_trajectory_csv(std::ostream& out, const Trajectory<Real>& traj) {
  out << "t,x,y,z,vx,vy,vz,H,Theta,N\n";
  out << std::setprecision(17);
  for (const auto& s : traj.samples) {
    Phase<Real> y = s.state;
    if (traj.chart == Chart::polar_nodal) y = polar_nodal_to_cartesian(PolarNodalState<Real>::from_phase(y)).phase();
    out << static_cast<double>(s.t);
    for (Real v : y) out << ',' << static_cast<double>(v);
    out << ',' << static_cast<double>(s.energy) << ',' << static_cast<double>(s.Theta) << ','
        << static_cast<double>(s.N) << '\n';
  }
}

inline nlohmann::ordered_json to_json(const DelaunayState<double>& d) {
  return {{"ell", d.ell}, {"g", d.g}, {"h", d.h}, {"L", d.L}, {"G", d.G}, {"H", d.H}};
}

inline nlohmann::ordered_json to_json(const KeplerianElements<double>& k) {
  const double deg = 180 / pi_v<double>;
  return {{"a", k.a},
          {"e", k.e},
          {"i_deg", k.i * deg},
          {"raan_deg", k.raan * deg},
          {"argp_deg", k.argp * deg},
          {"M_deg", k.mean_anomaly * deg}};
}

inline nlohmann::ordered_json to_json(const ModelParams<double>& p) {
  return {{"mu", p.mu}, {"re", p.re}, {"c20", p.c20}, {"epsilon", p.epsilon}, {"critical_band", p.critical_band}};
}

/// JSON has no NaN; non-finite values are written as null.
inline nlohmann::ordered_json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

inline nlohmann::ordered_json to_json(const ComparisonReport& r) {
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const auto& c : r.cells)
    cells.push_back({{"order", c.order},
                     {"c20", c.c20},
                     {"rms_position_error", finite_or_null(c.rms_position_error)},
                     {"max_position_error", finite_or_null(c.max_position_error)},
                     {"roundtrip_error", finite_or_null(c.roundtrip_error)},
                     {"status", c.status}});
  nlohmann::ordered_json fits = nlohmann::ordered_json::array();
  auto fit_json = [](const LogFit& f) {
    return nlohmann::ordered_json{{"exponent", finite_or_null(f.exponent)},
                                  {"intercept", finite_or_null(f.intercept)},
                                  {"residual", finite_or_null(f.residual)},
                                  {"points", f.points}};
  };
  for (const auto& f : r.fits) {
    nlohmann::ordered_json row = {{"order", f.order}, {"metric", "max_position_error"}};
    row.update(fit_json(f.position));
    row["roundtrip"] = fit_json(f.roundtrip);
    fits.push_back(row);
  }
  return {{"rms_position_error", r.rms_position_error},
          {"max_position_error", r.max_position_error},
          {"cells", cells},
          {"fits", fits},
          {"metadata", {{"orbit", to_json(r.orbit)}, {"orders", r.orders}, {"c20_list", r.c20_list}, {"t_span", r.t_span}}}};
}

}  // namespace radint
