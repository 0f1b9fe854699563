#pragma once

// Registry of every closed-form term, queryable by family and order and
// instantiable as a scalar field over the Delaunay (or polar-nodal) chart.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "radint/generators.hpp"

namespace radint {

enum class TermKind {
  hamiltonian,      // H_{m,0}: terms of the original Hamiltonian
  known,            // H~_{0,m}: known terms of the homological equation
  new_hamiltonian,  // H_{0,m} / K_{0,m}
  generator,        // W_m
  arbitrary,        // A_m
  auxiliary         // Q, chi, <chi>, I01
};

inline std::string to_string(TermKind kind) {
  switch (kind) {
    case TermKind::hamiltonian: return "hamiltonian";
    case TermKind::known: return "known";
    case TermKind::new_hamiltonian: return "new_hamiltonian";
    case TermKind::generator: return "generator";
    case TermKind::arbitrary: return "arbitrary";
    case TermKind::auxiliary: return "auxiliary";
  }
  return "unknown";
}

struct TermInfo {
  std::string name;
  std::optional<Family> family;  // empty for terms of the main problem
  int order = 0;
  TermKind kind = TermKind::hamiltonian;
  Chart chart = Chart::delaunay;
  std::string description;
};

inline const std::vector<TermInfo>& term_registry() {
  using F = Family;
  using K = TermKind;
  static const std::vector<TermInfo> terms = {
      {"H00", std::nullopt, 0, K::hamiltonian, Chart::delaunay, "Kepler Hamiltonian -mu^2/(2L^2)"},
      {"H10", std::nullopt, 1, K::hamiltonian, Chart::delaunay, "J2 disturbing function"},
      {"Htilde01", std::nullopt, 1, K::known, Chart::delaunay, "first-order known terms (= H10)"},
      {"H01_BROUWER", F::brouwer, 1, K::new_hamiltonian, Chart::delaunay, "mean-anomaly average of H10"},
      {"H01_PARALLAX", F::parallax, 1, K::new_hamiltonian, Chart::delaunay, "elimination of the parallax"},
      {"H01_QUARTIC", F::quartic, 1, K::new_hamiltonian, Chart::delaunay, "inverse radius raised to the fourth power"},
      {"H01_NEUTRAL", F::neutral, 1, K::new_hamiltonian, Chart::delaunay, "inverse radius kept at the third power"},
      {"W1_BROUWER", F::brouwer, 1, K::generator, Chart::delaunay, "Brouwer generator with the equation of the center"},
      {"W1_PARALLAX", F::parallax, 1, K::generator, Chart::delaunay, "parallax-elimination generator"},
      {"W1_QUARTIC", F::quartic, 1, K::generator, Chart::delaunay, "quartic-choice generator"},
      {"W1_NEUTRAL", F::neutral, 1, K::generator, Chart::delaunay, "neutral generator"},
      {"W1_NEUTRAL_POLAR", F::neutral, 1, K::generator, Chart::polar_nodal, "neutral W1 in kappa, sigma, theta"},
      {"A1_LONG_PERIOD_FREE", F::neutral, 1, K::arbitrary, Chart::delaunay, "A1 removing the average of W1"},
      {"I01", std::nullopt, 1, K::auxiliary, Chart::delaunay, "first-order inclination correction"},
      {"H02_PARALLAX", F::parallax, 2, K::new_hamiltonian, Chart::delaunay, "second order after the parallax"},
      {"H02_NEUTRAL", F::neutral, 2, K::new_hamiltonian, Chart::delaunay, "(p/r) Q"},
      {"Q_NEUTRAL", F::neutral, 2, K::auxiliary, Chart::delaunay, "terms removed from H~02"},
      {"Htilde02_NEUTRAL", F::neutral, 2, K::known, Chart::delaunay, "second-order known terms, A1 = 0"},
      {"W2_NEUTRAL", F::neutral, 2, K::generator, Chart::delaunay, "second-order neutral generator"},
      {"W2_NEUTRAL_POLAR", F::neutral, 2, K::generator, Chart::polar_nodal, "neutral W2 in kappa, sigma, theta"},
      {"CHI_BROUWER", F::brouwer, 2, K::auxiliary, Chart::delaunay, "equation-of-the-center coupling term"},
      {"CHI_AVERAGE_BROUWER", F::brouwer, 2, K::auxiliary, Chart::delaunay, "closed-form average of chi"},
      {"H03_NEUTRAL", F::neutral, 3, K::new_hamiltonian, Chart::delaunay, "third-order neutral Hamiltonian"},
      {"K01_PERIGEE", F::perigee, 1, K::new_hamiltonian, Chart::delaunay, "unchanged first order"},
      {"A1_PERIGEE", F::perigee, 1, K::arbitrary, Chart::delaunay, "W1 of the perigee elimination"},
      {"K02_PERIGEE", F::perigee, 2, K::new_hamiltonian, Chart::delaunay, "second order, perigee removed"},
      {"W2_PERIGEE", F::perigee, 2, K::generator, Chart::delaunay, "second-order generator including A2"},
      {"A2_PERIGEE", F::perigee, 2, K::arbitrary, Chart::delaunay, "A2 fixed at the third order"},
      {"K03_PERIGEE", F::perigee, 3, K::new_hamiltonian, Chart::delaunay, "third order, perigee removed"},
  };
  return terms;
}

inline std::vector<TermInfo> find_terms(std::optional<Family> family, std::optional<int> order) {
  std::vector<TermInfo> out;
  for (const auto& t : term_registry()) {
    if (family && t.family != family) continue;
    if (order && t.order != *order) continue;
    out.push_back(t);
  }
  return out;
}

inline const TermInfo& find_term(const std::string& name) {
  for (const auto& t : term_registry())
    if (t.name == name) return t;
  throw missing_term_error("term registry: no term named '" + name + "'");
}

inline nlohmann::ordered_json registry_json(const std::vector<TermInfo>& terms) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& t : terms) {
    out.push_back({{"name", t.name},
                   {"family", t.family ? to_string(*t.family) : std::string("MAIN")},
                   {"order", t.order},
                   {"kind", to_string(t.kind)},
                   {"chart", to_string(t.chart)},
                   {"description", t.description}});
  }
  return out;
}

namespace detail {

template <class Real, class Body>
ScalarField<Real> delaunay_field(std::string name, const ModelParams<Real>& params, Body body) {
  return {std::move(name), Chart::delaunay, [params, body](const Phase<Real>& x) {
            return body(geometry(DelaunayState<Real>::from_phase(x), params), params);
          }};
}

}  // namespace detail

/// Generator W_order of a GeneratorChoice as a Delaunay field.
template <class Real>
ScalarField<Real> generator_field(GeneratorChoice choice, int order, const ModelParams<Real>& params) {
  choice.order = order;
  choice.validate();
  const std::string name = "W" + std::to_string(order) + "_" + to_string(choice.family);
  if (order == 1)
    return detail::delaunay_field<Real>(name, params, [choice](const OrbitGeometry<Real>& o, const ModelParams<Real>& p) {
      return eval_W1(choice, o, p);
    });
  return detail::delaunay_field<Real>(name, params, [choice](const OrbitGeometry<Real>& o, const ModelParams<Real>& p) {
    return eval_W2(choice.family, o, p);
  });
}

/// Instantiates a registered term.  Polar-chart terms take (r, theta, nu, R, Theta, N).
template <class Real>
ScalarField<Real> term_field(const std::string& name, const ModelParams<Real>& params) {
  using G = OrbitGeometry<Real>;
  using P = ModelParams<Real>;
  const TermInfo& info = find_term(name);
  auto make = [&](auto body) { return detail::delaunay_field<Real>(name, params, body); };

  if (name == "H00")
    return make([](const G& o, const P& p) { return -p.mu * p.mu / (2 * o.L * o.L); });
  if (name == "H10" || name == "Htilde01")
    return make([](const G& o, const P& p) { return eval_Htilde01(o, p); });
  if (name.rfind("H01_", 0) == 0) {
    const Family f = *info.family;
    return make([f](const G& o, const P& p) { return eval_H01(f, o, p); });
  }
  if (name.rfind("W1_", 0) == 0 && info.chart == Chart::delaunay)
    return generator_field<Real>(GeneratorChoice::defaults(*info.family, 1), 1, params);
  if (name == "W2_NEUTRAL" || name == "W2_PERIGEE")
    return generator_field<Real>(GeneratorChoice::defaults(*info.family, 2), 2, params);
  if (name == "W1_NEUTRAL_POLAR" || name == "W2_NEUTRAL_POLAR") {
    const int order = name[1] - '0';
    return {name, Chart::polar_nodal, [params, order](const Phase<Real>& x) {
              return eval_W_polar(order, PolarNodalState<Real>::from_phase(x), params);
            }};
  }
  if (name == "A1_LONG_PERIOD_FREE") return make([](const G& o, const P& p) { return eval_A1_long_period_free(o, p); });
  if (name == "A1_PERIGEE") return make([](const G& o, const P& p) { return eval_A1_perigee(o, p); });
  if (name == "A2_PERIGEE") return make([](const G& o, const P& p) { return eval_A2_perigee(o, p); });
  if (name == "I01") return make([](const G& o, const P& p) { return inclination_correction_I01(o, p); });
  if (name == "H02_PARALLAX") return make([](const G& o, const P& p) { return eval_H02(Family::parallax, o, p); });
  if (name == "H02_NEUTRAL") return make([](const G& o, const P& p) { return eval_H02(Family::neutral, o, p); });
  if (name == "Q_NEUTRAL") return make([](const G& o, const P& p) { return eval_Q(o, p); });
  if (name == "Htilde02_NEUTRAL") return make([](const G& o, const P& p) { return eval_Htilde02_neutral(o, p); });
  if (name == "CHI_BROUWER") return make([](const G& o, const P& p) { return eval_chi(o, p); });
  if (name == "CHI_AVERAGE_BROUWER") return make([](const G& o, const P& p) { return chi_average(o, p); });
  if (name == "H03_NEUTRAL") return make([](const G& o, const P& p) { return eval_H03_neutral(o, p); });
  if (name == "K01_PERIGEE" || name == "K02_PERIGEE" || name == "K03_PERIGEE") {
    const int m = name[2] - '0';
    return make([m](const G& o, const P& p) { return eval_K0m_perigee(m, o, p); });
  }
  throw missing_term_error("term_field: no evaluator for '" + name + "'");
}

}  // namespace radint
