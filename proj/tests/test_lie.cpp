#include <catch_amalgamated.hpp>

#include "radint/lie.hpp"
#include "support.hpp"

using namespace radint;
using Catch::Approx;

namespace {

const ModelParams<double> P;

template <class Real = double>
ScalarField<Real> field(std::function<Real(const Phase<Real>&)> f, int depth = 0) {
  return {"f", Chart::delaunay, std::move(f), depth};
}

DelaunayState<long double> widen(const DelaunayState<double>& d) {
  return {d.ell, d.g, d.h, d.L, d.G, d.H};
}

double max_state_diff(const DelaunayState<long double>& a, const DelaunayState<long double>& b) {
  double worst = 0;
  const auto x = a.phase(), y = b.phase();
  for (int i = 0; i < 6; ++i) worst = std::max(worst, static_cast<double>(std::abs(x[i] - y[i])));
  return worst;
}

}  // namespace

TEST_CASE("Poisson bracket of coordinates and simple products", "[bracket]") {
  const Phase<double> x{0.4, 1.1, -0.3, 1.2, 0.9, 0.5};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const auto qi = field<double>([i](const Phase<double>& y) { return y[i]; });
      const auto pj = field<double>([j](const Phase<double>& y) { return y[j + 3]; });
      CHECK(poisson_bracket(qi, pj, x, {}) == Approx(i == j ? 1.0 : 0.0).margin(1e-10));
    }

  // {q1 p2, q2} = -q1 (hand computation)
  const auto F = field<double>([](const Phase<double>& y) { return y[0] * y[4]; });
  const auto q2 = field<double>([](const Phase<double>& y) { return y[1]; });
  CHECK(poisson_bracket(F, q2, x, {}) == Approx(-x[0]).epsilon(1e-9));
  CHECK(poisson_bracket(F, F, x, {}) == Approx(0).margin(1e-12));
  CHECK(poisson_bracket(ScalarField<double>::zero(), F, x, {}) == 0.0);
}

TEST_CASE("Bracket is bilinear and antisymmetric on model terms", "[bracket][property]") {
  const auto H = term_field<double>("H10", P);
  const auto W = term_field<double>("W1_NEUTRAL", P);
  const auto A = term_field<double>("A1_LONG_PERIOD_FREE", P);
  double worst = 0;
  for (const auto& d : testing::random_states(41, 100)) {
    const auto x = d.phase();
    const double s = term_scale(2, geometry(d, P), P);
    const double hw = poisson_bracket(H, W, x, {});
    worst = std::max(worst, std::abs(hw + poisson_bracket(W, H, x, {})) / s);
    const double lhs = poisson_bracket(H, sum_field(scaled_field(2.5, W), A), x, {});
    worst = std::max(worst, std::abs(lhs - 2.5 * hw - poisson_bracket(H, A, x, {})) / s);
  }
  // linearity holds up to difference roundoff, eps / h ~ 1e-10 of each gradient
  CHECK(worst < 1e-8);
}

TEST_CASE("Bracket is stable under step halving", "[bracket][property]") {
  const auto H = term_field<double>("H01_NEUTRAL", P);
  const auto W = term_field<double>("W1_NEUTRAL", P);
  BracketConfig<double> half;
  half.base_step = 5e-7;
  double worst = 0;
  for (const auto& d : testing::random_states(42, 200)) {
    const double s = term_scale(2, geometry(d, P), P);
    worst = std::max(worst, std::abs(poisson_bracket(H, W, d.phase(), {}) - poisson_bracket(H, W, d.phase(), half)) / s);
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("L0 of constant, sin l and against the bracket with H00", "[L0]") {
  const auto d = testing::state(1.3, 0.2, 40);
  const double n = P.mu * P.mu / (d.L * d.L * d.L);
  CHECK(lie_derivative_L0(field<double>([](const Phase<double>&) { return 3.0; }), d.phase(), P) == Approx(0).margin(1e-12));
  CHECK(lie_derivative_L0(field<double>([](const Phase<double>& y) { return std::sin(y[0]); }), d.phase(), P) ==
        Approx(n * std::cos(d.ell)).epsilon(1e-10));
  CHECK(lie_derivative_L0(ScalarField<double>::zero(), d.phase(), P) == 0.0);

  const auto W = term_field<double>("W1_BROUWER", P);
  const auto H00 = term_field<double>("H00", P);
  for (const auto& s : testing::random_states(43, 50)) {
    const double scale = term_scale(1, geometry(s, P), P);
    CHECK(std::abs(lie_derivative_L0(W, s.phase(), P) - poisson_bracket(W, H00, s.phase(), {})) / scale < 1e-8);
  }
}

TEST_CASE("First-order homological equations hold", "[homological][property]") {
  double worst = 0;
  for (const auto& d : testing::random_states(44, 300)) {
    const double s = term_scale(1, geometry(d, P), P);
    for (Family f : {Family::brouwer, Family::parallax, Family::quartic, Family::neutral})
      worst = std::max(worst, std::abs(homological_residual(f, 1, d.phase(), P)) / s);
  }
  CHECK(worst < 1e-7);

  const auto kepler = P.with_c20(0.0);
  const auto x = testing::state(1.3, 0.2, 40).phase();
  CHECK(homological_residual(Family::neutral, 1, x, kepler) == 0.0);
  CHECK_THROWS_AS(homological_residual(Family::brouwer, 2, x, P), unsupported_term_error);
  CHECK_THROWS_AS(homological_residual(Family::neutral, 3, x, P), unsupported_term_error);
}

TEST_CASE("Second-order neutral and perigee homological equations hold", "[homological][property]") {
  double worst_n = 0, worst_p = 0;
  for (const auto& d : testing::random_states(45, 200, true)) {
    const auto o = geometry(d, P);
    const double s = term_scale(2, o, P);
    worst_n = std::max(worst_n, std::abs(homological_residual(Family::neutral, 2, d.phase(), P)) / s);
    worst_p = std::max(worst_p, std::abs(homological_residual(Family::perigee, 2, d.phase(), P)) * std::abs(4 - 5 * o.s * o.s) / s);
  }
  CHECK(worst_n < 1e-7);
  CHECK(worst_p < 1e-7);
}

TEST_CASE("Deprit triangle reproduces the first-order Hamiltonian", "[deprit]") {
  // H01 = H10 + {H00; W1}
  TermTable<double> table{{term_field<double>("H00", P), term_field<double>("H10", P)},
                          {term_field<double>("W1_PARALLAX", P)}};
  const auto H01 = term_field<double>("H01_PARALLAX", P);
  for (const auto& d : testing::random_states(46, 50)) {
    const double s = term_scale(1, geometry(d, P), P);
    CHECK(std::abs(deprit_triangle(table, 0, 1, d.phase()) - H01(d.phase())) / s < 1e-7);
    CHECK(deprit_triangle(table, 1, 0, d.phase()) == term_field<double>("H10", P)(d.phase()));
  }
}

TEST_CASE("Deprit triangle edge cases", "[deprit]") {
  const auto x = testing::state(1.3, 0.2, 40).phase();
  const auto H00 = term_field<double>("H00", P);
  TermTable<double> zero_w{{H00, term_field<double>("H10", P)}, {ScalarField<double>::zero()}};
  CHECK(deprit_triangle(zero_w, 0, 1, x) == term_field<double>("H10", P)(x));
  CHECK(deprit_triangle(zero_w, 0, 0, x) == H00(x));

  TermTable<double> strict{{H00}, {term_field<double>("W1_NEUTRAL", P)}, false};
  CHECK_THROWS_AS(deprit_triangle(strict, 0, 1, x), missing_term_error);
  TermTable<double> short_w{{H00, term_field<double>("H10", P)}, {term_field<double>("W1_NEUTRAL", P)}};
  CHECK_THROWS_AS(deprit_triangle(short_w, 0, 2, x), missing_term_error);
  CHECK_THROWS_AS(deprit_triangle(short_w, -1, 0, x), std::invalid_argument);
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(4, 0) == 1);
}

TEST_CASE("First-order correction to the inclination", "[deprit][inclination]") {
  for (Family f : {Family::brouwer, Family::parallax, Family::quartic}) {
    TermTable<double> table{{inclination_field<double>()},
                            {generator_field<double>(GeneratorChoice::defaults(f, 1), 1, P)}};
    for (const auto& d : testing::random_states(47, 100)) {
      const auto o = geometry(d, P);
      const double scale = std::abs(P.c20) * P.re * P.re / (o.p * o.p);
      CHECK(std::abs(deprit_triangle(table, 0, 1, d.phase()) - inclination_correction_I01(o, P)) / scale < 1e-8);
    }
  }
}

TEST_CASE("Transform specification validation", "[transform]") {
  CHECK_THROWS_AS((TransformSpec{{}, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((TransformSpec{{Family::neutral}, 3}.validate()), unsupported_term_error);
  CHECK_THROWS_AS((TransformSpec{{Family::brouwer}, 2}.validate()), unsupported_term_error);
  CHECK_THROWS_AS((TransformSpec{{Family::perigee}, 1}.validate()), unsupported_term_error);
  CHECK_NOTHROW((TransformSpec{{Family::neutral, Family::perigee}, 2}.validate()));
}

TEST_CASE("Transform is the identity without the perturbation", "[transform]") {
  const auto kepler = P.with_c20(0.0);
  const auto d = testing::state(1.3, 0.2, 40);
  for (Direction dir : {Direction::mean_to_osculating, Direction::osculating_to_mean}) {
    const TransformSpec spec{{Family::neutral}, 2, dir};
    const auto out = transform_state(spec, d, kepler);
    for (int i = 0; i < 6; ++i) CHECK(out.phase()[i] == d.phase()[i]);
  }
}

TEST_CASE("Fixed-point inverse undoes the forward map", "[transform]") {
  const TransformSpec forward{{Family::neutral}, 1, Direction::mean_to_osculating};
  TransformSpec inverse = forward;
  inverse.direction = Direction::osculating_to_mean;
  for (const auto& d : testing::random_states(48, 5)) {
    const auto back = transform_state(forward, transform_state(inverse, d, P), P);
    for (int i = 0; i < 6; ++i) CHECK(std::abs(back.phase()[i] - d.phase()[i]) < 1e-10);
  }
}

TEST_CASE("Series round trip error scales as eps^(k+1)", "[transform][scaling]") {
  const auto d0 = widen(testing::state(1.3, 0.1, 50));
  for (int order : {1, 2}) {
    const TransformSpec fwd{{Family::neutral}, order, Direction::mean_to_osculating, Inversion::series};
    TransformSpec inv = fwd;
    inv.direction = Direction::osculating_to_mean;
    std::vector<double> c20s{1e-3, 5e-4, 2.5e-4}, errors;
    for (double c : c20s) {
      const auto p = P.cast<long double>().with_c20(static_cast<long double>(-c));
      errors.push_back(max_state_diff(transform_state(inv, transform_state(fwd, d0, p), p), d0));
    }
    CHECK(testing::log_slope(c20s, errors) == Approx(order + 1).margin(0.15));
  }
}

TEST_CASE("First-order transform is canonical to O(eps^2)", "[transform][scaling]") {
  const auto x0 = widen(testing::state(1.3, 0.1, 50)).phase();
  std::vector<double> c20s{1e-3, 5e-4, 2.5e-4}, defects;
  for (double c : c20s) {
    const auto p = P.cast<long double>().with_c20(static_cast<long double>(-c));
    const TransformSpec spec{{Family::neutral}, 1};
    auto component = [&](int i) {
      return ScalarField<long double>{"x" + std::to_string(i), Chart::delaunay,
                                      [p, spec, i](const Phase<long double>& y) {
                                        return transform_state(spec, DelaunayState<long double>::from_phase(y), p).phase()[i];
                                      },
                                      1};
    };
    // {l', L'} = 1 and {g', L'} = 0 for a canonical map
    const long double a = poisson_bracket(component(0), component(3), x0, {});
    const long double b = poisson_bracket(component(1), component(3), x0, {});
    defects.push_back(static_cast<double>(std::max(std::abs(a - 1), std::abs(b))));
  }
  CHECK(testing::log_slope(c20s, defects) >= 1.8);
}
