#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "orlicz/rng.hpp"
#include "orlicz/young.hpp"

using namespace orlicz;
using Catch::Approx;

namespace {

// Independent conjugate oracle: dense grid search of sup_x (x y - psi(x)).
double conjugate_grid_oracle(const YoungFunction& psi, double y, double x_max) {
  double best = 0.0;
  const int n = 400000;
  for (int i = 1; i <= n; ++i) {
    const double x = x_max * i / n;
    best = std::max(best, x * y - psi.eval(x));
  }
  return best;
}

// sup_y (x y - g(y)) for concave y -> x y - g(y), by ternary search.
template <class G>
double legendre_of(G g, double x, double y_hi) {
  double lo = 0.0, hi = y_hi;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (x * m1 - g(m1) < x * m2 - g(m2))
      lo = m1;
    else
      hi = m2;
  }
  const double y = 0.5 * (lo + hi);
  return x * y - g(y);
}

}  // namespace

TEST_CASE("eval matches the per-family formulas", "[young]") {
  CHECK(YoungFunction::power(2).eval(3.0) == 9.0);
  CHECK(YoungFunction::exp_square_minus_one().eval(1.0) == Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
  CHECK(YoungFunction::scaled_power(2, 0.5).eval(4.0) == Approx(8.0));
  CHECK(YoungFunction::power_log().eval(1.0) == Approx(std::log(2.0)));

  const std::vector<YoungFunction> all = {
      YoungFunction::power(1),
      YoungFunction::power(2.5),
      YoungFunction::scaled_power(3, 0.1),
      YoungFunction::power_log(),
      YoungFunction::exp_minus_one(),
      YoungFunction::exp_square_minus_one(),
      YoungFunction::piecewise({{0.0, 0.5}, {1.0, 2.0}, {3.0, 5.0}}),
  };
  for (const auto& psi : all) CHECK(psi.eval(0.0) == 0.0);
}

TEST_CASE("eval is monotone on random pairs", "[young]") {
  const std::vector<YoungFunction> all = {
      YoungFunction::power(1.5), YoungFunction::power_log(), YoungFunction::exp_minus_one(),
      YoungFunction::piecewise({{0.0, 0.0}, {1.0, 1.0}, {2.0, 4.0}})};
  for (const auto& psi : all) {
    for (int i = 0; i < 200; ++i) {
      double a = 20.0 * rng::uniform01(42, 1, 2 * i);
      double b = 20.0 * rng::uniform01(42, 1, 2 * i + 1);
      if (a > b) std::swap(a, b);
      CHECK(psi.eval(a) <= psi.eval(b) + 1e-15);
    }
  }
}

TEST_CASE("derivative formulas and right-continuity", "[young]") {
  CHECK(YoungFunction::power(2).derivative(3.0) == Approx(6.0));
  CHECK(YoungFunction::exp_minus_one().derivative(1.0) == Approx(std::exp(1.0)));
  const auto pw = YoungFunction::piecewise({{0.0, 0.5}, {1.0, 2.0}});
  CHECK(pw.derivative(0.5) == 0.5);
  CHECK(pw.derivative(1.0) == 2.0);  // slope of the segment starting at the breakpoint
  CHECK(pw.derivative(7.0) == 2.0);
}

TEST_CASE("saturation is an error, not infinity", "[young]") {
  CHECK_THROWS_AS(YoungFunction::exp_minus_one().eval(800.0), saturation_error);
  CHECK_THROWS_AS(YoungFunction::exp_square_minus_one().eval(27.0), saturation_error);
  try {
    YoungFunction::exp_square_minus_one().eval(27.0);
  } catch (const saturation_error& e) {
    CHECK(e.threshold() == Approx(26.5));
    CHECK(e.arg() == Approx(27.0));
  }
  // configurable threshold
  CHECK_THROWS_AS(YoungFunction::power(2).with_saturation(5.0).eval(6.0), saturation_error);
  CHECK(YoungFunction::exp_minus_one().eval(700.0) > 1e300);
}

TEST_CASE("conjugate matches the grid-search oracle and closed forms", "[young]") {
  // oracle first: sup_x (2x - x^2) on a dense grid = 1.0 at x = 1
  const double oracle = conjugate_grid_oracle(YoungFunction::power(2), 2.0, 10.0);
  CHECK(oracle == Approx(1.0).margin(1e-4));
  CHECK(YoungFunction::power(2).conjugate(2.0) == Approx(1.0).epsilon(1e-10));

  // x^2/2 is self-conjugate
  CHECK(YoungFunction::scaled_power(2, 0.5).conjugate(3.0) == Approx(4.5).epsilon(1e-10));

  const std::vector<YoungFunction> all = {
      YoungFunction::power(2),       YoungFunction::power(1.5),
      YoungFunction::power_log(),    YoungFunction::exp_minus_one(),
      YoungFunction::exp_square_minus_one(),
      YoungFunction::piecewise({{0.0, 0.5}, {1.0, 2.0}})};
  for (const auto& psi : all) CHECK(psi.conjugate(0.0) == 0.0);

  // numeric-path conjugates vs the oracle
  for (const double y : {0.3, 1.0, 2.7}) {
    CHECK(YoungFunction::power_log().conjugate(y) ==
          Approx(conjugate_grid_oracle(YoungFunction::power_log(), y, 40.0)).margin(1e-4));
    CHECK(YoungFunction::exp_square_minus_one().conjugate(y) ==
          Approx(conjugate_grid_oracle(YoungFunction::exp_square_minus_one(), y, 5.0)).margin(1e-4));
  }
}

TEST_CASE("conjugate is infinite past the derivative sup", "[young]") {
  const auto pw = YoungFunction::piecewise({{0.0, 0.5}, {1.0, 2.0}});
  CHECK_THROWS_AS(pw.conjugate(2.5), unbounded_conjugate_error);
  CHECK(pw.conjugate(2.0) == Approx(1.0 * 2.0 - pw.eval(1.0)));  // finite at the sup
  CHECK_THROWS_AS(YoungFunction::power(1).conjugate(2.0), unbounded_conjugate_error);
  CHECK(YoungFunction::power(1).conjugate(0.7) == 0.0);
}

TEST_CASE("Young inequality with equality at y = psi'(x)", "[young]") {
  const std::vector<YoungFunction> all = {
      YoungFunction::power(2),    YoungFunction::power(1.5),     YoungFunction::power(3),
      YoungFunction::power_log(), YoungFunction::exp_minus_one(),
      YoungFunction::scaled_power(2.5, 0.3)};
  for (const auto& psi : all) {
    for (int i = 0; i < 60; ++i) {
      const double x = 0.05 + 5.0 * rng::uniform01(7, 3, 2 * i);
      const double y = 0.05 + 5.0 * rng::uniform01(7, 3, 2 * i + 1);
      CHECK(x * y <= psi.eval(x) + psi.conjugate(y) + 1e-9);
      const double yd = psi.derivative(x);
      CHECK(std::abs(x * yd - (psi.eval(x) + psi.conjugate(yd))) < 1e-8);
    }
  }
}

TEST_CASE("conjugate is convex and nondecreasing", "[young]") {
  const std::vector<YoungFunction> all = {YoungFunction::power(1.7), YoungFunction::power_log(),
                                          YoungFunction::exp_minus_one()};
  for (const auto& psi : all) {
    const auto grid = log_grid(1e-2, 20.0, 80);
    double prev = -1.0;
    for (const double y : grid) {
      const double c = psi.conjugate(y);
      CHECK(c >= prev - 1e-12);
      prev = c;
    }
    for (std::size_t i = 0; i + 2 < grid.size(); ++i) {
      const double a = grid[i], b = grid[i + 2];
      const double cm = psi.conjugate(0.5 * (a + b));
      CHECK(cm <= 0.5 * (psi.conjugate(a) + psi.conjugate(b)) + 1e-9);
    }
  }
}

TEST_CASE("biconjugation recovers scaled powers", "[young]") {
  for (const double p : {1.5, 2.0, 3.0}) {
    const auto psi = YoungFunction::scaled_power(p, 1.0 / p);
    for (double x = 0.1; x <= 10.0; x *= 1.7) {
      const double y_hi = 4.0 * psi.derivative(4.0 * x);
      const double biconj = legendre_of([&](double y) { return psi.conjugate(y); }, x, y_hi);
      CHECK(biconj == Approx(psi.eval(x)).epsilon(1e-6));
    }
  }
}

TEST_CASE("inverse inverts eval", "[young]") {
  CHECK(YoungFunction::power(2).inverse(1.0) == Approx(1.0));
  CHECK(YoungFunction::exp_minus_one().inverse(1.0) == Approx(std::log(2.0)).epsilon(1e-12));
  const auto psi = YoungFunction::power_log();
  for (const double t : {0.01, 1.0, 55.0}) CHECK(psi.eval(psi.inverse(t)) == Approx(t).epsilon(1e-10));
}

TEST_CASE("verify_young_conditions classifies the families", "[young]") {
  CHECK(verify_young_conditions(YoungFunction::power(2)).satisfied);
  CHECK(verify_young_conditions(YoungFunction::power_log()).satisfied);
  CHECK(verify_young_conditions(YoungFunction::exp_minus_one()).satisfied);
  CHECK_FALSE(verify_young_conditions(YoungFunction::power(1)).satisfied);
  // linear growth cap: psi(x)/x bounded by the final slope
  CHECK_FALSE(verify_young_conditions(YoungFunction::piecewise({{0.0, 0.5}, {1.0, 2.0}})).satisfied);
  const auto rep = verify_young_conditions(YoungFunction::power(2));
  CHECK(rep.hypothesis == GrowthHypothesis::young_conditions);
  CHECK(rep.worst_ratio_low == Approx(1e-6));
}

TEST_CASE("check_hypothesis ratios and caps", "[young]") {
  const auto lbsa = check_hypothesis(YoungFunction::power(2),
                                     GrowthHypothesis::linear_below_square_above,
                                     log_grid(1.0, 1e3, 128));
  CHECK(lbsa.satisfied);
  CHECK(lbsa.worst_ratio_high == Approx(1.0));
  CHECK(lbsa.worst_ratio_low == Approx(1.0));

  const auto d2 = check_hypothesis(YoungFunction::power(2), GrowthHypothesis::delta2);
  CHECK(d2.satisfied);
  CHECK(d2.worst_ratio_high == Approx(4.0));

  const auto expsq = check_hypothesis(YoungFunction::exp_square_minus_one(),
                                      GrowthHypothesis::linear_below_square_above,
                                      log_grid(1.0, 10.0, 64));
  CHECK_FALSE(expsq.satisfied);
  CHECK(expsq.worst_ratio_high > 1e3);

  // e^x - 1 is not delta2
  CHECK_FALSE(check_hypothesis(YoungFunction::exp_minus_one(), GrowthHypothesis::delta2).satisfied);
  // but sits inside x << psi << e^x
  CHECK(check_hypothesis(YoungFunction::exp_minus_one(), GrowthHypothesis::linear_below_exp_above)
            .satisfied);
  // power(1.2) lies inside x << psi << x^2
  CHECK(check_hypothesis(YoungFunction::power(1.2), GrowthHypothesis::linear_below_square_above)
            .satisfied);

  // report invariant for the theorem hypotheses
  for (const auto& rep : {lbsa, d2, expsq}) {
    const bool finite_and_capped = std::isfinite(rep.worst_ratio_low) &&
                                   std::isfinite(rep.worst_ratio_high) &&
                                   rep.worst_ratio_low <= 1e3 && rep.worst_ratio_high <= 1e3;
    CHECK(rep.satisfied == finite_and_capped);
  }
}

TEST_CASE("constructor validation", "[young]") {
  CHECK_THROWS_AS(YoungFunction::power(0.9), std::invalid_argument);
  CHECK_THROWS_AS(YoungFunction::scaled_power(2, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(YoungFunction::piecewise({}), std::invalid_argument);
  CHECK_THROWS_AS(YoungFunction::piecewise({{0.5, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(YoungFunction::piecewise({{0.0, 2.0}, {1.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(YoungFunction::piecewise({{0.0, -0.5}, {1.0, 1.0}}), std::invalid_argument);
}
