#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "orlicz/norms.hpp"
#include "orlicz/randseries.hpp"
#include "orlicz/rng.hpp"

using namespace orlicz;
using Catch::Approx;

TEST_CASE("rademacher_eval through exact dyadic fractions", "[randseries]") {
  CHECK(rademacher_eval(1, 0.3) == -1);  // sin(1.2 pi) < 0
  CHECK(rademacher_eval(2, 0.1) == 1);   // sin(0.8 pi) > 0
  CHECK(rademacher_eval(5, 0.0) == 0);
  CHECK(rademacher_eval(1, 0.25) == 1);
  CHECK(rademacher_eval(1, 0.75) == -1);
  CHECK_THROWS_AS(rademacher_eval(0, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(rademacher_eval(53, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(rademacher_eval(3, 1.0), std::invalid_argument);

  // agreement with the trigonometric definition away from dyadic points
  for (int n = 1; n <= 8; ++n) {
    for (int k = 0; k < 200; ++k) {
      const double t = (k + 0.37) / 200.0;
      const double s = std::sin(2.0 * M_PI * std::ldexp(1.0, n) * t);
      if (std::abs(s) > 1e-9) CHECK(rademacher_eval(n, t) == (s > 0 ? 1 : -1));
    }
  }
}

TEST_CASE("rademacher sign patterns are uniform on stratified offsets", "[randseries]") {
  const int n_funcs = 10;
  const int grid = 1 << 12;
  std::map<int, int> counts;
  for (int k = 0; k < grid; ++k) {
    const double t = (k + 0.5) / grid;
    int pattern = 0;
    for (int n = 1; n <= n_funcs; ++n) {
      const int r = rademacher_eval(n, t);
      REQUIRE(r != 0);
      pattern = (pattern << 1) | (r > 0 ? 1 : 0);
    }
    ++counts[pattern];
  }
  REQUIRE(counts.size() == (1u << n_funcs));
  for (const auto& [pattern, c] : counts) CHECK(c == grid / (1 << n_funcs));
}

TEST_CASE("rademacher_sum_distribution enumerates exactly", "[randseries]") {
  const auto one = rademacher_sum_distribution(std::vector<double>{1.0});
  REQUIRE(one.size() == 2);
  CHECK(one.atoms()[0].value == -1.0);
  CHECK(one.atoms()[1].value == 1.0);
  CHECK(one.atoms()[0].mass == 0.5);

  const auto two = rademacher_sum_distribution(std::vector<double>{1.0, 1.0});
  REQUIRE(two.size() == 3);
  CHECK(two.atoms()[0].value == -2.0);
  CHECK(two.atoms()[0].mass == 0.25);
  CHECK(two.atoms()[1].value == 0.0);
  CHECK(two.atoms()[1].mass == 0.5);
  CHECK(two.atoms()[2].value == 2.0);

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const auto sym = rademacher_sum_distribution(std::vector<double>{inv_sqrt2, inv_sqrt2});
  CHECK(lp_norm(1.0, sym).value == Approx(inv_sqrt2).epsilon(1e-12));

  CHECK_THROWS_AS(rademacher_sum_distribution(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(rademacher_sum_distribution(std::vector<double>(25, 0.2)), atom_budget_error);
}

TEST_CASE("exact moment identities of the enumeration", "[randseries]") {
  for (int c = 0; c < 40; ++c) {
    const int n = 1 + static_cast<int>(rng::uniform01(2, 9, c) * 16);
    std::vector<double> x(n);
    double nrm = 0.0;
    for (int i = 0; i < n; ++i) {
      x[i] = rng::normal_inv(std::max(rng::uniform01(2, 10, c * 64 + i), 0x1.0p-53));
      nrm += x[i] * x[i];
    }
    nrm = std::sqrt(nrm);
    for (double& v : x) v /= nrm;

    const auto dist = rademacher_sum_distribution(x);
    const auto& atoms = dist.atoms();
    const double mean =
        pairwise_sum(atoms.size(), [&](std::size_t i) { return atoms[i].mass * atoms[i].value; });
    const double second = pairwise_sum(
        atoms.size(), [&](std::size_t i) { return atoms[i].mass * atoms[i].value * atoms[i].value; });
    const double e_exp =
        pairwise_sum(atoms.size(), [&](std::size_t i) { return atoms[i].mass * std::exp(atoms[i].value); });
    double cosh_prod = 1.0;
    for (const double v : x) cosh_prod *= std::cosh(v);

    CHECK(std::abs(mean) < 1e-14);
    CHECK(second == Approx(1.0).epsilon(1e-12));
    CHECK(e_exp == Approx(cosh_prod).epsilon(1e-12));
  }
}

TEST_CASE("complex coefficients produce the modulus distribution", "[randseries]") {
  using cd = std::complex<double>;
  const auto dist = rademacher_sum_distribution(std::vector<cd>{{1.0, 1.0}});
  REQUIRE(dist.size() == 1);  // |±(1+i)| is constant sqrt(2)
  CHECK(dist.atoms()[0].value == Approx(std::sqrt(2.0)));
  CHECK(dist.atoms()[0].mass == 1.0);

  const auto d2 = rademacher_sum_distribution(std::vector<cd>{{1.0, 0.0}, {0.0, 1.0}});
  REQUIRE(d2.size() == 1);
  CHECK(d2.atoms()[0].value == Approx(std::sqrt(2.0)));
}

TEST_CASE("monte_carlo_matrix: support, determinism, CLT mean", "[randseries]") {
  const auto mats = monte_carlo_matrix(RvFamily::rademacher(), 1, 4, 99);
  REQUIRE(mats.size() == 1);
  REQUIRE(mats[0].size() == 4);
  for (const Atom& a : mats[0].atoms()) {
    CHECK((a.value == 1.0 || a.value == -1.0));
    CHECK(a.mass == Approx(0.25));
  }

  const auto again = monte_carlo_matrix(RvFamily::rademacher(), 1, 4, 99);
  for (std::size_t i = 0; i < 4; ++i) CHECK(again[0].atoms()[i].value == mats[0].atoms()[i].value);

  const std::size_t m = 40000;
  for (const auto& family :
       {RvFamily::rademacher(), RvFamily::uniform_centered(std::sqrt(3.0)),
        RvFamily::two_point(3.0, -1.0 / 3.0, 0.1), RvFamily::gaussian_truncated(4.0),
        RvFamily::pareto_centered(2.5, 50.0)}) {
    const auto xs = monte_carlo_matrix(family, 3, m, 12345);
    for (const auto& x : xs) {
      const double mean =
          pairwise_sum(x.size(), [&](std::size_t i) { return x.atoms()[i].mass * x.atoms()[i].value; });
      const double sigma = family.l2();
      CHECK(std::abs(mean) <= 4.0 * sigma / std::sqrt(static_cast<double>(m)));
    }
  }
}

TEST_CASE("family moments match their samples", "[randseries]") {
  const std::size_t m = 60000;
  for (const auto& family :
       {RvFamily::uniform_centered(std::sqrt(3.0)), RvFamily::two_point(3.0, -1.0 / 3.0, 0.1),
        RvFamily::gaussian_truncated(3.0), RvFamily::pareto_centered(2.5, 50.0)}) {
    const auto xs = monte_carlo_matrix(family, 1, m, 777);
    const auto& atoms = xs[0].atoms();
    const double l1 =
        pairwise_sum(atoms.size(), [&](std::size_t i) { return atoms[i].mass * std::abs(atoms[i].value); });
    const double l2sq = pairwise_sum(
        atoms.size(), [&](std::size_t i) { return atoms[i].mass * atoms[i].value * atoms[i].value; });
    CHECK(l1 == Approx(family.mean_abs()).margin(5.0 / std::sqrt(static_cast<double>(m))));
    CHECK(std::sqrt(l2sq) == Approx(family.l2()).margin(5.0 / std::sqrt(static_cast<double>(m))));
  }
  // spec'd closed form for the uniform family on (-sqrt(3), sqrt(3))
  CHECK(RvFamily::uniform_centered(std::sqrt(3.0)).l2() == Approx(1.0));
  CHECK(RvFamily::uniform_centered(std::sqrt(3.0)).mean_abs() == Approx(std::sqrt(3.0) / 2.0));
  CHECK_THROWS_AS(RvFamily::two_point(3.0, -0.5, 0.1), std::invalid_argument);
}

TEST_CASE("square_function and sum_functions", "[randseries]") {
  const auto x = monte_carlo_matrix(RvFamily::uniform_centered(1.0), 1, 16, 5)[0];
  const auto sq1 = square_function({x});
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(sq1.atoms()[i].value == Approx(std::abs(x.atoms()[i].value)));

  // N fair signs on their product space square to the constant sqrt(N)
  std::vector<SimpleFunction> signs;
  for (int i = 0; i < 6; ++i) signs.push_back(SimpleFunction::make({-1.0, 1.0}, {0.5, 0.5}));
  const auto prod = product_space(signs);
  const auto sq = square_function(prod);
  for (const Atom& a : sq.atoms()) CHECK(a.value == std::sqrt(6.0));

  const auto f = SimpleFunction::constant(3.0);
  std::vector<Atom> copy = f.atoms();
  const auto g = SimpleFunction::on_domain(f.domain(), std::move(copy));
  CHECK(square_function({f, g}).atoms()[0].value == Approx(3.0 * std::sqrt(2.0)));

  const auto other = SimpleFunction::constant(1.0);
  CHECK_THROWS_AS(square_function({f, other}), incompatible_domains_error);
  CHECK_THROWS_AS(sum_functions({f, other}), incompatible_domains_error);
}

TEST_CASE("symmetrize produces symmetric mean-zero variables", "[randseries]") {
  const std::size_t m = 50000;

  // fair signs: difference supported on {-2, 0, 2} with masses (1/4, 1/2, 1/4)
  const auto sym = symmetrize(RvFamily::rademacher(), 1, m, 31)[0];
  double p_neg2 = 0, p_zero = 0, p_pos2 = 0;
  for (const Atom& a : sym.atoms()) {
    REQUIRE((a.value == -2.0 || a.value == 0.0 || a.value == 2.0));
    (a.value == -2.0 ? p_neg2 : a.value == 0.0 ? p_zero : p_pos2) += a.mass;
  }
  const double mc_tol = 4.0 / std::sqrt(static_cast<double>(m));
  CHECK(p_neg2 == Approx(0.25).margin(mc_tol));
  CHECK(p_zero == Approx(0.5).margin(mc_tol));
  CHECK(p_pos2 == Approx(0.25).margin(mc_tol));

  // skewed two-point family symmetrizes to zero skewness
  const auto tp = symmetrize(RvFamily::two_point(3.0, -1.0 / 3.0, 0.1), 1, m, 77)[0];
  const auto& atoms = tp.atoms();
  const double mean =
      pairwise_sum(atoms.size(), [&](std::size_t i) { return atoms[i].mass * atoms[i].value; });
  const double var = pairwise_sum(
      atoms.size(), [&](std::size_t i) { return atoms[i].mass * atoms[i].value * atoms[i].value; });
  const double third = pairwise_sum(atoms.size(), [&](std::size_t i) {
    const double v = atoms[i].value;
    return atoms[i].mass * v * v * v;
  });
  const double sigma = std::sqrt(var);
  CHECK(std::abs(mean) <= 4.0 * sigma / std::sqrt(static_cast<double>(m)));
  CHECK(std::abs(third / (sigma * sigma * sigma)) <= 60.0 / std::sqrt(static_cast<double>(m)));
}

TEST_CASE("inverse normal CDF round trip", "[randseries]") {
  for (const double x : {-3.5, -1.0, -0.1, 0.0, 0.7, 2.2, 4.0}) {
    CHECK(rng::normal_inv(rng::normal_cdf(x)) == Approx(x).margin(1e-12));
  }
  for (int i = 1; i < 50; ++i) {
    const double u = i / 50.0;
    CHECK(rng::normal_cdf(rng::normal_inv(u)) == Approx(u).epsilon(1e-12));
  }
}
