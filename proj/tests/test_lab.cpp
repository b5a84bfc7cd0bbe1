#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "orlicz/lab.hpp"
#include "orlicz/serialize.hpp"

using namespace orlicz;
using Catch::Approx;

namespace {

double equal_weight_ratio(const YoungFunction& psi, int n, double tol = 1e-10) {
  const std::vector<double> x(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
  return luxemburg_norm(psi, rademacher_sum_distribution(x), tol).value;
}

// binomial oracle for E|S_N| with equal weights 1/sqrt(N)
double mean_abs_binomial(int n) {
  double acc = 0.0;
  for (int k = 0; k <= n; ++k) {
    double logc = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    acc += std::exp(logc - n * std::log(2.0)) * std::abs(2.0 * k - n);
  }
  return acc / std::sqrt(static_cast<double>(n));
}

}  // namespace

TEST_CASE("khinchin-orlicz: exact ratios and the L1 extremal case", "[lab]") {
  // N = 1: both sides coincide for psi = x^2
  KhinchinOptions o1;
  o1.sweep.n_list = {1};
  o1.sweep.random_per_n = 5;
  const auto rep1 = khinchin_orlicz(YoungFunction::power(2), o1);
  CHECK(rep1.ratio_min == Approx(1.0).epsilon(1e-9));
  CHECK(rep1.ratio_max == Approx(1.0).epsilon(1e-9));
  CHECK(rep1.passed);

  // default sweep up to N = 12: the minimum sits at x = (1,1)/sqrt(2)
  KhinchinOptions o;
  o.sweep.n_max = 12;
  o.sweep.random_per_n = 25;
  const auto rep = khinchin_orlicz(YoungFunction::power(1), o);
  CHECK(rep.ratio_min == Approx(0.70711).margin(0.005));
  CHECK(rep.ratio_max <= 1.0 + 1e-9);
  CHECK(rep.extras.at("band") <= 4.0);
  CHECK(rep.extras.at("scale_dev_max") <= 1e-9);
  CHECK(rep.violations == 0);
  CHECK(rep.passed);

  // equal weights at N = 16: enumeration against the binomial oracle and the
  // CLT limit sqrt(2/pi)
  const double r16 = equal_weight_ratio(YoungFunction::power(1), 16);
  CHECK(r16 == Approx(mean_abs_binomial(16)).epsilon(1e-11));
  CHECK(r16 == Approx(0.7855224609375).epsilon(1e-10));
  CHECK(r16 == Approx(0.7979).margin(0.02));
}

TEST_CASE("khinchin scale invariance for non-dyadic factors", "[lab]") {
  const auto psi = YoungFunction::power(1.5);
  for (const int n : {2, 5, 9}) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = 1.0 / (i + 1.3);
    std::vector<double> x3 = x;
    for (double& v : x3) v *= 3.0;
    const double r1 =
        luxemburg_norm(psi, rademacher_sum_distribution(x), 1e-12).value / detail::norm2(x);
    const double r2 =
        luxemburg_norm(psi, rademacher_sum_distribution(x3), 1e-12).value / detail::norm2(x3);
    CHECK(std::abs(r1 - r2) <= 1e-10);

    const LorentzIndex idx{2.0, 1.0};
    const double l1 = lorentz_norm(idx, rademacher_sum_distribution(x)).value / detail::norm2(x);
    const double l2 = lorentz_norm(idx, rademacher_sum_distribution(x3)).value / detail::norm2(x3);
    CHECK(std::abs(l1 - l2) <= 1e-10);
  }
}

TEST_CASE("khinchin-orlicz: complex split bound", "[lab]") {
  KhinchinOptions o;
  o.sweep.n_list = {2, 4, 6};
  o.sweep.random_per_n = 5;
  o.complex_per_n = 4;
  const auto rep = khinchin_orlicz(YoungFunction::power(1.5), o);
  CHECK(rep.violations == 0);
  CHECK(rep.passed);
}

TEST_CASE("khinchin-lorentz: identity at (2,2) and the single-step case", "[lab]") {
  KhinchinOptions o;
  o.sweep.n_max = 8;
  o.sweep.random_per_n = 10;
  const auto rep = khinchin_lorentz(LorentzIndex{2.0, 2.0}, o);
  CHECK(rep.ratio_min == Approx(1.0).margin(1e-10));
  CHECK(rep.ratio_max == Approx(1.0).margin(1e-10));
  CHECK(rep.passed);

  // N = 1 with q = inf: sup_t t^{1/2} * 1 = 1
  KhinchinOptions o1;
  o1.sweep.n_list = {1};
  o1.sweep.random_per_n = 3;
  const auto rinf = khinchin_lorentz(LorentzIndex{2.0, kInf}, o1);
  CHECK(rinf.ratio_min == Approx(1.0).epsilon(1e-12));
  CHECK(rinf.ratio_max == Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(khinchin_lorentz(LorentzIndex{1.0, 2.0}, o1), std::invalid_argument);
}

TEST_CASE("mz-orlicz: exact N=1 ratio and the L2 identity", "[lab]") {
  MzOptions o;
  o.n_list = {1};
  o.m = 4000;
  o.seed = 11;
  o.seed_count = 3;
  const auto rep1 = mz_orlicz(YoungFunction::power(2), RvFamily::uniform_centered(1.0), o);
  CHECK(rep1.ratio_min == 1.0);  // ||X|| / |||X||| is exactly 1
  CHECK(rep1.ratio_max == 1.0);

  MzOptions o2;
  o2.n_list = {2, 4, 8};
  o2.m = 20000;
  o2.seed = 21;
  o2.seed_count = 5;
  for (const auto& family : {RvFamily::rademacher(), RvFamily::two_point(3.0, -1.0 / 3.0, 0.1)}) {
    const auto rep = mz_orlicz(YoungFunction::power(2), family, o2);
    CHECK(rep.ratio_median == Approx(1.0).margin(0.02));
    CHECK(rep.extras.at("per_n_median_span") <= 1.05);
    CHECK(rep.passed);
  }
}

TEST_CASE("mz-orlicz: Rademacher signs reduce to the Khinchin ratio", "[lab]") {
  const auto psi = YoungFunction::power(1.5);
  MzOptions o;
  o.n_list = {2, 8};
  o.m = 20000;
  o.seed = 5;
  o.seed_count = 5;
  const auto rep = mz_orlicz(psi, RvFamily::rademacher(), o);
  for (const int n : o.n_list) {
    const double exact = equal_weight_ratio(psi, n);
    CHECK(rep.extras.at("median_n" + std::to_string(n)) == Approx(exact).margin(0.05));
  }
}

TEST_CASE("mz-lorentz: identity at (2,2) and the Khinchin reduction", "[lab]") {
  MzOptions o;
  o.n_list = {2, 4};
  o.m = 20000;
  o.seed = 31;
  o.seed_count = 5;
  const auto rep = mz_lorentz(LorentzIndex{2.0, 2.0}, RvFamily::uniform_centered(std::sqrt(3.0)), o);
  CHECK(rep.ratio_median == Approx(1.0).margin(0.02));
  CHECK(rep.passed);

  const auto reduction = mz_lorentz(LorentzIndex{3.0, 2.0}, RvFamily::rademacher(), o);
  for (const int n : o.n_list) {
    const std::vector<double> x(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
    const double exact = lorentz_norm({3.0, 2.0}, rademacher_sum_distribution(x)).value;
    CHECK(reduction.extras.at("median_n" + std::to_string(n)) == Approx(exact).margin(0.05));
  }

  CHECK_THROWS_AS(mz_lorentz(LorentzIndex{1.0, 2.0}, RvFamily::rademacher(), o),
                  std::invalid_argument);
}

TEST_CASE("exp-moment: cosh identity and the 2e bound", "[lab]") {
  // single Rademacher: E e^{|S|} = e, half the bound
  ExpMomentOptions o1;
  o1.sweep.n_list = {1};
  o1.sweep.random_per_n = 2;
  const auto rep1 = exp_moment_check(o1);
  CHECK(rep1.ratio_max == Approx(0.5).epsilon(1e-12));
  CHECK(rep1.violations == 0);

  // x = (1,1)/sqrt(2): E e^{|S|} = (e^{sqrt 2} + 1)/2
  const std::vector<double> x2(2, 1.0 / std::sqrt(2.0));
  const auto dist = rademacher_sum_distribution(x2);
  const double e_abs = pairwise_sum(dist.size(), [&](std::size_t i) {
    return dist.atoms()[i].mass * std::exp(std::abs(dist.atoms()[i].value));
  });
  CHECK(e_abs == Approx(0.5 * std::exp(std::sqrt(2.0)) + 0.5).epsilon(1e-12));
  CHECK(e_abs <= kTwoE);

  ExpMomentOptions o;
  o.sweep.n_max = 16;
  o.sweep.random_per_n = 15;
  const auto rep = exp_moment_check(o);
  CHECK(rep.violations == 0);
  CHECK(rep.extras.at("cosh_identity_dev_max") <= 1e-12);
  CHECK(rep.ratio_max <= 1.0);
  CHECK(rep.passed);

  ExpMomentOptions bad;
  bad.sweep.n_list = {18};
  CHECK_THROWS_AS(exp_moment_check(bad), std::invalid_argument);
}

TEST_CASE("interpolation: moment chain with equality cases", "[lab]") {
  // |S| constant: equality
  ExpMomentOptions o1;
  o1.sweep.n_list = {1};
  o1.sweep.random_per_n = 2;
  const auto rep1 = interpolation_check(o1);
  CHECK(rep1.ratio_max == Approx(1.0).epsilon(1e-12));
  CHECK(rep1.violations == 0);

  // x = (1,1): ||S||_2^3 = 2 sqrt(2) = ||S||_1 ||S||_4^2
  const auto dist = rademacher_sum_distribution(std::vector<double>{1.0, 1.0});
  const double n1 = lp_norm(1, dist).value;
  const double n2 = lp_norm(2, dist).value;
  const double n4 = lp_norm(4, dist).value;
  CHECK(n2 * n2 * n2 == Approx(n1 * n4 * n4).epsilon(1e-12));

  ExpMomentOptions o;
  o.sweep.n_max = 10;
  o.sweep.random_per_n = 20;
  const auto rep = interpolation_check(o);
  CHECK(rep.violations == 0);
  CHECK(rep.ratio_max <= 1.0 + 1e-12);
  CHECK(rep.passed);
}

TEST_CASE("kp-bound: moments, unit-vector case, and the empirical constant", "[lab]") {
  KpOptions o;
  o.n_list = {2, 4};
  o.m = 8000;
  o.seed = 17;
  o.seed_count = 3;
  o.random_per_n = 4;

  // Rademacher signs: ||xi||_1 = ||xi||_2 = 1, the check collapses to Khinchin
  const auto rad = kp_bound(YoungFunction::power(1.5), RvFamily::rademacher(), o);
  CHECK(rad.extras.at("xi_l1") == 1.0);
  CHECK(rad.extras.at("xi_l2") == 1.0);
  CHECK(rad.violations == 0);
  CHECK(rad.passed);

  const auto uni = kp_bound(YoungFunction::power(1.2), RvFamily::uniform_centered(std::sqrt(3.0)), o);
  CHECK(uni.extras.at("xi_l1") == Approx(std::sqrt(3.0) / 2.0));
  CHECK(uni.extras.at("xi_l2") == Approx(1.0));
  CHECK(uni.violations == 0);
  CHECK(uni.extras.at("c_hat") >= 0.2);
  // e_1 is in the sweep: its lower ratio is ||xi||_psi / ||xi||_1 >= 1 up to noise,
  // and every ratio stays above the L1 reduction floor
  CHECK(uni.ratio_max >= 1.0 - 0.05);
  CHECK(uni.passed);
}

TEST_CASE("sqrt-psi modular diagnostic", "[lab]") {
  const auto p2 = YoungFunction::power(2);
  CHECK(sqrt_psi_modular_report(p2, SimpleFunction::constant(3.0)).modular_value == Approx(3.0));
  CHECK(sqrt_psi_modular_report(p2, SimpleFunction::make({4.0, 0.0}, {0.5, 0.5})).modular_value ==
        Approx(2.0));
  CHECK(sqrt_psi_modular_report(p2, SimpleFunction::constant(0.0)).modular_value == 0.0);
  const auto sat = sqrt_psi_modular_report(YoungFunction::exp_square_minus_one(),
                                           SimpleFunction::constant(100.0));
  CHECK_FALSE(sat.finite);
}

TEST_CASE("holder-lorentz records a stable constant", "[lab]") {
  HolderOptions o;
  o.cases = 120;
  o.atoms = 32;
  o.seed = 3;
  const auto rep = holder_lorentz(o);
  CHECK(rep.passed);
  CHECK(std::isfinite(rep.extras.at("c_max")));
  CHECK(rep.extras.at("c_max") > 0.0);

  // product index must stay a norm index
  HolderOptions bad;
  bad.q1 = 1.0;
  bad.q2 = 2.0;  // 1/q = 1.5 -> q < 1
  CHECK_THROWS_AS(holder_lorentz(bad), std::invalid_argument);
}

TEST_CASE("rearrangement suite has zero violations", "[lab]") {
  RearrangementOptions o;
  o.cases = 150;
  o.atoms = 24;
  o.seed = 9;
  const auto rep = rearrangement_suite(o);
  CHECK(rep.violations == 0);
  CHECK(rep.ratio_min >= -1e-12);
  CHECK(rep.passed);
}

TEST_CASE("exact drivers are byte-for-byte deterministic", "[lab]") {
  KhinchinOptions o;
  o.sweep.n_max = 6;
  o.sweep.random_per_n = 8;
  o.threads = 2;
  const std::string a = canonical_report_string(khinchin_orlicz(YoungFunction::power(1.5), o));
  const std::string b = canonical_report_string(khinchin_orlicz(YoungFunction::power(1.5), o));
  CHECK(a == b);

  ExpMomentOptions eo;
  eo.sweep.n_max = 6;
  eo.sweep.random_per_n = 8;
  CHECK(canonical_report_string(exp_moment_check(eo)) ==
        canonical_report_string(exp_moment_check(eo)));
}

TEST_CASE("MC drivers are thread-count independent at fixed seed", "[lab]") {
  MzOptions o;
  o.n_list = {2, 4};
  o.m = 2000;
  o.seed = 42;
  o.seed_count = 4;
  o.threads = 1;
  const auto r1 = mz_orlicz(YoungFunction::power(2), RvFamily::rademacher(), o);
  o.threads = 2;
  const auto r2 = mz_orlicz(YoungFunction::power(2), RvFamily::rademacher(), o);
  CHECK(canonical_report_string(r1) == canonical_report_string(r2));

  KpOptions ko;
  ko.n_list = {2, 4};
  ko.m = 2000;
  ko.seed = 42;
  ko.seed_count = 3;
  ko.random_per_n = 3;
  ko.threads = 1;
  const auto k1 = kp_bound(YoungFunction::power(1.5), RvFamily::uniform_centered(1.0), ko);
  ko.threads = 2;
  const auto k2 = kp_bound(YoungFunction::power(1.5), RvFamily::uniform_centered(1.0), ko);
  CHECK(canonical_report_string(k1) == canonical_report_string(k2));
}
