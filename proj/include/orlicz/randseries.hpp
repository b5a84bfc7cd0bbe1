#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "orlicz/common.hpp"
#include "orlicz/measure.hpp"
#include "orlicz/rng.hpp"

namespace orlicz {

// r_n(t) = sign(sin(2 pi 2^n t)), evaluated through the exact dyadic fraction
// of 2^n t (ldexp shifts the exponent, fmod by 1 is exact), never through sin.
// sign(0) = 0 at dyadic points, a measure-zero set.
inline int rademacher_eval(int n, double t) {
  if (n < 1 || n > 52) throw std::invalid_argument("rademacher_eval: n must lie in [1, 52]");
  if (!(t >= 0.0 && t < 1.0)) throw std::invalid_argument("rademacher_eval: t must lie in [0, 1)");
  const double frac = std::fmod(std::ldexp(t, n), 1.0);
  if (frac == 0.0 || frac == 0.5) return 0;
  return frac < 0.5 ? 1 : -1;
}

namespace detail {

// Merge a full sign-pattern enumeration into atoms with exact dyadic masses.
inline SimpleFunction enumeration_to_function(std::vector<double> values, int n_vars) {
  struct VC {
    double value;
    std::uint64_t count;
  };
  std::sort(values.begin(), values.end());
  std::vector<VC> merged;
  for (const double v : values) {
    if (!merged.empty() && merged.back().value == v)
      ++merged.back().count;
    else
      merged.push_back(VC{v, 1});
  }
  const double unit = std::ldexp(1.0, -n_vars);
  std::vector<Atom> atoms(merged.size());
  for (std::size_t i = 0; i < merged.size(); ++i)
    atoms[i] = Atom{static_cast<std::int64_t>(i), merged[i].value,
                    static_cast<double>(merged[i].count) * unit};
  return SimpleFunction::on_domain(fresh_domain_id(), std::move(atoms));
}

}  // namespace detail

// Exact distribution of S_N = sum x_n r_n: 2^N equiprobable sign patterns,
// equal values merged, masses exact dyadics.
inline SimpleFunction rademacher_sum_distribution(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  if (n < 1) throw std::invalid_argument("rademacher_sum_distribution: empty coefficients");
  if (n > 24) throw atom_budget_error(1ull << n, 1ull << 24);
  const std::uint64_t total = 1ull << n;
  std::vector<double> values(total);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += (mask >> i) & 1 ? x[i] : -x[i];
    values[mask] = s;
  }
  return detail::enumeration_to_function(std::move(values), n);
}

// Complex coefficients: the distribution of |S_N|.
inline SimpleFunction rademacher_sum_distribution(const std::vector<std::complex<double>>& x) {
  const int n = static_cast<int>(x.size());
  if (n < 1) throw std::invalid_argument("rademacher_sum_distribution: empty coefficients");
  if (n > 24) throw atom_budget_error(1ull << n, 1ull << 24);
  const std::uint64_t total = 1ull << n;
  std::vector<double> values(total);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    double re = 0.0, im = 0.0;
    for (int i = 0; i < n; ++i) {
      const double s = (mask >> i) & 1 ? 1.0 : -1.0;
      re += s * x[i].real();
      im += s * x[i].imag();
    }
    values[mask] = std::sqrt(re * re + im * im);
  }
  return detail::enumeration_to_function(std::move(values), n);
}

// Mean-zero sampling families with finite second moment.  Discrete kinds are
// mean zero exactly; the truncated continuous kinds are symmetric or
// re-centered by the closed-form truncated mean.
class RvFamily {
 public:
  enum class Kind { rademacher_sign, uniform_centered, two_point_mean_zero, gaussian_truncated, pareto_centered };

  static RvFamily rademacher() {
    RvFamily f;
    f.kind_ = Kind::rademacher_sign;
    f.label_ = "rademacher";
    return f;
  }

  static RvFamily uniform_centered(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("uniform_centered: a must be positive");
    RvFamily f;
    f.kind_ = Kind::uniform_centered;
    f.a_ = a;
    f.label_ = "uniform:" + format_sig12(a);
    return f;
  }

  static RvFamily two_point(double v1, double v2, double m) {
    if (!(m > 0.0 && m < 1.0)) throw std::invalid_argument("two_point: mass must lie in (0, 1)");
    const double mean = m * v1 + (1.0 - m) * v2;
    if (std::abs(mean) > 1e-12 * (std::abs(v1) + std::abs(v2)))
      throw std::invalid_argument("two_point: values are not mean zero");
    RvFamily f;
    f.kind_ = Kind::two_point_mean_zero;
    f.v1_ = v1;
    f.v2_ = v2;
    f.m_ = m;
    f.label_ = "twopoint:" + format_sig12(v1) + ":" + format_sig12(v2) + ":" + format_sig12(m);
    return f;
  }

  static RvFamily gaussian_truncated(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius))
      throw std::invalid_argument("gaussian_truncated: radius must be positive");
    RvFamily f;
    f.kind_ = Kind::gaussian_truncated;
    f.r_ = radius;
    f.cdf_lo_ = rng::normal_cdf(-radius);
    f.cdf_hi_ = rng::normal_cdf(radius);
    f.label_ = "gauss:" + format_sig12(radius);
    return f;
  }

  static RvFamily pareto_centered(double alpha, double cutoff) {
    if (!(alpha > 2.0)) throw std::invalid_argument("pareto_centered: alpha must exceed 2");
    if (!(cutoff > 1.0)) throw std::invalid_argument("pareto_centered: cutoff must exceed 1");
    RvFamily f;
    f.kind_ = Kind::pareto_centered;
    f.alpha_ = alpha;
    f.cutoff_ = cutoff;
    f.trunc_cdf_ = 1.0 - std::pow(cutoff, -alpha);
    // truncated raw moments on [1, cutoff]
    f.pareto_m1_ = alpha / (alpha - 1.0) * (1.0 - std::pow(cutoff, 1.0 - alpha)) / f.trunc_cdf_;
    f.pareto_m2_ = alpha / (alpha - 2.0) * (1.0 - std::pow(cutoff, 2.0 - alpha)) / f.trunc_cdf_;
    f.label_ = "pareto:" + format_sig12(alpha) + ":" + format_sig12(cutoff);
    return f;
  }

  Kind kind() const noexcept { return kind_; }
  const std::string& label() const noexcept { return label_; }
  double param_a() const noexcept { return a_; }
  double param_v1() const noexcept { return v1_; }
  double param_v2() const noexcept { return v2_; }
  double param_m() const noexcept { return m_; }
  double param_radius() const noexcept { return r_; }
  double param_alpha() const noexcept { return alpha_; }
  double param_cutoff() const noexcept { return cutoff_; }

  double sample(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) const {
    switch (kind_) {
      case Kind::rademacher_sign:
        return rng::sign_pm1(seed, stream, index);
      case Kind::uniform_centered:
        return (2.0 * rng::uniform01(seed, stream, index) - 1.0) * a_;
      case Kind::two_point_mean_zero:
        return rng::uniform01(seed, stream, index) < m_ ? v1_ : v2_;
      case Kind::gaussian_truncated: {
        const double u = cdf_lo_ + rng::uniform01(seed, stream, index) * (cdf_hi_ - cdf_lo_);
        return rng::normal_inv(u);
      }
      case Kind::pareto_centered: {
        const double u = rng::uniform01(seed, stream, index);
        const double x = std::pow(1.0 - u * trunc_cdf_, -1.0 / alpha_);
        return x - pareto_m1_;
      }
    }
    return 0.0;
  }

  // population E|X|
  double mean_abs() const {
    switch (kind_) {
      case Kind::rademacher_sign:
        return 1.0;
      case Kind::uniform_centered:
        return 0.5 * a_;
      case Kind::two_point_mean_zero:
        return m_ * std::abs(v1_) + (1.0 - m_) * std::abs(v2_);
      case Kind::gaussian_truncated: {
        const double z = cdf_hi_ - cdf_lo_;
        return 2.0 * (rng::normal_pdf(0.0) - rng::normal_pdf(r_)) / z;
      }
      case Kind::pareto_centered: {
        // E|X - m1| over the truncated law; m1 lies strictly inside (1, cutoff)
        const double m1 = pareto_m1_;
        const double below_mass = (1.0 - std::pow(m1, -alpha_)) / trunc_cdf_;
        const double below_mean = alpha_ / (alpha_ - 1.0) * (1.0 - std::pow(m1, 1.0 - alpha_)) / trunc_cdf_;
        return 2.0 * (m1 * below_mass - below_mean);
      }
    }
    return 0.0;
  }

  // population (E X^2)^{1/2}
  double l2() const {
    switch (kind_) {
      case Kind::rademacher_sign:
        return 1.0;
      case Kind::uniform_centered:
        return a_ / std::sqrt(3.0);
      case Kind::two_point_mean_zero:
        return std::sqrt(m_ * v1_ * v1_ + (1.0 - m_) * v2_ * v2_);
      case Kind::gaussian_truncated: {
        const double z = cdf_hi_ - cdf_lo_;
        return std::sqrt(1.0 - 2.0 * r_ * rng::normal_pdf(r_) / z);
      }
      case Kind::pareto_centered:
        return std::sqrt(pareto_m2_ - pareto_m1_ * pareto_m1_);
    }
    return 0.0;
  }

 private:
  RvFamily() = default;

  Kind kind_ = Kind::rademacher_sign;
  double a_ = 0.0;
  double v1_ = 0.0, v2_ = 0.0, m_ = 0.0;
  double r_ = 0.0, cdf_lo_ = 0.0, cdf_hi_ = 0.0;
  double alpha_ = 0.0, cutoff_ = 0.0, trunc_cdf_ = 0.0, pareto_m1_ = 0.0, pareto_m2_ = 0.0;
  std::string label_;
};

// Streams per variable start at 1; the symmetrization copies live 2^32 above.
inline constexpr std::uint64_t kCopyStreamOffset = 1ull << 32;

// M i.i.d. joint samples of (X_1, ..., X_N): each X_n is a SimpleFunction
// with uniform masses 1/M on a shared domain, keyed by (seed, n, index).
inline std::vector<SimpleFunction> monte_carlo_matrix(const RvFamily& family, int n_vars,
                                                      std::size_t m_samples, std::uint64_t seed) {
  if (n_vars < 1) throw std::invalid_argument("monte_carlo_matrix: need at least one variable");
  if (m_samples < 1) throw std::invalid_argument("monte_carlo_matrix: need at least one sample");
  const std::uint64_t dom = fresh_domain_id();
  const double mass = 1.0 / static_cast<double>(m_samples);
  std::vector<SimpleFunction> out;
  out.reserve(n_vars);
  for (int n = 0; n < n_vars; ++n) {
    std::vector<Atom> atoms(m_samples);
    for (std::size_t j = 0; j < m_samples; ++j)
      atoms[j] = Atom{static_cast<std::int64_t>(j),
                      family.sample(seed, static_cast<std::uint64_t>(n) + 1, j), mass};
    out.push_back(SimpleFunction::on_domain(dom, std::move(atoms)));
  }
  return out;
}

// X~_n = X_n - X'_n with X'_n an independent identically distributed copy
// realized through an independent counter stream.
inline std::vector<SimpleFunction> symmetrize(const RvFamily& family, int n_vars,
                                              std::size_t m_samples, std::uint64_t seed) {
  if (n_vars < 1) throw std::invalid_argument("symmetrize: need at least one variable");
  if (m_samples < 1) throw std::invalid_argument("symmetrize: need at least one sample");
  const std::uint64_t dom = fresh_domain_id();
  const double mass = 1.0 / static_cast<double>(m_samples);
  std::vector<SimpleFunction> out;
  out.reserve(n_vars);
  for (int n = 0; n < n_vars; ++n) {
    const std::uint64_t s1 = static_cast<std::uint64_t>(n) + 1;
    const std::uint64_t s2 = s1 + kCopyStreamOffset;
    std::vector<Atom> atoms(m_samples);
    for (std::size_t j = 0; j < m_samples; ++j)
      atoms[j] = Atom{static_cast<std::int64_t>(j),
                      family.sample(seed, s1, j) - family.sample(seed, s2, j), mass};
    out.push_back(SimpleFunction::on_domain(dom, std::move(atoms)));
  }
  return out;
}

inline SimpleFunction sum_functions(const std::vector<SimpleFunction>& xs) {
  if (xs.empty()) throw std::invalid_argument("sum_functions: empty input");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!xs[0].combinable_with(xs[i]))
      throw incompatible_domains_error("sum_functions: inputs are not pairwise combinable");
  std::vector<Atom> atoms = xs[0].atoms();
  for (std::size_t i = 1; i < xs.size(); ++i)
    for (std::size_t j = 0; j < atoms.size(); ++j) atoms[j].value += xs[i].atoms()[j].value;
  return SimpleFunction::on_domain(xs[0].domain(), std::move(atoms));
}

// (sum |X_n|^2)^{1/2} pointwise on the shared domain.
inline SimpleFunction square_function(const std::vector<SimpleFunction>& xs) {
  if (xs.empty()) throw std::invalid_argument("square_function: empty input");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!xs[0].combinable_with(xs[i]))
      throw incompatible_domains_error("square_function: inputs are not pairwise combinable");
  std::vector<Atom> atoms = xs[0].atoms();
  for (Atom& a : atoms) a.value = a.value * a.value;
  for (std::size_t i = 1; i < xs.size(); ++i)
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      const double v = xs[i].atoms()[j].value;
      atoms[j].value += v * v;
    }
  for (Atom& a : atoms) a.value = std::sqrt(a.value);
  return SimpleFunction::on_domain(xs[0].domain(), std::move(atoms));
}

}  // namespace orlicz
