#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "orlicz/common.hpp"

namespace orlicz {

enum class YoungFamily {
  power,
  scaled_power,
  power_log,
  exp_minus_one,
  exp_square_minus_one,
  piecewise_linear,
};

struct PiecewisePoint {
  double x;      // left endpoint of the segment
  double slope;  // derivative on [x, next x)
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Convex gauge psi on [0, inf) with psi(0) = 0.  Families cover the usual
// power scale, L log L, the two exponential gauges and arbitrary piecewise
// linear convex profiles.  Exponential families saturate at a configurable
// argument threshold and signal saturation_error instead of overflowing.
//
// Note: power(1) (i.e. psi(x) = x, giving L^1) is accepted even though it is
// not a Young function in the strict sense; verify_young_conditions reports
// it as unsatisfied while the norm machinery still works.
class YoungFunction {
 public:
  static YoungFunction power(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("power: exponent must be finite and >= 1");
    YoungFunction f;
    f.family_ = YoungFamily::power;
    f.p_ = p;
    f.label_ = "power:" + format_sig12(p);
    return f;
  }

  static YoungFunction scaled_power(double p, double c) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("scaled_power: exponent must be finite and >= 1");
    if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("scaled_power: scale must be positive");
    YoungFunction f;
    f.family_ = YoungFamily::scaled_power;
    f.p_ = p;
    f.c_ = c;
    f.label_ = "scaledpower:" + format_sig12(p) + ":" + format_sig12(c);
    return f;
  }

  // x log(1 + x): the L log L gauge.
  static YoungFunction power_log() {
    YoungFunction f;
    f.family_ = YoungFamily::power_log;
    f.label_ = "powerlog";
    return f;
  }

  static YoungFunction exp_minus_one() {
    YoungFunction f;
    f.family_ = YoungFamily::exp_minus_one;
    f.saturation_ = 709.0;
    f.label_ = "expm1";
    return f;
  }

  static YoungFunction exp_square_minus_one() {
    YoungFunction f;
    f.family_ = YoungFamily::exp_square_minus_one;
    f.saturation_ = 26.5;  // keeps both exp(x^2) and the derivative finite
    f.label_ = "expsq";
    return f;
  }

  static YoungFunction piecewise(std::vector<PiecewisePoint> pts) {
    if (pts.empty()) throw std::invalid_argument("piecewise: needs at least one segment");
    if (pts.front().x != 0.0) throw std::invalid_argument("piecewise: first breakpoint must be at x = 0");
    if (pts.front().slope < 0.0) throw std::invalid_argument("piecewise: first slope must be >= 0");
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (!(pts[i].x > pts[i - 1].x)) throw std::invalid_argument("piecewise: breakpoints must increase strictly");
      if (!(pts[i].slope > pts[i - 1].slope)) throw std::invalid_argument("piecewise: slopes must increase strictly");
    }
    YoungFunction f;
    f.family_ = YoungFamily::piecewise_linear;
    f.points_ = std::move(pts);
    f.label_ = "piecewise";
    return f;
  }

  YoungFamily family() const noexcept { return family_; }
  const std::string& label() const noexcept { return label_; }
  double exponent() const noexcept { return p_; }
  double scale() const noexcept { return c_; }
  const std::vector<PiecewisePoint>& points() const noexcept { return points_; }

  // Saturation threshold (inf when the family never saturates by policy).
  double max_arg() const noexcept { return saturation_; }

  YoungFunction with_saturation(double threshold) const {
    if (!(threshold > 0.0)) throw std::invalid_argument("saturation threshold must be positive");
    YoungFunction f = *this;
    f.saturation_ = threshold;
    return f;
  }

  // Largest argument with a finite evaluation (representability, not policy).
  double finite_arg_limit() const {
    const double dmax = std::numeric_limits<double>::max();
    switch (family_) {
      case YoungFamily::power:
        return std::min(saturation_, 0.9 * std::pow(dmax, 1.0 / p_));
      case YoungFamily::scaled_power:
        return std::min(saturation_, 0.9 * std::pow(dmax / c_, 1.0 / p_));
      case YoungFamily::power_log:
        return std::min(saturation_, 1e300);
      case YoungFamily::exp_minus_one:
      case YoungFamily::exp_square_minus_one:
        return saturation_;
      case YoungFamily::piecewise_linear:
        return std::min(saturation_, 0.9 * dmax / points_.back().slope);
    }
    return saturation_;
  }

  double eval(double x) const {
    if (!(x >= 0.0)) throw std::invalid_argument("eval: argument must be nonnegative");
    if (x == 0.0) return 0.0;
    if (x > saturation_) throw saturation_error(x, saturation_);
    double r = 0.0;
    switch (family_) {
      case YoungFamily::power:
        r = pow_fast(x, p_);
        break;
      case YoungFamily::scaled_power:
        r = c_ * pow_fast(x, p_);
        break;
      case YoungFamily::power_log:
        r = x * std::log1p(x);
        break;
      case YoungFamily::exp_minus_one:
        r = std::expm1(x);
        break;
      case YoungFamily::exp_square_minus_one:
        r = std::expm1(x * x);
        break;
      case YoungFamily::piecewise_linear: {
        r = 0.0;
        for (std::size_t i = 0; i < points_.size(); ++i) {
          const double seg_end = (i + 1 < points_.size()) ? points_[i + 1].x : x;
          if (x <= points_[i].x) break;
          r += points_[i].slope * (std::min(x, seg_end) - points_[i].x);
          if (x <= seg_end) break;
        }
        break;
      }
    }
    if (!std::isfinite(r)) throw saturation_error(x, finite_arg_limit());
    return r;
  }

  // Right derivative; analytic per family.
  double derivative(double x) const {
    if (!(x > 0.0)) throw std::invalid_argument("derivative: argument must be positive");
    if (x > saturation_) throw saturation_error(x, saturation_);
    double r = 0.0;
    switch (family_) {
      case YoungFamily::power:
        r = p_ * pow_fast(x, p_ - 1.0);
        break;
      case YoungFamily::scaled_power:
        r = c_ * p_ * pow_fast(x, p_ - 1.0);
        break;
      case YoungFamily::power_log:
        r = std::log1p(x) + x / (1.0 + x);
        break;
      case YoungFamily::exp_minus_one:
        r = std::exp(x);
        break;
      case YoungFamily::exp_square_minus_one:
        r = 2.0 * x * std::exp(x * x);
        break;
      case YoungFamily::piecewise_linear: {
        r = points_.back().slope;
        for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
          if (x < points_[i + 1].x) {
            r = points_[i].slope;
            break;
          }
        }
        break;
      }
    }
    if (!std::isfinite(r)) throw saturation_error(x, finite_arg_limit());
    return r;
  }

  double derivative_sup() const noexcept {
    switch (family_) {
      case YoungFamily::power:
        return p_ == 1.0 ? 1.0 : kInf;
      case YoungFamily::scaled_power:
        return p_ == 1.0 ? c_ : kInf;
      case YoungFamily::piecewise_linear:
        return points_.back().slope;
      default:
        return kInf;
    }
  }

  // psi^{-1}(t) by bisection on the monotone evaluation.
  double inverse(double t) const {
    if (!(t >= 0.0)) throw std::invalid_argument("inverse: argument must be nonnegative");
    if (t == 0.0) return 0.0;
    const double cap = finite_arg_limit();
    double lo = 0.0;
    double hi = 1.0;
    int guard = 0;
    while (eval(std::min(hi, cap)) < t) {
      lo = hi;
      if (hi >= cap) throw saturation_error(t, cap);
      hi = std::min(hi * 2.0, cap);
      if (++guard > 2100) throw convergence_error("inverse: bracket growth failed");
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (eval(mid) < t ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  // Young complement psi*(y) = sup_{x >= 0} (x y - psi(x)), computed by
  // inverting the derivative (analytically where a closed form exists,
  // bisection otherwise) and evaluating at the stationary point.
  double conjugate(double y) const {
    if (!(y >= 0.0)) throw std::invalid_argument("conjugate: argument must be nonnegative");
    if (y == 0.0) return 0.0;
    const double dsup = derivative_sup();
    if (y > dsup) throw unbounded_conjugate_error(y, dsup);
    const double xs = derivative_inverse(y);
    const double v = xs * y - eval(xs);
    return v > 0.0 ? v : 0.0;
  }

  // sup{x : psi'(x) <= y}; a maximizer of x y - psi(x).
  double derivative_inverse(double y) const {
    switch (family_) {
      case YoungFamily::power:
        if (p_ == 1.0) return 0.0;  // psi' == 1; for y <= 1 the sup sits at 0
        return std::pow(y / p_, 1.0 / (p_ - 1.0));
      case YoungFamily::scaled_power:
        if (p_ == 1.0) return 0.0;
        return std::pow(y / (c_ * p_), 1.0 / (p_ - 1.0));
      case YoungFamily::exp_minus_one:
        return y <= 1.0 ? 0.0 : std::log(y);
      case YoungFamily::piecewise_linear: {
        if (y < points_.front().slope) return 0.0;
        for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
          if (y < points_[i + 1].slope) return points_[i + 1].x;
        }
        return points_.back().x;
      }
      default:
        break;
    }
    // monotone bisection on psi'
    const double cap = finite_arg_limit();
    double lo = 0.0;
    double hi = 1.0;
    int guard = 0;
    if (derivative(std::min(hi, cap)) >= y) {
      // stationary point below 1; shrink a lower bracket
      lo = 0.0;
    } else {
      while (derivative(std::min(hi, cap)) < y) {
        lo = hi;
        if (hi >= cap) throw saturation_error(y, cap);
        hi = std::min(hi * 2.0, cap);
        if (++guard > 2100) throw convergence_error("derivative_inverse: bracket growth failed");
      }
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * std::max(hi, 1e-300); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (derivative(mid) < y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

 private:
  YoungFunction() = default;

  static double pow_fast(double x, double e) {
    if (e == 1.0) return x;
    if (e == 2.0) return x * x;
    if (e == 3.0) return x * x * x;
    if (e == 0.5) return std::sqrt(x);
    if (e == 1.5) return x * std::sqrt(x);
    return std::pow(x, e);
  }

  YoungFamily family_ = YoungFamily::power;
  double p_ = 2.0;
  double c_ = 1.0;
  std::vector<PiecewisePoint> points_;
  double saturation_ = kInf;
  std::string label_;
};

enum class GrowthHypothesis {
  linear_below_exp_above,     // x << psi and psi << e^x
  linear_below_square_above,  // x << psi and psi << x^2
  delta2,                     // x << psi and psi(2x) << psi(x)
  young_conditions,           // used by verify_young_conditions reports
};

inline const char* hypothesis_name(GrowthHypothesis h) {
  switch (h) {
    case GrowthHypothesis::linear_below_exp_above:
      return "linear_below_exp_above";
    case GrowthHypothesis::linear_below_square_above:
      return "linear_below_square_above";
    case GrowthHypothesis::delta2:
      return "delta2";
    case GrowthHypothesis::young_conditions:
      return "young_conditions";
  }
  return "?";
}

// Finite-grid growth check.  For the three theorem hypotheses: satisfied iff
// both worst ratios are finite and at most the configured cap.  For
// young_conditions the two ratio fields hold the small-end and the largest
// observed psi(x)/x ratio instead (diagnostics); asymptotics can only be
// falsified on a grid, never certified.
struct GrowthReport {
  GrowthHypothesis hypothesis = GrowthHypothesis::young_conditions;
  std::vector<double> grid;
  double worst_ratio_low = 0.0;
  double worst_ratio_high = 0.0;
  bool satisfied = false;
};

inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw std::invalid_argument("log_grid: need 0 < lo < hi and n >= 2");
  std::vector<double> g(n);
  const double step = std::log(hi / lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo * std::exp(step * static_cast<double>(i));
  g.front() = lo;
  g.back() = hi;
  return g;
}

// The hypotheses compare growth at scale >= 1 (the embedding on probability
// spaces only sees large arguments), so grids start at 1.  Tops are pulled
// inside the saturation threshold; delta2 also evaluates psi(2x).
inline std::vector<double> default_hypothesis_grid(const YoungFunction& psi, GrowthHypothesis hyp,
                                                   std::size_t n = 128) {
  double hi = 1e3;
  const double cap = psi.finite_arg_limit();
  if (std::isfinite(cap)) hi = std::min(hi, (hyp == GrowthHypothesis::delta2 ? 0.45 : 0.9) * cap);
  if (hyp == GrowthHypothesis::linear_below_exp_above) hi = std::min(hi, 700.0);
  if (hi <= 1.0) hi = 2.0;
  return log_grid(1.0, hi, n);
}

inline GrowthReport check_hypothesis(const YoungFunction& psi, GrowthHypothesis hyp,
                                     std::vector<double> grid, double cap = 1e3) {
  if (grid.empty()) throw std::invalid_argument("check_hypothesis: grid must be nonempty");
  if (!std::is_sorted(grid.begin(), grid.end()) || grid.front() <= 0.0)
    throw std::invalid_argument("check_hypothesis: grid must be sorted and positive");
  if (hyp == GrowthHypothesis::young_conditions)
    throw std::invalid_argument("check_hypothesis: use verify_young_conditions");
  GrowthReport rep;
  rep.hypothesis = hyp;
  rep.grid = std::move(grid);
  double low = 0.0;
  double high = 0.0;
  for (const double x : rep.grid) {
    const double px = psi.eval(x);
    low = std::max(low, px > 0.0 ? x / px : kInf);
    double h = 0.0;
    switch (hyp) {
      case GrowthHypothesis::linear_below_exp_above:
        h = px / std::exp(x);
        break;
      case GrowthHypothesis::linear_below_square_above:
        h = px / (x * x);
        break;
      case GrowthHypothesis::delta2:
        h = px > 0.0 ? psi.eval(2.0 * x) / px : kInf;
        break;
      default:
        break;
    }
    high = std::max(high, h);
  }
  rep.worst_ratio_low = low;
  rep.worst_ratio_high = high;
  rep.satisfied = std::isfinite(low) && std::isfinite(high) && low <= cap && high <= cap;
  return rep;
}

inline GrowthReport check_hypothesis(const YoungFunction& psi, GrowthHypothesis hyp, double cap = 1e3) {
  return check_hypothesis(psi, hyp, default_hypothesis_grid(psi, hyp), cap);
}

struct YoungConditionOptions {
  // psi(x)/x must reach past this on the grid; 10 keeps slowly growing gauges
  // (x log(1+x), x^{1.2}) in while rejecting linear growth on [1e-6, 1e6]
  double upper_threshold = 10.0;
  double convexity_rel_tol = 1e-12;
};

// Midpoint convexity on consecutive grid triples plus monotonicity of
// psi(x)/x and escape of that ratio past the threshold at the large end.
// Points where the evaluation saturates count as ratio = +inf (the growth
// condition holds a fortiori there) and are skipped in convexity triples.
inline GrowthReport verify_young_conditions(const YoungFunction& psi, std::vector<double> grid,
                                            const YoungConditionOptions& opt = {}) {
  if (grid.empty()) throw std::invalid_argument("verify_young_conditions: grid must be nonempty");
  if (!std::is_sorted(grid.begin(), grid.end()) || grid.front() <= 0.0)
    throw std::invalid_argument("verify_young_conditions: grid must be sorted and positive");
  GrowthReport rep;
  rep.hypothesis = GrowthHypothesis::young_conditions;
  rep.grid = std::move(grid);
  const std::size_t n = rep.grid.size();

  auto eval_opt = [&](double x) -> double {
    try {
      return psi.eval(x);
    } catch (const saturation_error&) {
      return kInf;
    }
  };

  std::vector<double> vals(n);
  std::vector<double> ratios(n);
  for (std::size_t i = 0; i < n; ++i) {
    vals[i] = eval_opt(rep.grid[i]);
    ratios[i] = vals[i] / rep.grid[i];
  }

  bool convex_ok = true;
  for (std::size_t i = 0; i + 2 < n && convex_ok; ++i) {
    const double a = rep.grid[i];
    const double b = rep.grid[i + 2];
    if (!std::isfinite(vals[i]) || !std::isfinite(vals[i + 2])) continue;
    const double fm = eval_opt(0.5 * (a + b));
    if (!std::isfinite(fm)) continue;
    const double avg = 0.5 * (vals[i] + vals[i + 2]);
    if (fm > avg * (1.0 + opt.convexity_rel_tol) + 1e-300) convex_ok = false;
  }

  bool monotone_ok = true;
  for (std::size_t i = 0; i + 1 < n && monotone_ok; ++i) {
    if (ratios[i + 1] < ratios[i] * (1.0 - 1e-12)) monotone_ok = false;
  }

  double high = 0.0;
  for (const double r : ratios) high = std::max(high, r);

  rep.worst_ratio_low = ratios.front();
  rep.worst_ratio_high = high;
  rep.satisfied = convex_ok && monotone_ok && high >= opt.upper_threshold;
  return rep;
}

inline GrowthReport verify_young_conditions(const YoungFunction& psi) {
  return verify_young_conditions(psi, log_grid(1e-6, 1e6, 512));
}

}  // namespace orlicz
