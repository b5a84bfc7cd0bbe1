#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "orlicz/common.hpp"
#include "orlicz/measure.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

enum class NormMethod { closed, bisection, amemiya, dual_oracle, step_quadrature };

inline const char* to_string(NormMethod m) {
  switch (m) {
    case NormMethod::closed:
      return "closed";
    case NormMethod::bisection:
      return "bisection";
    case NormMethod::amemiya:
      return "amemiya";
    case NormMethod::dual_oracle:
      return "dual_oracle";
    case NormMethod::step_quadrature:
      return "step_quadrature";
  }
  return "?";
}

// A computed norm with its method tag and an a posteriori error bound
// (bracket width for the solvers, 0 for exact closed forms).
struct NormValue {
  double value = 0.0;
  NormMethod method = NormMethod::closed;
  double err_bound = 0.0;
};

struct LorentzIndex {
  double p = 2.0;
  double q = 2.0;  // may be +inf

  bool valid() const {
    return std::isfinite(p) && p > 1.0 && (q == kInf || (std::isfinite(q) && q >= 1.0));
  }
  bool q_infinite() const { return q == kInf; }
};

namespace detail {

inline double pow_abs(double x, double e) {
  x = std::abs(x);
  if (x == 0.0) return 0.0;
  if (e == 1.0) return x;
  if (e == 2.0) return x * x;
  if (e == 3.0) return x * x * x;
  if (e == 0.5) return std::sqrt(x);
  if (e == 1.5) return x * std::sqrt(x);
  return std::pow(x, e);
}

}  // namespace detail

inline NormValue lp_norm(double p, const SimpleFunction& f) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("lp_norm: p must be finite and >= 1");
  if (f.is_zero()) return NormValue{0.0, NormMethod::closed, 0.0};
  const double s = pairwise_sum(f.size(), [&](std::size_t i) {
    const Atom& a = f.atoms()[i];
    return a.mass * detail::pow_abs(a.value, p);
  });
  return NormValue{p == 1.0 ? s : std::pow(s, 1.0 / p), NormMethod::closed, 0.0};
}

// Luxemburg norm: the smallest lambda with rho_psi(f / lambda) <= 1, found by
// bisection on the monotone modular.  The initial bracket
// [max|v| / psi^{-1}(1/m_min), max|v| / psi^{-1}(1)] always contains the root;
// geometric expansion covers rounding at the ends.  The returned lambda is
// feasible and tight: rho at it lies in [1 - 10 tol, 1].
inline NormValue luxemburg_norm(const YoungFunction& psi, const SimpleFunction& f,
                                double tol = 1e-10) {
  if (!(tol > 0.0)) throw std::invalid_argument("luxemburg_norm: tol must be positive");
  if (f.is_zero()) return NormValue{0.0, NormMethod::bisection, 0.0};

  const double vmax = f.max_abs();
  const double mmin = f.min_mass();
  double hi = vmax / psi.inverse(1.0);
  double lo = vmax / psi.inverse(1.0 / mmin);
  if (!(lo <= hi)) std::swap(lo, hi);

  auto rho = [&](double lambda) { return modular_scaled(psi, f, 1.0 / lambda); };
  auto rho_at_least_one = [&](double lambda) {
    try {
      return rho(lambda) >= 1.0;
    } catch (const saturation_error&) {
      return true;  // a saturated modular is certainly past 1
    }
  };

  int guard = 0;
  while (rho(hi) > 1.0) {
    lo = hi;
    hi *= 4.0;
    if (++guard > 200) throw convergence_error("luxemburg_norm: no feasible upper bracket");
  }
  guard = 0;
  while (!rho_at_least_one(lo)) {
    hi = std::min(hi, lo);
    lo *= 0.25;
    if (++guard > 200) break;  // lo -> 0 with rho < 1 cannot happen for f != 0
  }

  double rho_hi = rho(hi);
  for (int it = 0; it < 200 && ((hi - lo) > tol * hi || rho_hi < 1.0 - 10.0 * tol); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double rm = rho(mid);
    if (rm > 1.0) {
      lo = mid;
    } else {
      hi = mid;
      rho_hi = rm;
    }
  }
  return NormValue{hi, NormMethod::bisection, hi - lo};
}

// Orlicz norm via the Amemiya infimum inf_{k>0} (1 + rho(k f)) / k, equal to
// the dual-sup definition.  The objective is unimodal (rho(k f) is convex with
// value 0 at 0), so a coarse log-grid scan brackets the minimum and golden
// section refines it.  If saturation caps the scan the report carries the
// largest feasible k through the error bound.
inline NormValue orlicz_norm(const YoungFunction& psi, const SimpleFunction& f,
                             double tol = 1e-10) {
  if (!(tol > 0.0)) throw std::invalid_argument("orlicz_norm: tol must be positive");
  if (f.is_zero()) return NormValue{0.0, NormMethod::amemiya, 0.0};

  const double vmax = f.max_abs();
  const double lux = luxemburg_norm(psi, f, 1e-8).value;
  auto amemiya = [&](double k) { return (1.0 + modular_scaled(psi, f, k)) / k; };

  const double k_sat = 0.999 * psi.finite_arg_limit() / vmax;
  double k_lo = 1e-3 / lux;
  double k_hi = std::min(1e13 / lux, k_sat);
  if (k_hi <= k_lo) k_lo = k_hi / 1e6;

  std::vector<double> ks;
  for (double k = k_lo; k < k_hi; k *= 2.0) ks.push_back(k);
  ks.push_back(k_hi);

  std::size_t best = 0;
  double fbest = kInf;
  std::vector<double> fv(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    fv[i] = amemiya(ks[i]);
    if (fv[i] < fbest) {
      fbest = fv[i];
      best = i;
    }
  }

  if (best + 1 == ks.size()) {
    // Infimum approached as k grows (e.g. psi close to linear): the tail gap
    // of the Amemiya objective past k is at most 1/k.
    return NormValue{fbest, NormMethod::amemiya, 1.0 / ks.back()};
  }
  if (best == 0) {
    int guard = 0;
    while (best == 0 && ++guard < 60) {
      const double k = ks.front() * 0.25;
      ks.insert(ks.begin(), k);
      fv.insert(fv.begin(), amemiya(k));
      best = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
      fbest = fv[best];
    }
    if (best == 0) throw convergence_error("orlicz_norm: could not bracket the Amemiya minimum");
  }

  // golden section on [ks[best-1], ks[best+1]]
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = ks[best - 1];
  double b = ks[best + 1];
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = amemiya(x1);
  double f2 = amemiya(x2);
  fbest = std::min(fbest, std::min(f1, f2));
  for (int it = 0; it < 200 && (b - a) > tol * b; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = amemiya(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = amemiya(x2);
    }
    fbest = std::min(fbest, std::min(f1, f2));
  }
  const double edge = std::max(amemiya(a), amemiya(b));
  return NormValue{fbest, NormMethod::amemiya, std::max(0.0, edge - fbest)};
}

// Exhaustive small-instance reference for the dual-sup definition of the
// Orlicz norm: maximizes sum mass*f*g over per-atom grids of |g| directions,
// each candidate projected onto the constraint boundary rho_{psi*}(g) = 1 by a
// scalar bisection.  Test-only oracle; at most 4 atoms.
inline NormValue dual_norm_oracle(const YoungFunction& psi, const SimpleFunction& f) {
  if (f.size() > 4) throw std::invalid_argument("dual_norm_oracle: at most 4 atoms supported");
  if (f.is_zero()) return NormValue{0.0, NormMethod::dual_oracle, 0.0};

  std::vector<double> w;   // mass * |f| on active atoms
  std::vector<double> ms;  // masses of active atoms
  for (const Atom& a : f.atoms()) {
    if (a.value != 0.0) {
      w.push_back(a.mass * std::abs(a.value));
      ms.push_back(a.mass);
    }
  }
  const std::size_t k = w.size();

  auto conj_rho = [&](const std::vector<double>& g) {
    double r = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (g[i] == 0.0) continue;
      try {
        r += ms[i] * psi.conjugate(g[i]);
      } catch (const unbounded_conjugate_error&) {
        return kInf;
      }
      if (r > 1e6) return r;  // far past the constraint already
    }
    return r;
  };

  // scale a direction onto rho_{psi*} = 1
  auto project = [&](const std::vector<double>& u) -> double {
    double s_lo = 0.0, s_hi = 1.0;
    std::vector<double> g(k);
    auto rho_of = [&](double s) {
      for (std::size_t i = 0; i < k; ++i) g[i] = s * u[i];
      return conj_rho(g);
    };
    int guard = 0;
    while (rho_of(s_hi) < 1.0) {
      s_lo = s_hi;
      s_hi *= 2.0;
      if (++guard > 400) return 0.0;  // degenerate direction
    }
    for (int it = 0; it < 100 && (s_hi - s_lo) > 1e-13 * s_hi; ++it) {
      const double mid = 0.5 * (s_lo + s_hi);
      (rho_of(mid) <= 1.0 ? s_lo : s_hi) = mid;
    }
    return s_lo;
  };

  auto objective = [&](const std::vector<double>& u) {
    const double s = project(u);
    double v = 0.0;
    for (std::size_t i = 0; i < k; ++i) v += w[i] * s * u[i];
    return v;
  };

  const int grid_points = 13;
  std::vector<double> center(k, 0.5);
  double radius = 0.5;
  std::vector<double> best_u(k, 1.0);
  double best = objective(best_u);
  double prev_best = 0.0;

  for (int pass = 0; pass < 3; ++pass) {
    prev_best = best;
    std::vector<int> idx(k, 0);
    for (;;) {
      std::vector<double> u(k);
      bool nonzero = false;
      for (std::size_t i = 0; i < k; ++i) {
        const double lo = std::max(0.0, center[i] - radius);
        const double hi = center[i] + radius;
        u[i] = lo + (hi - lo) * idx[i] / double(grid_points - 1);
        nonzero = nonzero || u[i] > 0.0;
      }
      if (nonzero) {
        const double v = objective(u);
        if (v > best) {
          best = v;
          best_u = u;
        }
      }
      std::size_t d = 0;
      while (d < k && ++idx[d] == grid_points) idx[d++] = 0;
      if (d == k) break;
    }
    center = best_u;
    radius /= 6.0;
  }
  return NormValue{best, NormMethod::dual_oracle, std::abs(best - prev_best) + 1e-9 * best};
}

// Lorentz norm, exact on step rearrangements: for q < inf the integral is the
// closed-form sum over steps; for q = inf the sup of t^{1/p} f*(t) is attained
// at step right-endpoints since t^{1/p} increases on each constancy interval.
inline NormValue lorentz_norm(const LorentzIndex& idx, const SimpleFunction& f) {
  if (!idx.valid()) throw std::invalid_argument("lorentz_norm: need p in (1, inf), q in [1, inf]");
  if (f.is_zero()) return NormValue{0.0, NormMethod::step_quadrature, 0.0};
  const StepRearrangement r = rearrangement(f);
  if (idx.q_infinite()) {
    double m = 0.0;
    for (const RearrangementStep& s : r.steps)
      m = std::max(m, s.value * std::pow(s.t_end, 1.0 / idx.p));
    return NormValue{m, NormMethod::step_quadrature, 0.0};
  }
  const double qp = idx.q / idx.p;
  std::vector<double> terms(r.steps.size());
  double t_prev = 0.0;
  for (std::size_t i = 0; i < r.steps.size(); ++i) {
    const RearrangementStep& s = r.steps[i];
    terms[i] = detail::pow_abs(s.value, idx.q) * (idx.p / idx.q) *
               (std::pow(s.t_end, qp) - std::pow(t_prev, qp));
    t_prev = s.t_end;
  }
  const double sum = pairwise_sum(terms);
  return NormValue{std::pow(sum, 1.0 / idx.q), NormMethod::step_quadrature, 0.0};
}

}  // namespace orlicz
