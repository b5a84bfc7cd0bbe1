#pragma once

#include <cmath>
#include <cstdint>

namespace orlicz::rng {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based generator: the draw at (seed, stream, index) is a pure hash
// of the key, so sampling is reproducible and parallelizable with no shared
// state.
inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t h = splitmix64(seed ^ 0x8e2f9d4b6a1c3e57ULL);
  h = splitmix64(h ^ (stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
  h = splitmix64(h ^ (index * 0x9e3779b97f4a7c15ULL + 0x6a09e667f3bcc909ULL));
  return splitmix64(h);
}

// uniform in [0, 1), 53 significant bits
inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return static_cast<double>(counter_hash(seed, stream, index) >> 11) * 0x1.0p-53;
}

inline double sign_pm1(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return (counter_hash(seed, stream, index) >> 63) ? 1.0 : -1.0;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

inline double normal_pdf(double x) {
  return 0.3989422804014326779 * std::exp(-0.5 * x * x);
}

// Inverse standard normal CDF: Acklam's rational approximation with one
// Halley refinement through erfc, good to full double precision on (0, 1).
inline double normal_inv(double u) {
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (u < plow) {
    const double q = std::sqrt(-2.0 * std::log(u));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (u <= 1.0 - plow) {
    const double q = u - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - u));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = normal_cdf(x) - u;
  const double r = e * 2.5066282746310002 * std::exp(0.5 * x * x);
  return x - r / (1.0 + 0.5 * x * r);
}

}  // namespace orlicz::rng
