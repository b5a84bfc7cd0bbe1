#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace orlicz {

inline constexpr const char* tool_version = "0.1.0";

// Thrown when an evaluation would leave the representable range.  Carries the
// argument and the threshold; callers that can recover (bracket expansion,
// grid truncation) catch it, everything else propagates.
class saturation_error : public std::runtime_error {
 public:
  saturation_error(double arg, double threshold)
      : std::runtime_error("evaluation saturates: argument " + std::to_string(arg) +
                           " exceeds threshold " + std::to_string(threshold)),
        arg_(arg),
        threshold_(threshold) {}
  double arg() const noexcept { return arg_; }
  double threshold() const noexcept { return threshold_; }

 private:
  double arg_;
  double threshold_;
};

// The Young complement is +infinity past the supremum of the derivative.
class unbounded_conjugate_error : public std::runtime_error {
 public:
  unbounded_conjugate_error(double y, double slope_sup)
      : std::runtime_error("conjugate is infinite at y = " + std::to_string(y) +
                           " (sup of derivative is " + std::to_string(slope_sup) + ")"),
        y_(y),
        slope_sup_(slope_sup) {}
  double y() const noexcept { return y_; }
  double slope_sup() const noexcept { return slope_sup_; }

 private:
  double y_;
  double slope_sup_;
};

class incompatible_domains_error : public std::runtime_error {
 public:
  explicit incompatible_domains_error(const std::string& what) : std::runtime_error(what) {}
};

class atom_budget_error : public std::runtime_error {
 public:
  atom_budget_error(std::uint64_t needed, std::uint64_t budget)
      : std::runtime_error("atom count " + std::to_string(needed) + " exceeds budget " +
                           std::to_string(budget) + "; use Monte Carlo sampling instead"),
        needed_(needed),
        budget_(budget) {}
  std::uint64_t needed() const noexcept { return needed_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t needed_;
  std::uint64_t budget_;
};

class convergence_error : public std::runtime_error {
 public:
  explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

template <class F>
double pairwise_sum_impl(std::size_t lo, std::size_t hi, F& f) {
  const std::size_t n = hi - lo;
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    return s;
  }
  const std::size_t mid = lo + n / 2;
  return pairwise_sum_impl(lo, mid, f) + pairwise_sum_impl(mid, hi, f);
}

}  // namespace detail

// Pairwise summation in index order: deterministic and accurate enough for the
// 1e-12 identities checked on 2^N-atom enumerations.
template <class F>
double pairwise_sum(std::size_t n, F f) {
  return n == 0 ? 0.0 : detail::pairwise_sum_impl(0, n, f);
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.size(), [&](std::size_t i) { return v[i]; });
}

inline unsigned thread_cap_from_env() {
  if (const char* s = std::getenv("ORLICZ_LAB_THREADS")) {
    const long v = std::strtol(s, nullptr, 10);
    if (v >= 1 && v <= 1024) return static_cast<unsigned>(v);
  }
  return 0;  // unset
}

inline unsigned effective_threads(int requested) {
  if (requested >= 1) return static_cast<unsigned>(requested);
  if (const unsigned env = thread_cap_from_env(); env != 0) return env;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Runs fn(i) for i in [0, n).  Each index owns its result slot, so results are
// independent of scheduling; the first exception wins and is rethrown.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F fn) {
  if (n == 0) return;
  threads = std::max<unsigned>(1, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string to_hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Fixed 12-significant-digit decimal, the CLI's output precision.
inline std::string format_sig12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace orlicz
