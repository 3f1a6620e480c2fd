#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "cuspfill/error.hpp"

namespace cuspfill {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kInvE = 0.36787944117144233;  // exp(-1)

// Largest radius any evaluator accepts; the densities blow up at r = 1.
inline constexpr double kRadiusCap = 1.0 - 1e-12;

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Bisection on a bracketing interval.  Stops when the bracket is narrower than
// `tol` or after `max_iter` halvings.  f(lo) and f(hi) must differ in sign.
template <class F>
double bisect(F&& f, double lo, double hi, double tol = 1e-12, int max_iter = 400) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0) == (fhi < 0))
    fail(ErrorKind::InvalidInput, "bisect: no sign change on [" + fmt17(lo) + ", " + fmt17(hi) + "]");
  for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
    double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

// Golden-section search for a local maximum of a unimodal f on [a, b].
template <class F>
double golden_section_max(F&& f, double a, double b, double tol = 1e-12) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

struct RichardsonResult {
  double value;
  double error;  // difference between the last two diagonal entries
};

// Richardson extrapolation of estimates whose error expands in even powers of
// the step: D(h) = D + a1 h^2 + a2 h^4 + ...  Steps are h0, h0/2, h0/4, ...
template <class F>
RichardsonResult richardson(F&& estimate, double h0, int levels) {
  std::vector<std::vector<double>> t(levels);
  double h = h0;
  for (int i = 0; i < levels; ++i, h *= 0.5) {
    t[i].resize(i + 1);
    t[i][0] = estimate(h);
    double factor = 4.0;
    for (int j = 1; j <= i; ++j, factor *= 4.0)
      t[i][j] = t[i][j - 1] + (t[i][j - 1] - t[i - 1][j - 1]) / (factor - 1.0);
  }
  double last = t[levels - 1][levels - 1];
  double prev = levels > 1 ? t[levels - 2][levels - 2] : last;
  return {last, std::abs(last - prev)};
}

template <class F>
void parallel_for(std::size_t n, F&& body) {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  std::size_t workers = std::min<std::size_t>(hw, (n + 1023) / 1024);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      std::size_t lo = n * w / workers, hi = n * (w + 1) / workers;
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (std::size_t i = 0; i < n; ++i)
    v[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

inline std::vector<double> logspace(double lo, double hi, std::size_t n) {
  std::vector<double> v = linspace(std::log(lo), std::log(hi), n);
  for (auto& x : v) x = std::exp(x);
  if (n > 0) {
    v.front() = lo;
    v.back() = hi;
  }
  return v;
}

// Radii r_i = 1 - t_i with t log-spaced from t_hi down to t_lo.
inline std::vector<double> boundary_grid(double t_hi, double t_lo, std::size_t n) {
  std::vector<double> t = logspace(t_hi, t_lo, n);
  for (auto& x : t) x = 1.0 - x;
  return t;
}

inline void sort_unique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

inline double smoothstep(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

}  // namespace cuspfill
