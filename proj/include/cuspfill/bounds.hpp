#pragma once

#include <algorithm>
#include <array>
#include <initializer_list>
#include <iterator>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cuspfill/density.hpp"
#include "cuspfill/error.hpp"
#include "cuspfill/numerics.hpp"

namespace cuspfill {

struct Witness {
  double at = 0.0;  // r or theta
  double lhs = 0.0;
  double rhs = 0.0;
};

struct BoundReport {
  enum class Claim { TAYLOR_A, AS_EXPANSION, THETA_QUARTIC };

  Claim claim = Claim::TAYLOR_A;
  double domain_lo = 0.0;
  double domain_hi = 0.0;
  double max_violation = 0.0;  // <= 0 iff the claim held on the whole grid
  std::vector<Witness> witnesses;

  // Claim-specific figures; NaN where they do not apply.
  double r_taylor = std::numeric_limits<double>::quiet_NaN();
  double fitted_k = std::numeric_limits<double>::quiet_NaN();
  double fitted_k_refined = std::numeric_limits<double>::quiet_NaN();
  double limit = std::numeric_limits<double>::quiet_NaN();
  double limit_spread = std::numeric_limits<double>::quiet_NaN();

  bool holds() const { return max_violation <= 0.0; }
};

inline const char* to_string(BoundReport::Claim c) {
  switch (c) {
    case BoundReport::Claim::TAYLOR_A: return "TAYLOR_A";
    case BoundReport::Claim::AS_EXPANSION: return "AS_EXPANSION";
    case BoundReport::Claim::THETA_QUARTIC: return "THETA_QUARTIC";
  }
  return "?";
}

// Differences between u* and u_D in t = 1 - r.  Below t = 1e-4 the direct
// forms cancel catastrophically and the truncated series take over.
struct TaylorGaps {
  double d0;  // u* - u_D
  double e1;  // 1 - u*'/u_D'
  double e2;  // u*''/u_D'' - 1
};

inline TaylorGaps taylor_gaps(double r) {
  const double t = 1.0 - r;
  if (t < 1e-4) {
    const double t2 = t * t;
    auto horner = [t](std::initializer_list<double> c) {
      double acc = 0.0;
      for (auto it = std::rbegin(c); it != std::rend(c); ++it) acc = acc * t + *it;
      return acc;
    };
    return {t2 * horner({1.0 / 6, 1.0 / 6, 53.0 / 360, 23.0 / 180, 316.0 / 2835, 743.0 / 7560, 79519.0 / 907200}),
            t2 * horner({1.0 / 3, 2.0 / 3, 181.0 / 180, 27.0 / 20, 12847.0 / 7560, 388.0 / 189, 78089.0 / 32400}),
            t2 * horner({1.0 / 3, 1.0, 101.0 / 60, 20.0 / 9, 2467.0 / 945, 263.0 / 90, 366703.0 / 113400})};
  }
  const auto us = LogDensity::punctured();
  const auto ud = LogDensity::disk();
  return {u_eval(us, r, 0) - u_eval(ud, r, 0), 1.0 - u_eval(us, r, 1) / u_eval(ud, r, 1),
          u_eval(us, r, 2) / u_eval(ud, r, 2) - 1.0};
}

// Checks 0 < u*-u_D < A t^2, 1 - A t^2 < u*'/u_D' < 1 and 1 < u*''/u_D'' < 1 + A t^2
// on a grid log-spaced in t over [r_lo, 1 - 1e-8].  Violations are measured in
// units of t^2.  r_taylor is the smallest grid radius above which all hold.
inline BoundReport verify_taylor_bounds(double A, double r_lo, std::size_t n) {
  if (!(A > 1.0 / 3.0)) fail(ErrorKind::InvalidInput, "Taylor bounds need A > 1/3");
  if (!(r_lo > kInvE && r_lo < 1.0 - 1e-8)) fail(ErrorKind::InvalidInput, "r_lo must lie in (1/e, 1 - 1e-8)");
  if (n < 2) fail(ErrorKind::InvalidInput, "grid needs at least 2 points");
  const std::vector<double> r = boundary_grid(1.0 - r_lo, 1e-8, n);
  std::vector<double> viol(n);
  std::vector<std::array<double, 3>> item(n);
  parallel_for(n, [&](std::size_t i) {
    const double t = 1.0 - r[i];
    const TaylorGaps g = taylor_gaps(r[i]);
    const double q0 = g.d0 / (t * t), q1 = g.e1 / (t * t), q2 = g.e2 / (t * t);
    item[i] = {std::max(-q0, q0 - A), std::max(-q1, q1 - A), std::max(-q2, q2 - A)};
    viol[i] = std::max({item[i][0], item[i][1], item[i][2]});
  });

  BoundReport rep;
  rep.claim = BoundReport::Claim::TAYLOR_A;
  rep.domain_lo = r.front();
  rep.domain_hi = r.back();
  rep.max_violation = *std::max_element(viol.begin(), viol.end());
  std::size_t last_bad = n;
  for (std::size_t i = 0; i < n; ++i)
    if (viol[i] > 0.0) last_bad = i;
  rep.r_taylor = last_bad == n ? r.front() : (last_bad + 1 < n ? r[last_bad + 1] : 1.0);
  for (int k = 0; k < 3; ++k) {
    std::size_t worst = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (item[i][k] > item[worst][k]) worst = i;
    const double t = 1.0 - r[worst];
    const TaylorGaps g = taylor_gaps(r[worst]);
    const double gap = k == 0 ? g.d0 : (k == 1 ? g.e1 : g.e2);
    rep.witnesses.push_back({r[worst], gap, A * t * t});
  }
  return rep;
}

// Squared density ratio (ds*/ds_D)^2 = (1 - r^2)^2 / (4 r^2 log^2 r).
inline double as_ratio(double r) {
  if (!(r > 0.0 && r < 1.0)) fail(ErrorKind::InvalidInput, "as_ratio: r must lie in (0, 1)");
  const double L = detail::neg_log(r);
  const double g = (1.0 - r) * (1.0 + r);
  return g * g / (4.0 * r * r * L * L);
}

// as_ratio(r) - 1 - t^2/3, from the series in t = 1 - r below t = 1e-2.
inline double as_residual(double r) {
  const double t = 1.0 - r;
  if (t < 1e-2) {
    static constexpr double c[] = {1.0 / 3,           7.0 / 20,           11.0 / 30,          1447.0 / 3780,
                                   251.0 / 630,       93791.0 / 226800,   24281.0 / 56700,    220811.0 / 498960,
                                   32539.0 / 71280};
    double acc = 0.0;
    for (int k = 8; k >= 0; --k) acc = acc * t + c[k];
    return t * t * t * acc;
  }
  return as_ratio(r) - 1.0 - t * t / 3.0;
}

// Fits K = sup |residual| / t^3 over [r_lo, 1 - 1e-6] on n points and on 2n
// points; the claim holds when the fit is finite and moves by less than 1e-3
// relative under the refinement.
inline BoundReport verify_as_expansion(double r_lo, std::size_t n) {
  if (!(r_lo > 0.5 && r_lo < 1.0 - 1e-6)) fail(ErrorKind::InvalidInput, "r_lo must lie in (0.5, 1 - 1e-6)");
  if (n < 2) fail(ErrorKind::InvalidInput, "grid needs at least 2 points");
  auto fit = [&](std::size_t m, std::vector<Witness>* w) {
    const std::vector<double> r = boundary_grid(1.0 - r_lo, 1e-6, m);
    double k = 0.0;
    for (double ri : r) {
      const double t = 1.0 - ri;
      const double res = as_residual(ri);
      k = std::max(k, std::abs(res) / (t * t * t));
      if (w && w->size() < 16 && (w->empty() || ri - w->back().at > (1.0 - r_lo) / 16)) w->push_back({ri, res, t * t * t});
    }
    return k;
  };
  BoundReport rep;
  rep.claim = BoundReport::Claim::AS_EXPANSION;
  rep.domain_lo = r_lo;
  rep.domain_hi = 1.0 - 1e-6;
  rep.fitted_k = fit(n, &rep.witnesses);
  rep.fitted_k_refined = fit(2 * n, nullptr);
  for (auto& w : rep.witnesses) w.rhs *= rep.fitted_k;
  const double drift = std::abs(rep.fitted_k_refined - rep.fitted_k) / rep.fitted_k;
  rep.max_violation = std::isfinite(rep.fitted_k) ? drift - 1e-3 : std::numeric_limits<double>::infinity();
  return rep;
}

// The radius r* in (1/e, 1) with as_ratio(r*) = 1 + eps.
inline double min_radius_for_eps(double eps) {
  if (!(eps > 0.0 && eps < 0.5)) fail(ErrorKind::InvalidInput, "min_radius_for_eps: eps must lie in (0, 0.5)");
  auto f = [eps](double r) { return as_ratio(r) - 1.0 - eps; };
  const double hi = 1.0 - 1e-9;
  if (!(f(kInvE) > 0.0) || !(f(hi) < 0.0))
    fail(ErrorKind::InvalidInput, "as_ratio = 1 + eps has no root in (1/e, 1)");
  return bisect(f, kInvE, hi, 1e-13);
}

inline double c2_empirical(double eps) { return (1.0 - min_radius_for_eps(eps)) / std::sqrt(eps); }

namespace detail {
// Defined on (-pi/2, pi/2); the derivative estimates need negative angles.
inline double theta_gap_raw(double th) {
  const double c = std::cos(th);
  return kPi * (1.0 - c) / (kPi + std::tan(th) - th) + c * std::log(c);
}
}  // namespace detail

// g = pi (1 - cos t) / (pi + tan t - t) + cos t log cos t.
inline double theta_gap(double theta) {
  if (!(theta > 0.0 && theta < kPi / 2)) fail(ErrorKind::InvalidInput, "theta_gap: theta must lie in (0, pi/2)");
  return detail::theta_gap_raw(theta);
}

// Central-difference estimate of the k-th derivative of g at 0, k = 1..4.
inline double theta_gap_derivative_fd(int k, double h) {
  auto g = detail::theta_gap_raw;
  switch (k) {
    case 1: return (g(h) - g(-h)) / (2 * h);
    case 2: return (g(h) - 2 * g(0) + g(-h)) / (h * h);
    case 3: return (g(2 * h) - 2 * g(h) + 2 * g(-h) - g(-2 * h)) / (2 * h * h * h);
    default: return (g(2 * h) - 4 * g(h) + 6 * g(0) - 4 * g(-h) + g(-2 * h)) / (h * h * h * h);
  }
}

inline RichardsonResult theta_gap_derivative(int k, double h0 = 1e-2, int levels = 4) {
  return richardson([k](double h) { return theta_gap_derivative_fd(k, h); }, h0, levels);
}

// Derivatives 1..3 at 0 must vanish (|.| < 1e-6), the fourth must be positive
// and agree to three significant digits between two step sweeps, and g must
// stay positive on (0, 1].
inline BoundReport verify_theta_quartic() {
  BoundReport rep;
  rep.claim = BoundReport::Claim::THETA_QUARTIC;
  rep.domain_lo = 0.0;
  rep.domain_hi = 1.0;
  double viol = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 3; ++k) {
    const double d = theta_gap_derivative(k).value;
    rep.witnesses.push_back({static_cast<double>(k), d, 0.0});
    viol = std::max(viol, std::abs(d) - 1e-6);
  }
  const double g4 = theta_gap_derivative(4, 1e-2, 4).value;
  const double g4b = theta_gap_derivative(4, 5e-3, 3).value;
  rep.limit = g4;
  rep.limit_spread = std::abs(g4 - g4b);
  rep.witnesses.push_back({4.0, g4, g4b});
  viol = std::max(viol, -g4);
  viol = std::max(viol, rep.limit_spread - 5e-4 * std::abs(g4));
  for (double th : linspace(1e-3, 1.0, 1000)) {
    const double g = theta_gap(th);
    if (!(g > 0.0)) rep.witnesses.push_back({th, g, 0.0});
    viol = std::max(viol, -g);
  }
  rep.max_violation = viol;
  return rep;
}

}  // namespace cuspfill
