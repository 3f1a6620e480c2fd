#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cuspfill/bounds.hpp"
#include "cuspfill/density.hpp"
#include "cuspfill/error.hpp"
#include "cuspfill/numerics.hpp"
#include "cuspfill/profile.hpp"

namespace cuspfill {

// Negatively curved completion inside B_{r0}: u'' = c0 + c1 r^p below r0 and
// u* above, with (c0, c1) fixed by C^2 contact at r0.  p is the smallest
// exponent that keeps c0 > 0, so the curvature at the origin is negative too.
inline RadialProfile build_completion(double r0, int p_cap = 512) {
  if (!(r0 > 0.0 && r0 <= kRadiusCap)) fail(ErrorKind::InvalidInput, "r0 must lie in (0, 1)", r0);
  if (r0 <= std::exp(-1.0))
    fail(ErrorKind::NecessityViolation,
         "r0 = " + fmt17(r0) + " <= 1/e: the horocycle length " + fmt17(length_horocycle(r0)) +
             " does not exceed 2*pi, so the total geodesic curvature bound fails",
         r0);
  const auto us = LogDensity::punctured();
  const double W = u_eval(us, r0, 2);
  const double V = u_eval(us, r0, 1);
  for (int p = 1; p <= p_cap; ++p) {
    const double a = (W - V / r0) * (p + 1.0) / p;  // c1 r0^p
    const double c0 = W - a;
    if (!(c0 > 0.0)) continue;
    PolyW w{c0, a / std::pow(r0, p), p, r0, u_eval(us, r0, 0)};
    if (!std::isfinite(w.c1)) break;
    return RadialProfile({{0.0, r0, w}, {r0, 1.0, us}});
  }
  fail(ErrorKind::ConstructionInfeasible, "no exponent p <= " + std::to_string(p_cap) + " keeps w positive", r0);
}

struct EpsParams {
  double eps = 0.0;
  double A = 0.4;
  double eps_internal = 0.0;  // eps / 4, the target actually built
  double r_eps = 0.0;         // 1 - sqrt(eps_internal / A); u* from here on
  double delta = 0.0;         // ramp window is [r_eps - 2 delta, r_eps]
  double C1 = 0.0;            // 1 / (2 sqrt(A)), so 1 - r_eps = C1 sqrt(eps)
  double C2 = std::numeric_limits<double>::quiet_NaN();  // (1 - r*) / sqrt(eps), r* from as_ratio
  double k_inner = 1.0;       // inner curvature is -k_inner
  double disk_radius = 1.0;
  int steps = 0;
};

struct EpsOptions {
  double window_frac = 0.02;  // ramp width as a fraction of 1 - r_eps
  int steps = 128;
};

namespace detail {

struct EpsAttempt {
  std::optional<RadialProfile> profile;
  EpsParams params;
  std::string why;
};

// Inner piece: a disk of curvature -K, u = -log(K)/2 + log(2 rho / (rho^2 - r^2)),
// matched in u and u' at the ramp's inner edge.  u'' then agrees too because
// both sides solve the same equation with curvature -K there.
inline double inner_mismatch(double a, double b, double K, double ub, double dub, int steps, double* rho_out) {
  CurvatureRamp ramp(a, b, K, ub, dub, steps);
  if (!ramp.ok()) return std::numeric_limits<double>::quiet_NaN();
  const double ua = ramp.u(a, 0), dua = ramp.u(a, 1);
  if (!(dua > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double rho2 = a * a + 2.0 * a / dua;
  const double rho = std::sqrt(rho2);
  if (rho_out) *rho_out = rho;
  return -0.5 * std::log(K) + std::log(2.0 * rho / (rho2 - a * a)) - ua;
}

inline EpsAttempt attempt_eps(double eps, double A, const EpsOptions& opt) {
  EpsAttempt out;
  EpsParams& P = out.params;
  P.eps = eps;
  P.A = A;
  P.eps_internal = eps / 4.0;
  const double t = std::sqrt(P.eps_internal / A);
  P.r_eps = 1.0 - t;
  P.delta = 0.5 * opt.window_frac * t;
  P.C1 = 1.0 / (2.0 * std::sqrt(A));
  P.steps = opt.steps;
  if (eps < 0.38) P.C2 = c2_empirical(eps);
  const double b = P.r_eps, a = b - 2.0 * P.delta;
  if (!(a > kInvE)) {
    out.why = "ramp window reaches 1/e";
    return out;
  }
  const auto us = LogDensity::punctured();
  const double ub = u_eval(us, b, 0), dub = u_eval(us, b, 1);
  auto f = [&](double K) { return inner_mismatch(a, b, K, ub, dub, opt.steps, nullptr); };

  // The admissible root is the one closest to K = 1; scan 1 - K log-spaced.
  std::vector<double> ks{1.0};
  for (double s : logspace(1e-12, 0.5, 200)) ks.push_back(1.0 - s);
  double k_hi = std::numeric_limits<double>::quiet_NaN(), k_lo = k_hi;
  double prev = f(ks[0]);
  for (std::size_t i = 1; i < ks.size(); ++i) {
    const double cur = f(ks[i]);
    if (std::isfinite(prev) && std::isfinite(cur) && (prev < 0) != (cur < 0)) {
      k_hi = ks[i - 1];
      k_lo = ks[i];
      break;
    }
    prev = cur;
  }
  if (!std::isfinite(k_hi)) {
    out.why = "no inner disk matches the ramp";
    return out;
  }
  const double K = bisect(f, k_lo, k_hi, 1e-15);
  P.k_inner = K;
  if (!(K > 1.0 / (1.0 + eps))) {
    out.why = "inner curvature -" + fmt17(K) + " falls outside the band";
    return out;
  }
  double rho = 1.0;
  inner_mismatch(a, b, K, ub, dub, opt.steps, &rho);
  P.disk_radius = rho;
  out.profile = RadialProfile({{0.0, a, LogDensity::disk_shifted(-0.5 * std::log(K), rho)},
                               {a, b, CurvatureRamp(a, b, K, ub, dub, opt.steps)},
                               {b, 1.0, us}});
  return out;
}

}  // namespace detail

// Pinched completion with curvature in (-(1+eps), -1/(1+eps)), built for the
// internal target eps/4: u* on [r_eps, 1), a curvature ramp from -1 down to
// -k_inner just inside r_eps, and a scaled disk below.
inline std::pair<RadialProfile, EpsParams> build_eps_completion(double eps, double A = 0.4, EpsOptions opt = {}) {
  if (!(eps > 0.0 && eps < 1.0)) fail(ErrorKind::InvalidInput, "eps must lie in (0, 1)");
  if (!(A > 1.0 / 3.0)) fail(ErrorKind::InvalidInput, "A must exceed 1/3");
  if (!(opt.window_frac > 0.0 && opt.window_frac <= 1.0) || opt.steps < 2)
    fail(ErrorKind::InvalidInput, "bad ramp options");
  if (std::sqrt(eps / 4.0 / A) < 1e-9) fail(ErrorKind::InvalidInput, "eps too small to resolve near r = 1");
  auto att = detail::attempt_eps(eps, A, opt);
  if (att.profile) return {std::move(*att.profile), att.params};

  double lo = eps;
  bool found = false;
  for (int i = 0; i < 60 && lo > 1e-12; ++i) {
    lo *= 0.5;
    if (detail::attempt_eps(lo, A, opt).profile) {
      found = true;
      break;
    }
  }
  double best = 0.0;
  if (found) {
    double hi = eps;
    for (int i = 0; i < 40 && hi - lo > 1e-6 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      (detail::attempt_eps(mid, A, opt).profile ? lo : hi) = mid;
    }
    best = lo;
  }
  fail(ErrorKind::EpsTooLarge,
       "eps = " + fmt17(eps) + " is infeasible for A = " + fmt17(A) + " (" + att.why + "); largest feasible eps ~ " +
           fmt17(best),
       best);
}

struct CurvatureReport {
  std::vector<double> radii;
  std::vector<double> kappa;
  double kappa_min = 0.0;
  double kappa_max = 0.0;
  double arg_min = 0.0;
  double arg_max = 0.0;
  bool negative = false;  // kappa_max < 0
};

// Grid used for every curvature check: half log-spaced in r on [1e-6, 0.5],
// half log-spaced in 1 - r on [1e-6, 0.5], plus each join and 64 points per
// segment, plus r = 0 when the profile is defined there.
inline std::vector<double> verification_grid(const RadialProfile& profile, std::size_t n) {
  const std::size_t n1 = n / 2, n2 = n - n1;
  std::vector<double> r = logspace(1e-6, 0.5, std::max<std::size_t>(n1, 2));
  for (double x : boundary_grid(0.5, 1e-6, std::max<std::size_t>(n2, 2))) r.push_back(x);
  const double top = 1.0 - 1e-6;
  for (const auto& s : profile.segments()) {
    const double lo = std::max(s.r_lo, 1e-6), hi = std::min(s.r_hi, top);
    if (lo >= hi) continue;
    for (double x : linspace(lo, hi, 64)) r.push_back(x);
  }
  if (profile.defined_at_zero()) r.push_back(0.0);
  sort_unique(r);
  return r;
}

template <class Eval>
CurvatureReport curvature_report(const std::vector<double>& radii, Eval&& kappa_at) {
  CurvatureReport rep;
  rep.radii = radii;
  rep.kappa.resize(radii.size());
  parallel_for(radii.size(), [&](std::size_t i) { rep.kappa[i] = kappa_at(radii[i]); });
  std::size_t imin = 0, imax = 0;
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (rep.kappa[i] < rep.kappa[imin]) imin = i;
    if (rep.kappa[i] > rep.kappa[imax]) imax = i;
  }
  rep.kappa_min = rep.kappa[imin];
  rep.kappa_max = rep.kappa[imax];
  rep.arg_min = radii[imin];
  rep.arg_max = radii[imax];
  rep.negative = rep.kappa_max < 0.0;
  return rep;
}

inline CurvatureReport verify_negative_curvature(const RadialProfile& profile, std::size_t n_grid) {
  if (n_grid < 2) fail(ErrorKind::InvalidInput, "n_grid must be at least 2");
  return curvature_report(verification_grid(profile, n_grid), [&](double r) { return curvature_radial(profile, r); });
}

inline std::pair<bool, CurvatureReport> verify_curvature_band(const RadialProfile& profile, double eps,
                                                               std::size_t n_grid) {
  auto rep = verify_negative_curvature(profile, n_grid);
  const bool inside = rep.kappa_min > -(1.0 + eps) && rep.kappa_max < -1.0 / (1.0 + eps);
  return {inside, std::move(rep)};
}

inline std::string to_csv(const CurvatureReport& rep) {
  std::ostringstream os;
  os << "r,kappa\n";
  for (std::size_t i = 0; i < rep.radii.size(); ++i) os << fmt17(rep.radii[i]) << ',' << fmt17(rep.kappa[i]) << '\n';
  return os.str();
}

}  // namespace cuspfill
