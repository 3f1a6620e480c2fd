#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cuspfill/density.hpp"
#include "cuspfill/error.hpp"
#include "cuspfill/numerics.hpp"

namespace cuspfill {

// Boundary curves around the cusp.
//   Horocycle      |z| = r.
//   SlitHorocycle  B_{R2} minus the sector R1 < |z| < R2, |arg z| < theta.
//   GeoHoro        in the strip 0 <= x < 1 of H^2: the geodesic arc of radius R
//                  centred at (1/2, 0) above height y = R cos(theta), closed by
//                  the horocyclic segment at height y.
//   Sampled        closed polyline in D* winding once around 0.
struct Horocycle {
  double r = 0.5;
};
struct SlitHorocycle {
  double R1 = 0.1;
  double R2 = 0.5;
  double theta = 1.0;
};
struct GeoHoro {
  double R = 0.2;
  double theta = 0.8;
  double height() const { return R * std::cos(theta); }
};
struct Sampled {
  std::vector<Point> points;
  bool closed = true;  // false: the last point repeats the first
};

struct CurveSpec {
  std::variant<Horocycle, SlitHorocycle, GeoHoro, Sampled> family;

  static CurveSpec horocycle(double r) { return {Horocycle{r}}; }
  static CurveSpec slit(double R1, double R2, double theta) { return {SlitHorocycle{R1, R2, theta}}; }
  static CurveSpec geo_horo(double R, double theta) { return {GeoHoro{R, theta}}; }
  static CurveSpec sampled(std::vector<Point> pts, bool closed = true) { return {Sampled{std::move(pts), closed}}; }

  const char* name() const {
    switch (family.index()) {
      case 0: return "HOROCYCLE";
      case 1: return "SLIT_HOROCYCLE";
      case 2: return "GEO_HORO";
      default: return "SAMPLED";
    }
  }
};

inline void validate(const CurveSpec& c) {
  auto bad = [](const std::string& m) { fail(ErrorKind::InvalidInput, m); };
  if (const auto* h = std::get_if<Horocycle>(&c.family)) {
    if (!(h->r > 0.0 && h->r < 1.0)) bad("horocycle radius must lie in (0, 1)");
  } else if (const auto* s = std::get_if<SlitHorocycle>(&c.family)) {
    if (!(s->R1 > 0.0 && s->R1 < s->R2 && s->R2 < 1.0)) bad("slit radii need 0 < R1 < R2 < 1");
    if (!(s->theta > 0.0 && s->theta < kPi)) bad("slit half-angle must lie in (0, pi)");
  } else if (const auto* g = std::get_if<GeoHoro>(&c.family)) {
    if (!(g->theta > 0.0 && g->theta < kPi / 2)) bad("geodesic angle must lie in (0, pi/2)");
    if (!(g->R > 0.0 && std::isfinite(g->R))) bad("geodesic radius must be positive");
    if (!(1.0 - 2.0 * g->R * std::sin(g->theta) > 0.0)) bad("horocyclic part has non-positive length: 1 - 2 R sin(theta) <= 0");
  }
}

namespace detail {

struct PolyInfo {
  std::vector<Point> pts;  // without the closing repeat
  int winding = 0;
};

inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }

inline bool segments_touch(Point p1, Point p2, Point q1, Point q2) {
  auto orient = [](Point a, Point b, Point c) { return cross({b.x - a.x, b.y - a.y}, {c.x - a.x, c.y - a.y}); };
  auto on_seg = [](Point a, Point b, Point c) {
    return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= c.y && c.y <= std::max(a.y, b.y);
  };
  const double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2), d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  return (d1 == 0 && on_seg(q1, q2, p1)) || (d2 == 0 && on_seg(q1, q2, p2)) || (d3 == 0 && on_seg(p1, p2, q1)) ||
         (d4 == 0 && on_seg(p1, p2, q2));
}

inline double dist_to_origin(Point a, Point b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double s = std::clamp(-(a.x * dx + a.y * dy) / (dx * dx + dy * dy), 0.0, 1.0);
  return std::hypot(a.x + s * dx, a.y + s * dy);
}

inline PolyInfo check_polyline(const Sampled& s) {
  auto bad = [](const std::string& m) { fail(ErrorKind::InvalidCurve, m); };
  PolyInfo info;
  info.pts = s.points;
  if (!s.closed) {
    if (info.pts.size() < 2 || info.pts.front().x != info.pts.back().x || info.pts.front().y != info.pts.back().y)
      bad("open polyline: last point must repeat the first");
    info.pts.pop_back();
  }
  const auto& p = info.pts;
  const std::size_t n = p.size();
  if (n < 3) bad("polyline needs at least 3 distinct vertices");
  for (const auto& q : p) {
    const double m = std::hypot(q.x, q.y);
    if (!(m > 0.0 && m < 1.0) || !std::isfinite(m)) bad("polyline vertex outside the punctured disk");
  }
  double turn = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = p[i], b = p[(i + 1) % n];
    if (a.x == b.x && a.y == b.y) bad("repeated consecutive vertex");
    if (dist_to_origin(a, b) < 1e-12) bad("polyline passes through the puncture");
    turn += std::atan2(cross(a, b), a.x * b.x + a.y * b.y);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_touch(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n])) bad("polyline is not simple");
    }
  info.winding = static_cast<int>(std::lround(turn / kTwoPi));
  if (std::abs(info.winding) != 1) bad("polyline does not wind once around 0");
  return info;
}

// Hyperbolic area of the region bounded by a polyline around the cusp.  The
// form (1/L(r)) dphi, L = -log r, has exterior derivative lambda*^2 dA and
// vanishes at the puncture, so Green's theorem reduces the area to a line
// integral.
inline double polyline_area(const PolyInfo& info) {
  using boost::math::quadrature::gauss_kronrod;
  const auto& p = info.pts;
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Point a = p[i], b = p[(i + 1) % p.size()];
    const double dx = b.x - a.x, dy = b.y - a.y;
    auto f = [&](double s) {
      const double x = a.x + s * dx, y = a.y + s * dy;
      const double r2 = x * x + y * y;
      return (x * dy - y * dx) / (r2 * neg_log(std::sqrt(r2)));
    };
    total += gauss_kronrod<double, 31>::integrate(f, 0.0, 1.0, 15, 1e-13);
  }
  return info.winding * total;
}

}  // namespace detail

inline double total_geodesic_curvature(const CurveSpec& c) {
  validate(c);
  if (const auto* h = std::get_if<Horocycle>(&c.family)) return length_horocycle(h->r);
  if (const auto* s = std::get_if<SlitHorocycle>(&c.family)) {
    const double L1 = detail::neg_log(s->R1), L2 = detail::neg_log(s->R2);
    return kTwoPi / L2 - 2.0 * s->theta * (1.0 / L2 - 1.0 / L1);
  }
  if (const auto* g = std::get_if<GeoHoro>(&c.family))
    return (1.0 - 2.0 * g->R * std::sin(g->theta)) / g->height() + 2.0 * g->theta;
  return detail::polyline_area(detail::check_polyline(std::get<Sampled>(c.family)));
}

inline bool check_gauss_bonnet(const CurveSpec& c) { return total_geodesic_curvature(c) > kTwoPi; }

struct MaxPrincipleResult {
  double z0_modulus = 0.0;
  double u_star_at_max = 0.0;
  bool applies = false;
};

struct GromovResult {
  bool evaluated = false;
  double l_alpha = std::numeric_limits<double>::quiet_NaN();        // geodesic arc length
  double l_alpha_paper = std::numeric_limits<double>::quiet_NaN();  // arccosh(1 / cos^2 theta)
  double l_beta = std::numeric_limits<double>::quiet_NaN();         // horocyclic segment length
  bool shortcut = false;        // l_beta < l_alpha
  bool shortcut_paper = false;  // l_beta < l_alpha_paper
  bool gb_passes = false;
  bool applies = false;         // shortcut && gb_passes
};

namespace detail {

struct Candidate {
  double modulus;
  double value;
};

inline constexpr double kTieTol = 1e-12;

inline MaxPrincipleResult decide_max(const std::vector<Candidate>& cands) {
  MaxPrincipleResult res;
  const Candidate* best = &cands.front();
  for (const auto& c : cands)
    if (c.value > best->value) best = &c;
  res.z0_modulus = best->modulus;
  res.u_star_at_max = best->value;
  bool below = false, above = false;
  for (const auto& c : cands)
    if (c.value >= best->value - kTieTol) (c.modulus < kInvE ? below : above) = true;
  res.applies = best->modulus < kInvE && !(below && above);
  return res;
}

// u* at modulus e^{-2 pi Y}: 2 pi Y - log(2 pi Y).
inline double u_star_at_height(double Y) { return kTwoPi * Y - std::log(kTwoPi * Y); }

}  // namespace detail

// lambda* is radial and u* is convex in the modulus with its minimum at 1/e,
// so along each family the maximum sits at an extreme modulus.
inline MaxPrincipleResult check_max_principle(const CurveSpec& c) {
  validate(c);
  const auto us = LogDensity::punctured();
  std::vector<detail::Candidate> cands;
  if (const auto* h = std::get_if<Horocycle>(&c.family)) {
    cands.push_back({h->r, u_eval(us, h->r, 0)});
  } else if (const auto* s = std::get_if<SlitHorocycle>(&c.family)) {
    cands.push_back({s->R1, u_eval(us, s->R1, 0)});
    cands.push_back({s->R2, u_eval(us, s->R2, 0)});
  } else if (const auto* g = std::get_if<GeoHoro>(&c.family)) {
    cands.push_back({std::exp(-kTwoPi * g->R), detail::u_star_at_height(g->R)});
    cands.push_back({std::exp(-kTwoPi * g->height()), detail::u_star_at_height(g->height())});
  } else {
    // Along a chord the modulus is extreme at an endpoint or at the point
    // closest to 0; those candidates are exact.
    const auto info = detail::check_polyline(std::get<Sampled>(c.family));
    const auto& p = info.pts;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const Point a = p[i], b = p[(i + 1) % p.size()];
      const double ma = std::hypot(a.x, a.y);
      cands.push_back({ma, u_eval(us, ma, 0)});
      const double m = detail::dist_to_origin(a, b);
      cands.push_back({m, u_eval(us, m, 0)});
    }
  }
  return detail::decide_max(cands);
}

// Two arcs between the corners: the geodesic alpha, of length
// 2 artanh(sin theta), and the horocyclic segment beta, of length
// (1 - 2 R sin theta) / y.  beta shorter than alpha gives two geodesics in one
// homotopy class once the metric is extended with negative curvature.
inline GromovResult check_gromov(const CurveSpec& c) {
  validate(c);
  GromovResult res;
  const auto* g = std::get_if<GeoHoro>(&c.family);
  if (!g) return res;
  res.evaluated = true;
  const double ct = std::cos(g->theta);
  res.l_alpha = 2.0 * std::atanh(std::sin(g->theta));
  res.l_alpha_paper = std::acosh(1.0 / (ct * ct));
  res.l_beta = 1.0 / (g->R * ct) - 2.0 * std::tan(g->theta);
  res.shortcut = res.l_beta < res.l_alpha;
  res.shortcut_paper = res.l_beta < res.l_alpha_paper;
  res.gb_passes = check_gauss_bonnet(c);
  res.applies = res.shortcut && res.gb_passes;
  return res;
}

enum class Verdict { YES, NO, UNKNOWN };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::YES: return "YES";
    case Verdict::NO: return "NO";
    case Verdict::UNKNOWN: return "UNKNOWN";
  }
  return "?";
}

enum class Label { GB_FAIL, NONE, MP_ONLY, GROMOV_ONLY, BOTH, INVALID };

inline const char* to_string(Label l) {
  switch (l) {
    case Label::GB_FAIL: return "GB_FAIL";
    case Label::NONE: return "NONE";
    case Label::MP_ONLY: return "MP_ONLY";
    case Label::GROMOV_ONLY: return "GROMOV_ONLY";
    case Label::BOTH: return "BOTH";
    case Label::INVALID: return "INVALID";
  }
  return "?";
}

struct ObstructionReport {
  std::string family;
  double total_kg = 0.0;
  bool gb_passes = false;
  MaxPrincipleResult mp;
  GromovResult gromov;
  Verdict conformal_extendible = Verdict::UNKNOWN;
  Verdict any_metric_extendible = Verdict::UNKNOWN;
  Label label = Label::NONE;
};

inline ObstructionReport classify(const CurveSpec& c) {
  ObstructionReport rep;
  rep.family = c.name();
  rep.total_kg = total_geodesic_curvature(c);
  rep.gb_passes = rep.total_kg > kTwoPi;
  rep.mp = check_max_principle(c);
  rep.gromov = check_gromov(c);
  if (!rep.gb_passes || rep.mp.applies || rep.gromov.applies)
    rep.conformal_extendible = Verdict::NO;
  else if (std::holds_alternative<Horocycle>(c.family))
    rep.conformal_extendible = Verdict::YES;
  rep.any_metric_extendible = rep.gromov.applies ? Verdict::NO : Verdict::UNKNOWN;
  if (!rep.gb_passes)
    rep.label = Label::GB_FAIL;
  else if (rep.mp.applies)
    rep.label = rep.gromov.applies ? Label::BOTH : Label::MP_ONLY;
  else
    rep.label = rep.gromov.applies ? Label::GROMOV_ONLY : Label::NONE;
  return rep;
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct ScanResult {
  std::vector<double> R;
  std::vector<double> theta;
  std::vector<Label> labels;  // labels[i * theta.size() + j] for (R[i], theta[j])

  Label at(std::size_t i, std::size_t j) const { return labels[i * theta.size() + j]; }

  // Label of the grid node nearest to (R, theta).
  Label nearest(double r, double th) const {
    auto idx = [](const std::vector<double>& v, double x) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < v.size(); ++k)
        if (std::abs(v[k] - x) < std::abs(v[best] - x)) best = k;
      return best;
    };
    return at(idx(R, r), idx(theta, th));
  }
};

// Classifies GEO_HORO(R, theta) on an n x n grid of nodes, endpoints included.
// Nodes where the horocyclic part would have non-positive length are INVALID.
inline ScanResult scan_region(Interval R_range, Interval theta_range, std::size_t n) {
  if (n < 2) fail(ErrorKind::InvalidInput, "scan needs n >= 2");
  if (!(R_range.lo > 0.0 && R_range.lo < R_range.hi && std::isfinite(R_range.hi)))
    fail(ErrorKind::InvalidInput, "R range must satisfy 0 < lo < hi");
  if (!(theta_range.lo > 0.0 && theta_range.lo < theta_range.hi && theta_range.hi < kPi / 2))
    fail(ErrorKind::InvalidInput, "theta range must satisfy 0 < lo < hi < pi/2");
  ScanResult out;
  out.R = linspace(R_range.lo, R_range.hi, n);
  out.theta = linspace(theta_range.lo, theta_range.hi, n);
  out.labels.assign(n * n, Label::INVALID);
  parallel_for(n * n, [&](std::size_t k) {
    const double R = out.R[k / n], th = out.theta[k % n];
    if (!(1.0 - 2.0 * R * std::sin(th) > 0.0)) return;
    out.labels[k] = classify(CurveSpec::geo_horo(R, th)).label;
  });
  return out;
}

// Slit horocycle certified by the maximum principle: R1 < 1/e with
// u*(R1) = u*(R2) + margin, and half the largest slit angle that keeps the
// enclosed area above 2 pi.
inline CurveSpec make_slit_example(double R2, double margin = 0.1) {
  if (!(R2 > std::exp(-1.0) && R2 < 1.0)) fail(ErrorKind::InvalidInput, "R2 must lie in (1/e, 1)");
  if (!(margin > 0.0)) fail(ErrorKind::InvalidInput, "margin must be positive");
  const auto us = LogDensity::punctured();
  const double target = u_eval(us, R2, 0) + margin;
  const double R1 = bisect([&](double r) { return u_eval(us, r, 0) - target; }, 1e-300, kInvE, 1e-15);
  const double L1 = detail::neg_log(R1), L2 = detail::neg_log(R2);
  const double theta_max = (area_ball(R2) - kTwoPi) / (2.0 * (1.0 / L2 - 1.0 / L1));
  return CurveSpec::slit(R1, R2, 0.5 * theta_max);
}

// Convex geodesic-plus-horocycle curve with total geodesic curvature just
// above 2 pi: start from theta0 = 0.5 at the height y0 where the total equals
// 2 pi, then lower theta at fixed y0 until the excess reaches the target.
inline CurveSpec make_near_threshold_convex(double margin) {
  if (!(margin > 0.0 && margin <= 1.0)) fail(ErrorKind::InvalidInput, "margin must lie in (0, 1]");
  const double th0 = 0.5;
  const double y0 = 1.0 / (kTwoPi + 2.0 * std::tan(th0) - 2.0 * th0);
  auto total = [y0](double th) { return 1.0 / y0 - 2.0 * std::tan(th) + 2.0 * th; };
  double excess = std::min(0.5 * margin, 0.5 * (2.0 * std::tan(th0) - 2.0 * th0));
  for (int i = 0; i < 60; ++i, excess *= 0.5) {
    const double th = bisect([&](double t) { return total(t) - kTwoPi - excess; }, 1e-9, th0, 1e-15);
    CurveSpec c = CurveSpec::geo_horo(y0 / std::cos(th), th);
    if (check_gauss_bonnet(c) && check_max_principle(c).applies) return c;
  }
  fail(ErrorKind::ConstructionInfeasible, "no near-threshold convex curve found");
}

}  // namespace cuspfill
