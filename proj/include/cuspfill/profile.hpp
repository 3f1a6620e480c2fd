#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <istream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "cuspfill/density.hpp"
#include "cuspfill/error.hpp"
#include "cuspfill/numerics.hpp"

namespace cuspfill {

// u'' = w(r) = c0 + c1 r^p on [0, r0], integrated twice with u'(0) = 0 and
// u(r0) = u_anchor.
struct PolyW {
  double c0 = 0.0;
  double c1 = 0.0;
  int p = 1;
  double r0 = 0.5;
  double u_anchor = 0.0;

  double u(double r, int order) const {
    const double pp = p;
    switch (order) {
      case 0:
        return u_anchor + 0.5 * c0 * (r * r - r0 * r0) +
               c1 * (std::pow(r, pp + 2.0) - std::pow(r0, pp + 2.0)) / ((pp + 1.0) * (pp + 2.0));
      case 1: return c0 * r + c1 * std::pow(r, pp + 1.0) / (pp + 1.0);
      default: return c0 + c1 * std::pow(r, pp);
    }
  }
};

// Radial solution of u'' + u'/r = K(r) e^{2u}, i.e. curvature -K(r), where K
// climbs from k_inner at r_lo to 1 at r_hi along a smoothstep.  The solution
// starts from (u_right, du_right) at r_hi and is integrated inward with RK4;
// between nodes u and u' come from the quintic Hermite interpolant of
// (u, u', u'').  u'' is read back from the equation rather than from the
// interpolant, whose second derivative loses digits on narrow windows.
class CurvatureRamp {
 public:
  CurvatureRamp() = default;

  CurvatureRamp(double r_lo, double r_hi, double k_inner, double u_right, double du_right, int steps)
      : r_lo_(r_lo), r_hi_(r_hi), k_inner_(k_inner), u_right_(u_right), du_right_(du_right), steps_(steps) {
    if (!(r_lo > 0.0 && r_lo < r_hi && r_hi < 1.0) || steps < 2 || !(k_inner > 0.0))
      fail(ErrorKind::InvalidInput, "CurvatureRamp: bad window or parameters");
    integrate();
  }

  double r_lo() const { return r_lo_; }
  double r_hi() const { return r_hi_; }
  double k_inner() const { return k_inner_; }
  double u_right() const { return u_right_; }
  double du_right() const { return du_right_; }
  int steps() const { return steps_; }
  bool ok() const { return ok_; }

  double target_curvature(double r) const {
    return -(k_inner_ + (1.0 - k_inner_) * smoothstep((r - r_lo_) / (r_hi_ - r_lo_)));
  }

  double u(double r, int order) const {
    const double h = (r_hi_ - r_lo_) / steps_;
    std::ptrdiff_t k = static_cast<std::ptrdiff_t>(std::floor((r - r_lo_) / h));
    if (k < 0) k = 0;
    if (k >= steps_) k = steps_ - 1;
    const auto& n0 = nodes_[k];
    const auto& n1 = nodes_[k + 1];
    const double hk = n1[0] - n0[0];
    const double s = (r - n0[0]) / hk;
    const double a0 = n0[1], a1 = hk * n0[2], a2 = 0.5 * hk * hk * n0[3];
    const double A = n1[1] - (a0 + a1 + a2);
    const double B = hk * n1[2] - (a1 + 2.0 * a2);
    const double C = hk * hk * n1[3] - 2.0 * a2;
    const double a3 = 10.0 * A - 4.0 * B + 0.5 * C;
    const double a4 = -15.0 * A + 7.0 * B - C;
    const double a5 = 6.0 * A - 3.0 * B + 0.5 * C;
    const double u = a0 + s * (a1 + s * (a2 + s * (a3 + s * (a4 + s * a5))));
    if (order == 0) return u;
    const double du = (a1 + s * (2.0 * a2 + s * (3.0 * a3 + s * (4.0 * a4 + s * 5.0 * a5)))) / hk;
    return order == 1 ? du : second(r, u, du);
  }

 private:
  double second(double r, double u, double du) const { return -target_curvature(r) * std::exp(2.0 * u) - du / r; }

  void integrate() {
    nodes_.assign(steps_ + 1, {});
    const double h = (r_lo_ - r_hi_) / steps_;
    double r = r_hi_, u = u_right_, v = du_right_;
    nodes_[steps_] = {r, u, v, second(r, u, v)};
    for (int i = steps_ - 1; i >= 0; --i) {
      const double k1u = v, k1v = second(r, u, v);
      const double k2u = v + 0.5 * h * k1v, k2v = second(r + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v);
      const double k3u = v + 0.5 * h * k2v, k3v = second(r + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v);
      const double k4u = v + h * k3v, k4v = second(r + h, u + h * k3u, v + h * k3v);
      u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
      v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      r = i == 0 ? r_lo_ : r_hi_ + (steps_ - i) * h;
      nodes_[i] = {r, u, v, second(r, u, v)};
      if (!std::isfinite(u) || !std::isfinite(v)) {
        ok_ = false;
        return;
      }
    }
    ok_ = true;
  }

  double r_lo_ = 0.0, r_hi_ = 0.0, k_inner_ = 1.0, u_right_ = 0.0, du_right_ = 0.0;
  int steps_ = 0;
  bool ok_ = false;
  std::vector<std::array<double, 4>> nodes_;  // r, u, u', u''
};

using Piece = std::variant<LogDensity, PolyW, CurvatureRamp>;

inline double piece_u(const Piece& piece, double r, int order) {
  if (const auto* d = std::get_if<LogDensity>(&piece)) return u_eval(*d, r, order);
  if (const auto* w = std::get_if<PolyW>(&piece)) return w->u(r, order);
  return std::get<CurvatureRamp>(piece).u(r, order);
}

inline const char* piece_tag(const Piece& piece) {
  switch (piece.index()) {
    case 0: return "CLOSED_FORM";
    case 1: return "POLY_W";
    default: return "RAMP";
  }
}

struct Segment {
  double r_lo = 0.0;
  double r_hi = 1.0;
  Piece piece;
};

class RadialProfile {
 public:
  RadialProfile() = default;

  explicit RadialProfile(std::vector<Segment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) fail(ErrorKind::InvalidInput, "profile needs at least one segment");
    if (segments_.front().r_lo != 0.0 || segments_.back().r_hi != 1.0)
      fail(ErrorKind::InvalidInput, "profile segments must tile [0, 1)");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      if (!(segments_[i].r_lo < segments_[i].r_hi)) fail(ErrorKind::InvalidInput, "empty profile segment");
      if (i > 0 && segments_[i].r_lo != segments_[i - 1].r_hi)
        fail(ErrorKind::InvalidInput, "profile segments leave a gap or overlap");
    }
  }

  const std::vector<Segment>& segments() const { return segments_; }

  std::size_t segment_index(double r) const {
    std::size_t i = 0;
    while (i + 1 < segments_.size() && r >= segments_[i].r_hi) ++i;
    return i;
  }

  bool defined_at_zero() const {
    const Piece& p = segments_.front().piece;
    const auto* d = std::get_if<LogDensity>(&p);
    return d == nullptr || d->defined_at_zero();
  }

  double u(double r, int order) const {
    if (!(r >= 0.0 && r <= kRadiusCap))
      fail(ErrorKind::InvalidInput, "radius " + fmt17(r) + " outside [0, 1 - 1e-12]");
    return piece_u(segments_[segment_index(r)].piece, r, order);
  }

  // Interior joins, in increasing order.
  std::vector<double> joins() const {
    std::vector<double> out;
    for (std::size_t i = 1; i < segments_.size(); ++i) out.push_back(segments_[i].r_lo);
    return out;
  }

  // Radius above which the profile is exactly u*; 1 if it never is.
  double splice_end() const {
    const auto* d = std::get_if<LogDensity>(&segments_.back().piece);
    if (d && d->kind == LogDensity::Kind::PUNCTURED) return segments_.back().r_lo;
    return 1.0;
  }

 private:
  std::vector<Segment> segments_;
};

inline double curvature_radial(const RadialProfile& profile, double r) {
  if (r == 0.0 && !profile.defined_at_zero()) fail(ErrorKind::InvalidInput, "profile is not defined at r = 0");
  return curvature_from_jet(r, profile.u(r, 0), profile.u(r, 1), profile.u(r, 2));
}

inline RadialProfile closed_form_profile(const LogDensity& d) { return RadialProfile({{0.0, 1.0, d}}); }

// u == value on [0, 1): the flat metric when value = 0.
inline RadialProfile constant_profile(double value) {
  return RadialProfile({{0.0, 1.0, PolyW{0.0, 0.0, 1, 0.5, value}}});
}

// Text format:
//   cuspfill-profile 1 <nseg>
//   CLOSED_FORM r_lo r_hi KIND c radius
//   POLY_W r_lo r_hi c0 c1 p r0 u_anchor
//   RAMP r_lo r_hi k_inner u_right du_right steps
inline std::string to_text(const RadialProfile& profile) {
  std::ostringstream os;
  os << "cuspfill-profile 1 " << profile.segments().size() << '\n';
  for (const auto& s : profile.segments()) {
    os << piece_tag(s.piece) << ' ' << fmt17(s.r_lo) << ' ' << fmt17(s.r_hi);
    if (const auto* d = std::get_if<LogDensity>(&s.piece)) {
      os << ' ' << to_string(d->kind) << ' ' << fmt17(d->c) << ' ' << fmt17(d->radius);
    } else if (const auto* w = std::get_if<PolyW>(&s.piece)) {
      os << ' ' << fmt17(w->c0) << ' ' << fmt17(w->c1) << ' ' << w->p << ' ' << fmt17(w->r0) << ' ' << fmt17(w->u_anchor);
    } else {
      const auto& g = std::get<CurvatureRamp>(s.piece);
      os << ' ' << fmt17(g.k_inner()) << ' ' << fmt17(g.u_right()) << ' ' << fmt17(g.du_right()) << ' ' << g.steps();
    }
    os << '\n';
  }
  return os.str();
}

inline RadialProfile profile_from_text(std::istream& in) {
  auto bad = [](const std::string& why) -> void { fail(ErrorKind::InvalidInput, "profile text: " + why); };
  std::string magic;
  int version = 0;
  std::size_t n = 0;
  if (!(in >> magic >> version >> n) || magic != "cuspfill-profile") bad("missing header");
  if (version != 1) bad("unsupported version " + std::to_string(version));
  std::vector<Segment> segs;
  for (std::size_t i = 0; i < n; ++i) {
    std::string tag;
    Segment s;
    if (!(in >> tag >> s.r_lo >> s.r_hi)) bad("truncated segment line");
    if (tag == "CLOSED_FORM") {
      std::string kind;
      double c = 0.0, radius = 1.0;
      if (!(in >> kind >> c >> radius)) bad("truncated CLOSED_FORM");
      if (kind == "PUNCTURED")
        s.piece = LogDensity::punctured();
      else if (kind == "DISK")
        s.piece = LogDensity::disk();
      else if (kind == "DISK_SHIFTED")
        s.piece = LogDensity::disk_shifted(c, radius);
      else
        bad("unknown density kind " + kind);
    } else if (tag == "POLY_W") {
      PolyW w;
      if (!(in >> w.c0 >> w.c1 >> w.p >> w.r0 >> w.u_anchor)) bad("truncated POLY_W");
      s.piece = w;
    } else if (tag == "RAMP") {
      double k = 0, u = 0, du = 0;
      int steps = 0;
      if (!(in >> k >> u >> du >> steps)) bad("truncated RAMP");
      s.piece = CurvatureRamp(s.r_lo, s.r_hi, k, u, du, steps);
    } else {
      bad("unknown segment tag " + tag);
    }
    segs.push_back(std::move(s));
  }
  return RadialProfile(std::move(segs));
}

inline RadialProfile profile_from_text(const std::string& text) {
  std::istringstream in(text);
  return profile_from_text(in);
}

}  // namespace cuspfill
