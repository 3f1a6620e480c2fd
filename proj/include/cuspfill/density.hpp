#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "cuspfill/error.hpp"
#include "cuspfill/numerics.hpp"

namespace cuspfill {

// Log-density u = log(lambda) of a radial conformal metric e^u |dz|.
//   PUNCTURED     u*(r)  = -log(r) - log(-log r)
//   DISK          u_D(r) = log(2 / (1 - r^2))
//   DISK_SHIFTED  c + log(2 rho / (rho^2 - r^2)), the disk of radius rho with
//                 curvature scaled by e^{-2c}; rho = 1 gives u_D + c.
struct LogDensity {
  enum class Kind { PUNCTURED, DISK, DISK_SHIFTED };

  Kind kind = Kind::PUNCTURED;
  double c = 0.0;
  double radius = 1.0;

  static LogDensity punctured() { return {Kind::PUNCTURED, 0.0, 1.0}; }
  static LogDensity disk() { return {Kind::DISK, 0.0, 1.0}; }
  static LogDensity disk_shifted(double c, double radius = 1.0) {
    if (!(radius > 0.0) || !std::isfinite(c))
      fail(ErrorKind::InvalidInput, "disk_shifted: need finite c and radius > 0");
    return {Kind::DISK_SHIFTED, c, radius};
  }

  bool defined_at_zero() const { return kind != Kind::PUNCTURED; }
  bool operator==(const LogDensity&) const = default;
};

inline const char* to_string(LogDensity::Kind k) {
  switch (k) {
    case LogDensity::Kind::PUNCTURED: return "PUNCTURED";
    case LogDensity::Kind::DISK: return "DISK";
    case LogDensity::Kind::DISK_SHIFTED: return "DISK_SHIFTED";
  }
  return "?";
}

struct Point {
  double x = 0.0;
  double y = 0.0;
};

namespace detail {

// L = -log r, accurate near r = 1 where r - 1 is exact.
inline double neg_log(double r) { return r < 0.5 ? -std::log(r) : -std::log1p(r - 1.0); }

inline void check_radius(const LogDensity& d, double r) {
  bool ok = std::isfinite(r) && r <= kRadiusCap;
  if (d.kind == LogDensity::Kind::PUNCTURED)
    ok = ok && r > 0.0;
  else
    ok = ok && r >= 0.0 && r < d.radius;
  if (!ok) fail(ErrorKind::InvalidInput, std::string("radius ") + fmt17(r) + " outside the domain of " + to_string(d.kind));
}

inline double disk_gap(double rho, double r) {
  return rho == 1.0 ? (1.0 - r) * (1.0 + r) : (rho - r) * (rho + r);
}

}  // namespace detail

inline double u_eval(const LogDensity& d, double r, int order) {
  detail::check_radius(d, r);
  if (order < 0 || order > 2) fail(ErrorKind::InvalidInput, "order must be 0, 1 or 2");
  if (d.kind == LogDensity::Kind::PUNCTURED) {
    const double L = detail::neg_log(r);
    switch (order) {
      case 0: return L - std::log(L);
      case 1: return -(1.0 - 1.0 / L) / r;
      default: return (L * L - L + 1.0) / (r * r * L * L);
    }
  }
  const double rho = d.kind == LogDensity::Kind::DISK ? 1.0 : d.radius;
  const double c = d.kind == LogDensity::Kind::DISK ? 0.0 : d.c;
  const double g = detail::disk_gap(rho, r);
  switch (order) {
    case 0: return c + std::log(2.0 * rho / g);
    case 1: return 2.0 * r / g;
    default: return 2.0 * (rho * rho + r * r) / (g * g);
  }
}

// kappa = -(u'' + u'/r) e^{-2u}; at r = 0 the L'Hopital limit -2 u''(0) e^{-2u(0)},
// which needs u'(0) = 0.
inline double curvature_from_jet(double r, double u, double du, double ddu) {
  if (r == 0.0) {
    if (du != 0.0) fail(ErrorKind::InvalidInput, "curvature at r = 0 needs u'(0) = 0");
    return -2.0 * ddu * std::exp(-2.0 * u);
  }
  return -(ddu + du / r) * std::exp(-2.0 * u);
}

inline double curvature_radial(const LogDensity& d, double r) {
  return curvature_from_jet(r, u_eval(d, r, 0), u_eval(d, r, 1), u_eval(d, r, 2));
}

inline double area_ball(double r) {
  if (!(r > 0.0 && r < 1.0)) fail(ErrorKind::InvalidInput, "area_ball: r must lie in (0, 1)");
  return kTwoPi / detail::neg_log(r);
}

// Horocycles have geodesic curvature 1, so length and enclosed area coincide.
inline double length_horocycle(double r) { return area_ball(r); }

inline Point map_h2_to_pd(Point z) {
  if (!(z.y > 0.0) || !std::isfinite(z.x)) fail(ErrorKind::InvalidInput, "map_h2_to_pd: need Im z > 0");
  const double x = z.x - std::floor(z.x);
  const double m = std::exp(-kTwoPi * z.y);
  return {m * std::cos(kTwoPi * x), m * std::sin(kTwoPi * x)};
}

struct Field2D {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> values;  // row-major, values[j * nx + i]

  Field2D() = default;
  Field2D(std::size_t nx_, std::size_t ny_, double fill = 0.0) : nx(nx_), ny(ny_), values(nx_ * ny_, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return values[j * nx + i]; }
  double operator()(std::size_t i, std::size_t j) const { return values[j * nx + i]; }
};

struct GridIndex {
  std::size_t i = 0;
  std::size_t j = 0;
};

// Samples f(x, y) on the grid x = x0 + i h, y = y0 + j h.
template <class F>
Field2D sample_field(F&& f, double x0, double y0, double h, std::size_t nx, std::size_t ny) {
  Field2D out(nx, ny);
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) out(i, j) = f(x0 + static_cast<double>(i) * h, y0 + static_cast<double>(j) * h);
  return out;
}

// kappa = -Delta u e^{-2u} with the five-point Laplacian.
inline double curvature_conformal_fd(const Field2D& u, double h, GridIndex at) {
  if (!(h > 0.0)) fail(ErrorKind::InvalidInput, "grid spacing must be positive");
  if (at.i == 0 || at.j == 0 || at.i + 1 >= u.nx || at.j + 1 >= u.ny)
    fail(ErrorKind::InvalidInput, "curvature_conformal_fd needs an interior grid point");
  const double c = u(at.i, at.j);
  const double lap = (u(at.i + 1, at.j) + u(at.i - 1, at.j) + u(at.i, at.j + 1) + u(at.i, at.j - 1) - 4.0 * c) / (h * h);
  return -lap * std::exp(-2.0 * c);
}

}  // namespace cuspfill
