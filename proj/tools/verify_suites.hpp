#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cuspfill/cuspfill.hpp"

namespace cuspfill::suites {

struct Check {
  std::string suite;
  std::string name;
  bool ok = false;
  std::string detail;
};

class Recorder {
 public:
  explicit Recorder(std::string suite) : suite_(std::move(suite)) {}

  template <class F>
  void run(const std::string& name, F&& body) {
    Check c{suite_, name, false, ""};
    try {
      c.ok = body(c.detail);
    } catch (const std::exception& e) {
      c.detail = std::string("threw: ") + e.what();
    }
    out_.push_back(std::move(c));
  }

  std::vector<Check> take() { return std::move(out_); }

 private:
  std::string suite_;
  std::vector<Check> out_;
};

inline std::vector<Check> core_suite() {
  Recorder rec("core");
  const auto us = LogDensity::punctured(), ud = LogDensity::disk();
  rec.run("curvature -1 on 1e4 grid", [&](std::string& d) {
    double worst = 0;
    for (double r : linspace(0.01, 0.99, 10000))
      worst = std::max({worst, std::abs(curvature_radial(us, r) + 1), std::abs(curvature_radial(ud, r) + 1)});
    d = "max |kappa + 1| = " + fmt17(worst);
    return worst < 1e-9;
  });
  rec.run("derivatives match central differences", [&](std::string& d) {
    double worst = 0;
    const double h = 1e-5;
    for (const auto& ld : {us, ud})
      for (double r : linspace(0.05, 0.95, 181)) {
        const double fd1 = (u_eval(ld, r + h, 0) - u_eval(ld, r - h, 0)) / (2 * h);
        const double fd2 = (u_eval(ld, r + h, 1) - u_eval(ld, r - h, 1)) / (2 * h);
        const double e1 = std::abs(fd1 - u_eval(ld, r, 1)) / std::max(1.0, std::abs(fd1));
        const double e2 = std::abs(fd2 - u_eval(ld, r, 2)) / std::max(1.0, std::abs(fd2));
        worst = std::max({worst, e1, e2});
      }
    d = "max relative deviation " + fmt17(worst);
    return worst < 1e-6;
  });
  rec.run("sign pattern of u*'", [&](std::string&) {
    for (double r : linspace(0.001, 0.999, 5000)) {
      const double d1 = u_eval(us, r, 1);
      if (std::abs(r - kInvE) > 1e-9 && ((r < kInvE) != (d1 < 0))) return false;
      if (!(u_eval(us, r, 2) > 0)) return false;
    }
    return true;
  });
  rec.run("area matches quadrature", [&](std::string& d) {
    boost::math::quadrature::exp_sinh<double> q;
    double worst = 0;
    for (double r : {0.1, 0.3, kInvE, 0.5, 0.9}) {
      const double L = -std::log(r);
      const double ref = q.integrate([](double s) { return kTwoPi / (s * s); }, L, std::numeric_limits<double>::infinity());
      worst = std::max(worst, std::abs(area_ball(r) / ref - 1));
    }
    d = "max rel err " + fmt17(worst);
    return worst < 1e-8;
  });
  rec.run("covering map periodic and monotone", [&](std::string&) {
    for (double y : linspace(0.01, 2.0, 50)) {
      const Point a = map_h2_to_pd({0.3, y}), b = map_h2_to_pd({1.3, y});
      if (std::abs(a.x - b.x) > 1e-14 || std::abs(a.y - b.y) > 1e-14) return false;
      const Point c = map_h2_to_pd({0.3, y + 0.01});
      if (!(std::hypot(c.x, c.y) < std::hypot(a.x, a.y))) return false;
    }
    return true;
  });
  rec.run("finite-difference curvature agrees", [&](std::string& d) {
    const double h = 1e-3;
    auto f = sample_field([&](double x, double y) { return u_eval(ud, std::hypot(x, y), 0); }, 0.4 - h, -h, h, 3, 3);
    const double k = curvature_conformal_fd(f, h, {1, 1});
    d = "kappa_fd = " + fmt17(k);
    return std::abs(k + 1) < 1e-5;
  });
  return rec.take();
}

inline std::vector<Check> completion_suite() {
  Recorder rec("completion");
  const auto us = LogDensity::punctured();
  for (double r0 : {0.37, 0.5, 0.9}) {
    rec.run("negative curvature r0=" + fmt17(r0), [&](std::string& d) {
      const auto p = build_completion(r0);
      const auto rep = verify_negative_curvature(p, 10000);
      d = "kappa_max = " + fmt17(rep.kappa_max);
      bool same = true;
      for (double r : linspace(r0, 0.999, 200)) same = same && p.u(r, 0) == u_eval(us, r, 0);
      return rep.negative && same && p.u(0.0, 1) == 0.0;
    });
  }
  rec.run("refuses r0 <= 1/e", [&](std::string&) {
    for (double r0 : {0.3, std::exp(-1.0)}) {
      try {
        build_completion(r0);
        return false;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NecessityViolation) return false;
      }
    }
    return true;
  });
  for (double eps : {0.04, 0.1}) {
    rec.run("curvature band eps=" + fmt17(eps), [&](std::string& d) {
      const auto [p, P] = build_eps_completion(eps, 0.4);
      const auto [ok, rep] = verify_curvature_band(p, eps, 10000);
      d = "kappa in [" + fmt17(rep.kappa_min) + ", " + fmt17(rep.kappa_max) + "]";
      const double match = 1 - P.C1 * std::sqrt(eps);
      bool same = true;
      for (double r : linspace(match, 0.999, 200)) same = same && p.u(r, 0) == u_eval(us, r, 0);
      return ok && same;
    });
    rec.run("disk comparison bounds eps=" + fmt17(eps), [&](std::string&) {
      const auto [p, P] = build_eps_completion(eps, 0.4);
      const auto ud = LogDensity::disk();
      for (double r : linspace(0.05, 0.99, 4000)) {
        const double d0 = p.u(r, 0) - u_eval(ud, r, 0);
        const double q1 = p.u(r, 1) / u_eval(ud, r, 1);
        const double q2 = p.u(r, 2) / u_eval(ud, r, 2);
        if (!(d0 > 0 && d0 < eps / 2 && q1 > 1 - eps / 2 && q1 < 1 && q2 > 1 - eps && q2 < 1 + eps / 2)) return false;
      }
      return true;
    });
  }
  rec.run("C2 joins", [&](std::string& d) {
    double worst = 0;
    std::vector<RadialProfile> ps{build_completion(0.5), build_eps_completion(0.04).first};
    for (const auto& p : ps)
      for (double j : p.joins()) {
        const auto& s = p.segments();
        const std::size_t i = p.segment_index(j);
        for (int o = 0; o < 3; ++o) worst = std::max(worst, std::abs(piece_u(s[i].piece, j, o) - piece_u(s[i - 1].piece, j, o)));
      }
    d = "max jump " + fmt17(worst);
    return worst < 1e-8;
  });
  rec.run("finite-difference curvature agrees on profiles", [&](std::string& d) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> rad(0.05, 0.95), ang(0, kTwoPi);
    const double h = 1e-4;
    double worst = 0;
    std::vector<RadialProfile> ps{build_completion(0.5), build_eps_completion(0.04).first};
    for (const auto& p : ps)
      for (int k = 0; k < 20; ++k) {
        const double r = rad(rng), a = ang(rng);
        const double x = r * std::cos(a), y = r * std::sin(a);
        auto f = sample_field([&](double X, double Y) { return p.u(std::hypot(X, Y), 0); }, x - h, y - h, h, 3, 3);
        const double kf = curvature_conformal_fd(f, h, {1, 1});
        const double kr = curvature_radial(p, r);
        worst = std::max(worst, std::abs(kf - kr) / std::max(1.0, std::abs(kr)));
      }
    d = "max rel deviation " + fmt17(worst);
    return worst < 1e-4;
  });
  return rec.take();
}

inline std::vector<Check> obstruction_suite() {
  Recorder rec("obstruction");
  struct Triple {
    double R, th;
    Label want;
  };
  const Triple triples[] = {{0.2, 0.8, Label::MP_ONLY}, {0.48, 1.55, Label::GROMOV_ONLY}, {0.4, 1.45, Label::BOTH}};
  for (const auto& t : triples) {
    rec.run("classification " + fmt17(t.R) + "," + fmt17(t.th), [&](std::string& d) {
      bool ok = true;
      for (double dr : {-1e-6, 0.0, 1e-6})
        for (double dt : {-1e-6, 0.0, 1e-6}) {
          const auto rep = classify(CurveSpec::geo_horo(t.R + dr, t.th + dt));
          ok = ok && rep.label == t.want && rep.gb_passes;
        }
      d = to_string(classify(CurveSpec::geo_horo(t.R, t.th)).label);
      return ok;
    });
  }
  rec.run("horocycle total equals length", [&](std::string&) {
    for (double r : linspace(0.05, 0.95, 50))
      if (total_geodesic_curvature(CurveSpec::horocycle(r)) != length_horocycle(r)) return false;
    return true;
  });
  rec.run("strip area matches closed form", [&](std::string& d) {
    double worst = 0;
    for (const auto& t : triples) {
      const double y0 = t.R * std::cos(t.th);
      auto h = [&](double x) { return 1.0 / std::max(y0, std::sqrt(std::max(0.0, t.R * t.R - (x - 0.5) * (x - 0.5)))); };
      const double a = t.R * std::sin(t.th);
      using boost::math::quadrature::gauss_kronrod;
      const double area = gauss_kronrod<double, 31>::integrate(h, 0.0, 0.5 - a, 10, 1e-13) +
                          gauss_kronrod<double, 31>::integrate(h, 0.5 - a, 0.5 + a, 10, 1e-13) +
                          gauss_kronrod<double, 31>::integrate(h, 0.5 + a, 1.0, 10, 1e-13);
      worst = std::max(worst, std::abs(area / total_geodesic_curvature(CurveSpec::geo_horo(t.R, t.th)) - 1));
    }
    d = "max rel err " + fmt17(worst);
    return worst < 1e-6;
  });
  rec.run("slit example conditions", [&](std::string&) {
    const auto us = LogDensity::punctured();
    for (double R2 : {0.4, 0.5, 0.7, 0.9, 0.99}) {
      const auto c = make_slit_example(R2);
      const auto& s = std::get<SlitHorocycle>(c.family);
      if (!(u_eval(us, s.R1, 0) > u_eval(us, s.R2, 0) && s.R1 < kInvE && total_geodesic_curvature(c) > kTwoPi))
        return false;
      const auto rep = classify(c);
      if (!(rep.gb_passes && rep.mp.applies)) return false;
    }
    return true;
  });
  rec.run("scan shows every obstruction label", [&](std::string& d) {
    const auto s = scan_region({0.05, 0.6}, {0.1, 1.55}, 64);
    int mp = 0, gr = 0, both = 0;
    for (auto l : s.labels) {
      mp += l == Label::MP_ONLY;
      gr += l == Label::GROMOV_ONLY;
      both += l == Label::BOTH;
    }
    d = "MP_ONLY " + std::to_string(mp) + ", GROMOV_ONLY " + std::to_string(gr) + ", BOTH " + std::to_string(both);
    return mp > 0 && gr > 0 && both > 0;
  });
  return rec.take();
}

inline std::vector<Check> bounds_suite() {
  Recorder rec("bounds");
  rec.run("Taylor bounds for A = 0.4", [&](std::string& d) {
    const auto rep = verify_taylor_bounds(0.4, 0.7, 10000);
    const auto above = verify_taylor_bounds(0.4, rep.r_taylor, 10000);
    d = "r_taylor = " + fmt17(rep.r_taylor);
    return rep.r_taylor < 0.95 && above.holds();
  });
  rec.run("Taylor bounds fail just above 1/3", [&](std::string&) {
    return !verify_taylor_bounds(1.0 / 3.0 + 5e-4, 0.99, 10000).holds();
  });
  rec.run("as_ratio exceeds 1", [&](std::string&) {
    for (double r : linspace(0.001, 0.999, 5000))
      if (!(as_ratio(r) > 1)) return false;
    return true;
  });
  rec.run("cubic remainder of as_ratio", [&](std::string& d) {
    const auto rep = verify_as_expansion(0.9, 1000);
    d = "K = " + fmt17(rep.fitted_k);
    return rep.holds();
  });
  rec.run("matching radius sandwich", [&](std::string&) {
    for (double eps : {1e-2, 1e-3}) {
      const auto P = build_eps_completion(eps, 0.4).second;
      if (!(1 - P.r_eps < 1 - min_radius_for_eps(eps))) return false;
    }
    return true;
  });
  rec.run("theta quartic", [&](std::string& d) {
    const auto rep = verify_theta_quartic();
    d = "g''''(0) ~ " + fmt17(rep.limit);
    return rep.holds();
  });
  rec.run("theta gap positive at near-threshold curve", [&](std::string&) {
    for (double m : {0.5, 0.05}) {
      const auto c = make_near_threshold_convex(m);
      if (!(theta_gap(std::get<GeoHoro>(c.family).theta) > 0)) return false;
    }
    return true;
  });
  return rec.take();
}

}  // namespace cuspfill::suites
