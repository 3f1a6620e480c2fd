#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cuspfill/bounds.hpp"
#include "cuspfill/completion.hpp"
#include "cuspfill/numerics.hpp"
#include "cuspfill/obstruction.hpp"

namespace cuspfill {

inline constexpr int kSchemaVersion = 1;

using nlohmann::json;

inline json to_json(const ObstructionReport& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["family"] = r.family;
  j["total_kg"] = r.total_kg;
  j["gb_passes"] = r.gb_passes;
  j["mp"] = {{"z0_modulus", r.mp.z0_modulus}, {"u_star_at_max", r.mp.u_star_at_max}, {"applies", r.mp.applies}};
  if (r.gromov.evaluated)
    j["gromov"] = {{"l_alpha", r.gromov.l_alpha},
                   {"l_alpha_inverse_cos_squared", r.gromov.l_alpha_paper},
                   {"l_beta", r.gromov.l_beta},
                   {"shortcut", r.gromov.shortcut},
                   {"shortcut_inverse_cos_squared", r.gromov.shortcut_paper},
                   {"applies", r.gromov.applies}};
  else
    j["gromov"] = nullptr;
  j["conformal_extendible"] = to_string(r.conformal_extendible);
  j["any_metric_extendible"] = to_string(r.any_metric_extendible);
  j["label"] = to_string(r.label);
  return j;
}

inline json to_json(const BoundReport& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["claim"] = to_string(r.claim);
  j["domain_checked"] = {r.domain_lo, r.domain_hi};
  j["max_violation"] = r.max_violation;
  j["holds"] = r.holds();
  json w = json::array();
  for (const auto& x : r.witnesses) w.push_back({x.at, x.lhs, x.rhs});
  j["witnesses"] = w;
  auto put = [&](const char* k, double v) {
    if (std::isfinite(v)) j[k] = v;
  };
  put("r_taylor", r.r_taylor);
  put("fitted_k", r.fitted_k);
  put("fitted_k_refined", r.fitted_k_refined);
  put("limit", r.limit);
  put("limit_spread", r.limit_spread);
  return j;
}

inline json to_json(const EpsParams& p) {
  json j = {{"eps", p.eps},   {"A", p.A},         {"eps_internal", p.eps_internal}, {"r_eps", p.r_eps},
            {"delta", p.delta}, {"C1", p.C1},     {"k_inner", p.k_inner},           {"disk_radius", p.disk_radius},
            {"steps", p.steps}};
  if (std::isfinite(p.C2)) j["C2"] = p.C2;
  return j;
}

inline json summary_json(const CurvatureReport& r) {
  return {{"points", r.radii.size()}, {"kappa_min", r.kappa_min}, {"kappa_max", r.kappa_max},
          {"arg_min", r.arg_min},     {"arg_max", r.arg_max},     {"negative", r.negative}};
}

inline std::string scan_csv(const ScanResult& s) {
  std::ostringstream os;
  os << "R,theta,label\n";
  for (std::size_t i = 0; i < s.R.size(); ++i)
    for (std::size_t j = 0; j < s.theta.size(); ++j)
      os << fmt17(s.R[i]) << ',' << fmt17(s.theta[j]) << ',' << to_string(s.at(i, j)) << '\n';
  return os.str();
}

// Writes through a temporary file in the same directory and renames it into
// place, so a failure never leaves a partial file behind.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  if (!fs::is_directory(dir)) throw std::runtime_error("output directory does not exist: " + dir.string());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot move output into place: " + path.string());
  }
}

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

// Minimal 800x600 polyline plot with linear axes (optionally log10 in x).
inline std::string svg_plot(const std::vector<Series>& series, const std::string& title, const std::string& xlabel,
                            const std::string& ylabel, bool log_x = false) {
  const double W = 800, H = 600, ml = 70, mr = 20, mt = 40, mb = 60;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  auto tx = [log_x](double x) { return log_x ? std::log10(x) : x; };
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i]) || (log_x && !(s.x[i] > 0))) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (!(x1 > x0)) x1 = x0 + 1;
  if (!(y1 > y0)) y1 = y0 + 1;
  auto px = [&](double x) { return ml + (tx(x) - x0) / (x1 - x0) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (y - y0) / (y1 - y0) * (H - mt - mb); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
  os << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  os << "<text x=\"400\" y=\"25\" text-anchor=\"middle\" font-size=\"16\">" << title << "</text>\n";
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\"" << H - mt - mb
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"400\" y=\"590\" text-anchor=\"middle\" font-size=\"13\">" << xlabel << (log_x ? " (log10)" : "")
     << "</text>\n";
  os << "<text x=\"15\" y=\"300\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 15 300)\">" << ylabel
     << "</text>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
    const double xp = ml + (W - ml - mr) * k / 4, yp = H - mb - (H - mt - mb) * k / 4;
    os << "<text x=\"" << xp << "\" y=\"" << H - mb + 18 << "\" text-anchor=\"middle\" font-size=\"11\">" << xv
       << "</text>\n";
    os << "<text x=\"" << ml - 6 << "\" y=\"" << yp + 4 << "\" text-anchor=\"end\" font-size=\"11\">" << yv
       << "</text>\n";
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    os << "<polyline fill=\"none\" stroke=\"" << colors[k % 5] << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i]) || (log_x && !(s.x[i] > 0))) continue;
      os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    }
    os << "\"/>\n";
    os << "<text x=\"" << W - mr - 10 << "\" y=\"" << mt + 18 * (k + 1) << "\" text-anchor=\"end\" font-size=\"12\" fill=\""
       << colors[k % 5] << "\">" << s.name << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

inline const char* label_color(Label l) {
  switch (l) {
    case Label::GB_FAIL: return "#bbbbbb";
    case Label::NONE: return "#ffffff";
    case Label::MP_ONLY: return "#1f77b4";
    case Label::GROMOV_ONLY: return "#d62728";
    case Label::BOTH: return "#9467bd";
    case Label::INVALID: return "#333333";
  }
  return "#000000";
}

inline std::string svg_heatmap(const ScanResult& s) {
  const double ml = 70, mr = 150, mt = 40, mb = 60;
  const double pw = 800 - ml - mr, ph = 600 - mt - mb;
  const std::size_t nr = s.R.size(), nt = s.theta.size();
  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
  os << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"25\" text-anchor=\"middle\" font-size=\"16\">GEO_HORO classification</text>\n";
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nt; ++j)
      os << "<rect x=\"" << ml + pw * i / nr << "\" y=\"" << mt + ph * (nt - 1 - j) / nt << "\" width=\"" << pw / nr + 0.5
         << "\" height=\"" << ph / nt + 0.5 << "\" fill=\"" << label_color(s.at(i, j)) << "\"/>\n";
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"585\" text-anchor=\"middle\" font-size=\"13\">R from " << s.R.front()
     << " to " << s.R.back() << "</text>\n";
  os << "<text x=\"15\" y=\"" << mt + ph / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 15 "
     << mt + ph / 2 << ")\">theta from " << s.theta.front() << " to " << s.theta.back() << "</text>\n";
  const Label all[] = {Label::GB_FAIL, Label::NONE, Label::MP_ONLY, Label::GROMOV_ONLY, Label::BOTH, Label::INVALID};
  for (int k = 0; k < 6; ++k) {
    const double y = mt + 22.0 * k;
    os << "<rect x=\"" << 800 - mr + 15 << "\" y=\"" << y << "\" width=\"14\" height=\"14\" stroke=\"black\" fill=\""
       << label_color(all[k]) << "\"/>\n";
    os << "<text x=\"" << 800 - mr + 35 << "\" y=\"" << y + 12 << "\" font-size=\"12\">" << to_string(all[k]) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace cuspfill
