#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cuspfill/cuspfill.hpp"
#include "verify_suites.hpp"

namespace fs = std::filesystem;
using namespace cuspfill;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRefused = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path resolve_out(const std::string& p) {
  fs::path path(p);
  if (path.is_relative()) {
    if (const char* dir = std::getenv("CUSPFILL_OUT_DIR"); dir && *dir) return fs::path(dir) / path;
  }
  return path;
}

void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-")
    std::cout << content;
  else
    write_file_atomic(resolve_out(out), content);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

Interval parse_range(const std::string& s, const char* what) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw UsageError(std::string(what) + " expects lo:hi");
  try {
    return {std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw UsageError(std::string(what) + " expects numeric lo:hi");
  }
}

std::vector<Point> read_points(const std::string& path) {
  std::ifstream in(resolve_out(path));
  if (!in) throw std::runtime_error("cannot read points file " + path);
  std::vector<Point> pts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'x') continue;
    for (auto& ch : line)
      if (ch == ',') ch = ' ';
    std::istringstream ls(line);
    Point p;
    if (!(ls >> p.x >> p.y)) throw UsageError("bad point line: " + line);
    pts.push_back(p);
  }
  return pts;
}

// Reads key=value lines ('#' starts a comment).
std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string k = trim(line.substr(0, eq));
    if (!k.empty()) kv[k] = trim(line.substr(eq + 1));
  }
  return kv;
}

// Splices config values into argv right after the subcommand, skipping keys
// already given as flags, so the command line wins.
std::vector<std::string> apply_config(const CLI::App& app, std::vector<std::string> args) {
  std::string cfg;
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") cfg = args[i + 1];
  for (const auto& a : args)
    if (a.rfind("--config=", 0) == 0) cfg = a.substr(9);
  if (cfg.empty()) return args;
  std::size_t sub_pos = args.size();
  const CLI::App* sub = nullptr;
  for (std::size_t i = 1; i < args.size() && !sub; ++i)
    for (const auto* s : app.get_subcommands([](const CLI::App*) { return true; }))
      if (s->get_name() == args[i]) {
        sub = s;
        sub_pos = i;
        break;
      }
  if (!sub) return args;
  std::vector<std::string> extra;
  for (const auto& [k, v] : read_config(cfg)) {
    const std::string flag = "--" + k;
    if (k == "config" || !sub->get_option_no_throw(flag)) continue;
    bool given = false;
    for (const auto& a : args) given = given || a == flag || a.rfind(flag + "=", 0) == 0;
    if (given) continue;
    const auto* opt = sub->get_option_no_throw(flag);
    if (opt->get_type_size() == 0) {
      if (v == "true" || v == "1") extra.push_back(flag);
    } else {
      extra.push_back(flag);
      extra.push_back(v);
    }
  }
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub_pos) + 1, extra.begin(), extra.end());
  return args;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw UsageError(msg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cuspfill: negatively curved fillings of the hyperbolic cusp"};
  app.require_subcommand(1);
  app.footer(
      "Output: relative --out paths resolve against $CUSPFILL_OUT_DIR when set. Files are written to a\n"
      "temporary name and renamed, so failures never leave partial output. --config FILE reads key=value\n"
      "lines (keys are long flag names); flags given on the command line win.\n"
      "CSV columns: complete/complete-eps --report: r,kappa; scan: R,theta,label; plot: r,u (ustar, udisk),\n"
      "r,u,du,ddu (profile), r,kappa (kappa), r,as_ratio (as-ratio), theta,g (theta-gap).\n"
      "Exit codes: 0 success, 1 usage or I/O error, 2 necessity violation or eps too large.");

  std::string config;
  std::size_t n_grid = 10000;

  // complete
  auto* complete = app.add_subcommand("complete", "build the completion inside B_r0 and check kappa < 0");
  double r0 = 0.0;
  std::string out, report;
  complete->add_option("--r0", r0, "matching radius, must exceed 1/e")->required();
  complete->add_option("--n", n_grid, "curvature grid size (default 10000)");
  complete->add_option("--out", out, "profile text file (default: not written)");
  complete->add_option("--report", report, "curvature CSV r,kappa (default: not written)");
  complete->add_option("--config", config, "key=value defaults file");

  // complete-eps
  auto* complete_eps = app.add_subcommand("complete-eps", "build the eps-pinched completion and check the band");
  double eps = 0.0, A = 0.4;
  complete_eps->add_option("--eps", eps, "pinching target in (0, 1)")->required();
  complete_eps->add_option("--A", A, "Taylor constant, > 1/3 (default 0.4)");
  complete_eps->add_option("--n", n_grid, "curvature grid size (default 10000)");
  complete_eps->add_option("--out", out, "profile text file");
  complete_eps->add_option("--report", report, "curvature CSV r,kappa");
  complete_eps->add_option("--config", config, "key=value defaults file");

  // classify
  auto* cls = app.add_subcommand("classify", "classify a boundary curve; prints a JSON report");
  std::string family;
  double r = 0, R1 = 0, R2 = 0, R = 0, theta = 0;
  std::string points;
  bool open_curve = false;
  cls->add_option("--family", family, "horocycle | slit | geo-horo | sampled")->required();
  cls->add_option("--r", r, "horocycle radius");
  cls->add_option("--R1", R1, "slit inner radius");
  cls->add_option("--R2", R2, "slit outer radius");
  cls->add_option("--R", R, "geodesic radius in H^2");
  cls->add_option("--theta", theta, "slit half-angle or geodesic angle");
  cls->add_option("--points", points, "CSV of x,y vertices for sampled curves");
  cls->add_flag("--open", open_curve, "points file repeats the first vertex at the end");
  cls->add_option("--out", out, "JSON output (default stdout)");
  cls->add_option("--config", config, "key=value defaults file");

  // scan
  auto* scan = app.add_subcommand("scan", "classify GEO_HORO(R, theta) over a grid");
  std::string R_range = "0.05:0.6", theta_range = "0.1:1.55", svg;
  std::size_t n_scan = 64;
  scan->add_option("--R", R_range, "R range lo:hi (default 0.05:0.6)");
  scan->add_option("--theta", theta_range, "theta range lo:hi (default 0.1:1.55)");
  scan->add_option("--n", n_scan, "nodes per axis (default 64)");
  scan->add_option("--out", out, "CSV output R,theta,label (default stdout)");
  scan->add_option("--svg", svg, "optional SVG heatmap");
  scan->add_option("--config", config, "key=value defaults file");

  // verify
  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  std::string suite = "all";
  verify->add_option("--suite", suite, "all | core | completion | obstruction | bounds (default all)");
  verify->add_option("--config", config, "key=value defaults file");

  // plot
  auto* plot = app.add_subcommand("plot", "emit curves as CSV or SVG");
  std::string what, format;
  std::size_t n_plot = 400;
  double plot_r0 = 0.5, plot_eps = 0.0;
  bool log_r = false;
  plot->add_option("--what", what, "ustar | udisk | profile | kappa | as-ratio | theta-gap")->required();
  plot->add_option("--format", format, "csv | svg (default: from --out extension, else csv)");
  plot->add_option("--n", n_plot, "samples (default 400)");
  plot->add_option("--r0", plot_r0, "completion radius for profile/kappa (default 0.5)");
  plot->add_option("--eps", plot_eps, "use the eps-completion for profile/kappa instead");
  plot->add_flag("--log-r", log_r, "log-scaled radius axis in SVG output");
  plot->add_option("--out", out, "output file (default stdout)");
  plot->add_option("--config", config, "key=value defaults file");

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = apply_config(app, args);
    std::vector<const char*> cargs;
    for (const auto& a : args) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (complete->parsed()) {
      require(r0 > 0 && r0 < 1, "--r0 must lie in (0, 1)");
      require(n_grid >= 2, "--n must be at least 2");
      const auto p = build_completion(r0);
      const auto rep = verify_negative_curvature(p, n_grid);
      const auto& w = std::get<PolyW>(p.segments().front().piece);
      json j = {{"schema_version", kSchemaVersion}, {"command", "complete"},      {"r0", r0},
                {"p", w.p},                         {"c0", w.c0},                  {"c1", w.c1},
                {"curvature", summary_json(rep)}};
      if (!out.empty()) write_file_atomic(resolve_out(out), to_text(p));
      if (!report.empty()) write_file_atomic(resolve_out(report), to_csv(rep));
      std::cout << dump(j);
      return rep.negative ? kExitOk : kExitRefused;
    }
    if (complete_eps->parsed()) {
      require(eps > 0 && eps < 1, "--eps must lie in (0, 1)");
      require(A > 1.0 / 3.0, "--A must exceed 1/3");
      require(n_grid >= 2, "--n must be at least 2");
      const auto [p, P] = build_eps_completion(eps, A);
      const auto [band, rep] = verify_curvature_band(p, eps, n_grid);
      json j = {{"schema_version", kSchemaVersion}, {"command", "complete-eps"}, {"params", to_json(P)},
                {"band", band},                     {"curvature", summary_json(rep)}};
      if (!out.empty()) write_file_atomic(resolve_out(out), to_text(p));
      if (!report.empty()) write_file_atomic(resolve_out(report), to_csv(rep));
      std::cout << dump(j);
      return band ? kExitOk : kExitRefused;
    }
    if (cls->parsed()) {
      CurveSpec c;
      if (family == "horocycle")
        c = CurveSpec::horocycle(r);
      else if (family == "slit")
        c = CurveSpec::slit(R1, R2, theta);
      else if (family == "geo-horo")
        c = CurveSpec::geo_horo(R, theta);
      else if (family == "sampled") {
        require(!points.empty(), "--points is required for sampled curves");
        c = CurveSpec::sampled(read_points(points), !open_curve);
      } else
        throw UsageError("unknown --family " + family);
      emit(out, dump(to_json(classify(c))));
      return kExitOk;
    }
    if (scan->parsed()) {
      require(n_scan >= 2, "--n must be at least 2");
      const auto res = scan_region(parse_range(R_range, "--R"), parse_range(theta_range, "--theta"), n_scan);
      if (!svg.empty()) write_file_atomic(resolve_out(svg), svg_heatmap(res));
      emit(out, scan_csv(res));
      return kExitOk;
    }
    if (verify->parsed()) {
      std::vector<suites::Check> checks;
      auto add = [&](std::vector<suites::Check> v) { checks.insert(checks.end(), v.begin(), v.end()); };
      if (suite == "all" || suite == "core") add(suites::core_suite());
      if (suite == "all" || suite == "completion") add(suites::completion_suite());
      if (suite == "all" || suite == "obstruction") add(suites::obstruction_suite());
      if (suite == "all" || suite == "bounds") add(suites::bounds_suite());
      require(!checks.empty(), "unknown --suite " + suite);
      bool all = true;
      for (const auto& c : checks) {
        all = all && c.ok;
        std::cout << (c.ok ? "PASS " : "FAIL ") << c.suite << ": " << c.name;
        if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
        std::cout << "\n";
      }
      return all ? kExitOk : kExitUsage;
    }
    if (plot->parsed()) {
      require(n_plot >= 2, "--n must be at least 2");
      if (format.empty()) format = out.size() > 4 && out.substr(out.size() - 4) == ".svg" ? "svg" : "csv";
      require(format == "csv" || format == "svg", "--format must be csv or svg");
      std::vector<std::string> cols;
      std::vector<std::vector<double>> data;
      std::string title, xlabel = "r";
      auto profile = [&]() {
        return plot_eps > 0 ? build_eps_completion(plot_eps, 0.4).first : build_completion(plot_r0);
      };
      if (what == "ustar" || what == "udisk") {
        const auto d = what == "ustar" ? LogDensity::punctured() : LogDensity::disk();
        const auto rs = linspace(what == "ustar" ? 0.01 : 0.0, 0.99, n_plot);
        cols = {"r", "u"};
        data = {rs, {}};
        for (double x : rs) data[1].push_back(u_eval(d, x, 0));
        title = what == "ustar" ? "u* = log(1/(r log(1/r)))" : "u_D = log(2/(1 - r^2))";
      } else if (what == "profile") {
        const auto p = profile();
        const auto rs = linspace(0.0, 0.99, n_plot);
        cols = {"r", "u", "du", "ddu"};
        data = {rs, {}, {}, {}};
        for (double x : rs)
          for (int o = 0; o < 3; ++o) data[o + 1].push_back(p.u(x, o));
        title = "completion profile";
      } else if (what == "kappa") {
        const auto p = profile();
        const auto rep = verify_negative_curvature(p, n_plot);
        cols = {"r", "kappa"};
        data = {rep.radii, rep.kappa};
        title = "curvature of the completion";
      } else if (what == "as-ratio") {
        const auto rs = linspace(0.37, 0.999, n_plot);
        cols = {"r", "as_ratio"};
        data = {rs, {}};
        for (double x : rs) data[1].push_back(as_ratio(x));
        title = "(ds*/ds_D)^2";
      } else if (what == "theta-gap") {
        const auto ts = linspace(1e-3, 1.5, n_plot);
        cols = {"theta", "g"};
        data = {ts, {}};
        for (double x : ts) data[1].push_back(theta_gap(x));
        title = "theta gap g";
        xlabel = "theta";
      } else {
        throw UsageError("unknown --what " + what);
      }
      std::string content;
      if (format == "csv") {
        std::ostringstream os;
        for (std::size_t k = 0; k < cols.size(); ++k) os << (k ? "," : "") << cols[k];
        os << "\n";
        for (std::size_t i = 0; i < data[0].size(); ++i) {
          for (std::size_t k = 0; k < cols.size(); ++k) os << (k ? "," : "") << fmt17(data[k][i]);
          os << "\n";
        }
        content = os.str();
      } else {
        std::vector<Series> series;
        for (std::size_t k = 1; k < cols.size(); ++k) series.push_back({cols[k], data[0], data[k]});
        content = svg_plot(series, title, xlabel, cols.size() == 2 ? cols[1] : "value", log_r);
      }
      emit(out, content);
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    if (e.kind() == ErrorKind::NecessityViolation)
      std::cerr << "a completion inside B_r exists only when length(C_r) > 2*pi, i.e. r > 1/e\n";
    return e.kind() == ErrorKind::NecessityViolation || e.kind() == ErrorKind::EpsTooLarge ? kExitRefused
                                                                                           : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
