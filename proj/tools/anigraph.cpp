// Command-line front end: one subcommand per analysis, artifacts written to --out-dir.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>

#include <CLI11.hpp>

#include "anigraph/classifier.hpp"
#include "anigraph/error.hpp"
#include "anigraph/geometry.hpp"
#include "anigraph/io.hpp"
#include "anigraph/regularity.hpp"
#include "anigraph/solver.hpp"
#include "anigraph/svg.hpp"
#include "anigraph/threshold.hpp"

namespace fs = std::filesystem;
using namespace anigraph;
using io::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Globals {
  std::string out_dir = ".";
  unsigned long seed = 0;
  bool quiet = false;
};

// Collects what a command read, resolved and wrote, then emits manifest.json.
class Run {
 public:
  Run(std::string command, const Globals& g) : command_(std::move(command)), g_(g) {
    fs::create_directories(g_.out_dir);
  }

  void input(const std::string& key, const std::string& value) { inputs_[key] = value; }
  void config(const std::string& key, json value) { config_[key] = std::move(value); }

  template <class F>
  auto phase(const std::string& name, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      phases_[name] = seconds_since(t0);
    } else {
      auto out = f();
      phases_[name] = seconds_since(t0);
      return out;
    }
  }

  fs::path artifact(const std::string& name) {
    artifacts_.push_back(name);
    return fs::path(g_.out_dir) / name;
  }

  void write_json(const std::string& name, const json& j) {
    std::ofstream out(artifact(name));
    out << j.dump(2) << '\n';
  }

  void finish() {
    json m{{"command", command_},   {"tool_version", kVersion}, {"inputs", inputs_},
           {"config", config_},     {"seed", g_.seed},          {"artifacts", artifacts_},
           {"wall_time_s", phases_}};
    std::ofstream out(fs::path(g_.out_dir) / "manifest.json");
    out << m.dump(2) << '\n';
  }

  bool quiet() const { return g_.quiet; }

 private:
  static double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  std::string command_;
  Globals g_;
  json inputs_ = json::object();
  json config_ = json::object();
  json phases_ = json::object();
  std::vector<std::string> artifacts_;
};

// A JSON argument is either inline text starting with '{' or a file path.
json load_json_arg(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return io::parse_json(arg, "inline JSON");
  return io::read_json_file(arg);
}

fs::path base_dir_of(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return {};
  return fs::path(arg).parent_path();
}

void write_profile(const fs::path& path, const Profile& u) {
  std::ofstream out(path);
  if (!out) throw IngestionError("cannot write " + path.string());
  io::write_profile_csv(out, u);
}

std::vector<Vec2> graph_points(const Profile& u) {
  std::vector<Vec2> pts;
  for (int j = 0; j < u.grid.n_nodes(); ++j) pts.push_back({u.grid.node(j), u.values[static_cast<std::size_t>(j)]});
  return pts;
}

int cmd_wulff(const Globals& g, const std::string& aniso_arg, int samples, bool svg) {
  Run run("wulff", g);
  run.input("anisotropy", aniso_arg);
  const Anisotropy a = run.phase("load", [&] { return io::anisotropy_from_json(load_json_arg(aniso_arg)); });
  run.config("anisotropy", io::anisotropy_to_json(a));
  run.config("samples", samples);
  const auto pts = run.phase("sample", [&] { return a.wulff_sample(samples); });
  {
    std::ofstream out(run.artifact("wulff_boundary.csv"));
    out << "x,y\n";
    for (const Vec2& p : pts) out << io::format_double(p.x) << ',' << io::format_double(p.y) << '\n';
  }
  const json report{{"measures", io::to_json(a.measures())}, {"flags", io::to_json(a.flags())},
                    {"label", a.label()}};
  run.write_json("wulff.json", report);
  if (svg) {
    SvgPlot plot(480, 480);
    plot.set_equal_aspect(true);
    plot.set_title("Wulff shape: " + a.label());
    plot.add_polyline(pts, "#1f5fa8", 2.0, true);
    plot.write_file(run.artifact("wulff.svg").string());
  }
  if (!run.quiet()) {
    std::cout << std::setprecision(10) << "alpha0 " << a.measures().alpha0 << "  c_phi " << a.measures().c_phi
              << "  area " << a.measures().area << "  perimeter " << a.measures().phi_perimeter << '\n'
              << "partially_monotone " << a.flags().partially_monotone << "  vertical_facets "
              << a.flags().vertical_facets << "  elliptic " << a.flags().elliptic << '\n';
  }
  run.finish();
  return 0;
}

int cmd_threshold(const Globals& g, const std::string& aniso_arg, double p, double length) {
  Run run("threshold", g);
  run.input("anisotropy", aniso_arg);
  const Anisotropy a = io::anisotropy_from_json(load_json_arg(aniso_arg));
  run.config("anisotropy", io::anisotropy_to_json(a));
  run.config("p", p);
  run.config("length", length);
  const ThresholdReport r = run.phase("threshold", [&] { return sigma_threshold(a, p, length); });
  run.write_json("threshold.json", io::to_json(r));
  if (!run.quiet()) {
    std::cout << std::setprecision(10) << std::left;
    auto row = [](const std::string& k, const auto& v) { std::cout << "  " << std::setw(20) << k << v << '\n'; };
    row("alpha0", r.alpha0);
    row("c_phi", r.c_phi);
    row("phi(e1)", r.phi_e1);
    row("phi(e2)", r.phi_e2);
    row("sigma", r.sigma);
    row("gamma", r.gamma);
    row("lambda", r.lambda);
    row("active branch", r.active_branch);
    row("partially monotone", r.hypotheses.partially_monotone ? "yes" : "no");
    row("vertical facets", r.hypotheses.vertical_facets ? "yes" : "no");
    row("elliptic", r.hypotheses.elliptic ? "yes" : "no");
    row("regularity class", to_string(r.regularity_class));
  }
  run.finish();
  return 0;
}

int cmd_solve(const Globals& g, const std::string& problem_arg, bool svg) {
  Run run("solve", g);
  run.input("problem", problem_arg);
  const Problem pr = io::problem_from_json(load_json_arg(problem_arg), base_dir_of(problem_arg));
  run.config("problem", io::problem_to_json(pr));
  const SolveReport rep = run.phase("solve", [&] { return solve(pr); });
  write_profile(run.artifact("profile.csv"), rep.profile);
  run.write_json("solve_report.json", io::to_json(rep));
  if (svg) {
    const auto gs = sample_g(pr.g, pr.grid());
    SvgPlot plot;
    plot.set_title("u (blue) and datum g (grey)");
    plot.add_polyline(graph_points(Profile(pr.grid(), gs)), "#999999", 1.0);
    plot.add_polyline(graph_points(rep.profile), "#1f5fa8", 2.0);
    plot.write_file(run.artifact("solve.svg").string());
    if (!rep.energy_trace.empty()) {
      SvgPlot trace;
      trace.set_title("energy against iteration");
      std::vector<Vec2> pts;
      for (const auto& [it, e] : rep.energy_trace) pts.push_back({static_cast<double>(it), e});
      trace.add_polyline(pts, "#b03a2e", 1.5);
      trace.write_file(run.artifact("energy_trace.svg").string());
    }
  }
  if (!run.quiet()) {
    std::cout << std::setprecision(12) << "energy " << rep.energy.total << "  iterations " << rep.iterations
              << "  converged " << (rep.converged ? "yes" : "no") << '\n';
    if (!rep.converged) std::cout << "warning: iteration budget exhausted\n";
  }
  run.finish();
  return 0;
}

int cmd_diagnose(const Globals& g, const std::string& problem_arg, int levels, double radius, double tol, bool svg) {
  Run run("diagnose", g);
  run.input("problem", problem_arg);
  const Problem pr = io::problem_from_json(load_json_arg(problem_arg), base_dir_of(problem_arg));
  const ThresholdReport th = sigma_threshold(pr.aniso, pr.p, pr.x_max - pr.x_min);
  if (radius <= 0.0) radius = 0.9 * th.alpha0 / th.lambda;
  const RefinementStudy st = run.phase("refinement", [&] { return refinement_study(pr, levels); });
  const SolveReport& finest = st.reports.back();
  if (tol < 0.0) tol = 5.0 * finest.profile.grid.h();
  run.config("problem", io::problem_to_json(pr));
  run.config("levels", levels);
  run.config("radius", radius);
  run.config("tol", tol);

  const Grid& grid = finest.profile.grid;
  RegularityReport rep = lipschitz_report(finest.profile, sample_g(pr.g, grid));
  rep.refinement_classification = st.classification;
  rep.tangent_ball = run.phase("tangent_balls", [&] { return tangent_ball_check(pr.aniso, finest.profile, radius, tol); });

  json out = io::to_json(rep);
  out["refinement_study"] = io::to_json(st);
  out["sigma"] = th.sigma;
  out["datum_sup"] = pr.g.norm_inf();
  run.write_json("diagnose.json", out);
  write_profile(run.artifact("profile.csv"), finest.profile);

  if (svg) {
    SvgPlot plot;
    plot.set_equal_aspect(true);
    plot.set_title("graph with tangent Wulff shapes of radius " + io::format_double(radius));
    plot.add_polyline(graph_points(finest.profile), "#1f5fa8", 2.0);
    const auto shape = pr.aniso.wulff_sample(256);
    const std::size_t nn = finest.profile.values.size();
    for (std::size_t k = 1; k < 8; ++k) {
      const std::size_t j = k * (nn - 1) / 8;
      const double du = finest.profile.values[j + 1] - finest.profile.values[j - 1];
      const Vec2 nu = Vec2{-du, 2 * grid.h()} / Vec2{-du, 2 * grid.h()}.norm();
      const Vec2 x{grid.node(static_cast<int>(j)), finest.profile.values[j]};
      const Vec2 q = contact_direction(pr.aniso, nu) * radius;
      for (const Vec2 c : {x - q, x + q}) {
        std::vector<Vec2> ball;
        for (const Vec2& w : shape) ball.push_back(c + w * radius);
        plot.add_polyline(ball, "#c0392b", 0.8, true);
      }
    }
    plot.write_file(run.artifact("diagnose.svg").string());
  }
  if (!run.quiet()) {
    std::cout << std::setprecision(8) << "classification " << to_string(st.classification) << "  slopes";
    for (double s : st.slopes) std::cout << ' ' << s;
    std::cout << "\nlipschitz " << rep.lipschitz_estimate << "  max principle "
              << (rep.max_principle_ok ? "ok" : "violated") << "  tangent balls " << rep.tangent_ball.fraction_verified_above
              << " above, " << rep.tangent_ball.fraction_verified_below << " below\n";
  }
  run.finish();
  return 0;
}

int cmd_classify(const Globals& g, const std::string& profile_path, const std::string& aniso_arg, double tol) {
  Run run("classify", g);
  run.input("profile", profile_path);
  run.input("anisotropy", aniso_arg);
  const Profile u = io::read_profile_csv_file(profile_path);
  const Anisotropy a = io::anisotropy_from_json(load_json_arg(aniso_arg));
  if (tol <= 0.0) tol = a.default_face_tol();
  run.config("anisotropy", io::anisotropy_to_json(a));
  run.config("tol", tol);
  const CahnHoffmanResult r = run.phase("classify", [&] { return cahn_hoffman(a, u, tol); });
  json out = io::to_json(r);
  if (r.witness_arc) out["witness_midpoint"] = io::to_json(a.chart().point_at(r.witness_arc->mid_param()));
  run.write_json("classify.json", out);
  if (!run.quiet()) {
    std::cout << "feasible " << (r.feasible ? "yes" : "no") << "  monotone " << to_string(r.monotone) << '\n';
    if (r.warning) std::cout << "warning: " << *r.warning << '\n';
  }
  run.finish();
  return 0;
}

int cmd_rearrange(const Globals& g, const std::string& raster_path, const std::string& aniso_arg) {
  Run run("rearrange", g);
  run.input("raster", raster_path);
  const RasterSet f = read_raster_file(raster_path);
  const ColumnProfile v = run.phase("rearrange", [&] { return vertical_rearrangement(f); });
  {
    std::ofstream out(run.artifact("rearranged.csv"));
    out << "s,u\n";
    const auto cs = v.centers();
    for (std::size_t i = 0; i < cs.size(); ++i) {
      out << io::format_double(cs[i]) << ',' << io::format_double(v.heights[i]) << '\n';
    }
  }
  const RasterSet sub = subgraph_raster(v, f);
  {
    std::ofstream out(run.artifact("rearranged_raster.txt"));
    write_raster(out, sub);
  }
  json report{{"column_counts", v.counts}, {"nx", f.nx()}, {"ny", f.ny()}};
  if (!aniso_arg.empty()) {
    run.input("anisotropy", aniso_arg);
    const Anisotropy a = io::anisotropy_from_json(load_json_arg(aniso_arg));
    run.config("anisotropy", io::anisotropy_to_json(a));
    report["perimeter_before"] = raster_phi_perimeter(f, a);
    report["perimeter_after"] = raster_phi_perimeter(sub, a);
  }
  run.write_json("rearrange.json", report);
  if (!run.quiet() && report.contains("perimeter_before")) {
    std::cout << std::setprecision(12) << "phi perimeter " << report["perimeter_before"].get<double>() << " -> "
              << report["perimeter_after"].get<double>() << '\n';
  }
  run.finish();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic graph-area problems: solve, threshold, diagnose, classify"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--out-dir", g.out_dir, "Directory for artifacts")->capture_default_str();
  app.add_option("--seed", g.seed, "Seed recorded in the manifest for fuzz corpora")->capture_default_str();
  app.add_flag("--quiet", g.quiet, "Suppress the stdout summary");
  app.set_version_flag("--version", kVersion);

  std::string aniso_arg;
  std::string problem_arg;
  std::string profile_arg;
  std::string raster_arg;
  int samples = 4096;
  bool svg = false;
  double p = 1.0;
  double length = 2.0;
  int levels = 3;
  double radius = 0.0;
  double tol = -1.0;
  double face_tol = 0.0;

  auto* wulff = app.add_subcommand("wulff", "Boundary polyline, isoperimetric constants and symmetry flags");
  wulff->add_option("anisotropy", aniso_arg, "Anisotropy JSON file or inline JSON")->required();
  wulff->add_option("--samples", samples, "Boundary samples")->check(CLI::Range(3, 1 << 22))->capture_default_str();
  wulff->add_flag("--svg", svg, "Also write wulff.svg");
  wulff->add_option("--out", g.out_dir, "Same as the global --out-dir");

  auto* thr = app.add_subcommand("threshold", "Smallness threshold sigma and the constants behind it");
  thr->add_option("anisotropy", aniso_arg, "Anisotropy JSON file or inline JSON")->required();
  thr->add_option("--p", p, "Fidelity exponent")->capture_default_str();
  thr->add_option("--length", length, "Interval length")->capture_default_str();

  auto* slv = app.add_subcommand("solve", "Minimize the discrete functional");
  slv->add_option("problem", problem_arg, "Problem JSON file or inline JSON")->required();
  slv->add_flag("--svg", svg, "Also write solve.svg (and energy_trace.svg when traced)");

  auto* diag = app.add_subcommand("diagnose", "Refinement study, Lipschitz and tangent-ball diagnostics");
  diag->add_option("problem", problem_arg, "Problem JSON file or inline JSON")->required();
  diag->add_option("--levels", levels, "Number of dyadic refinements")->check(CLI::Range(3, 12))->capture_default_str();
  diag->add_option("--radius", radius, "Tangent ball radius (default 0.9 alpha0 / Lambda)");
  diag->add_option("--tol", tol, "Tangent ball tolerance (default 5h on the finest grid)");
  diag->add_flag("--svg", svg, "Also write diagnose.svg");

  auto* cls = app.add_subcommand("classify", "Cahn-Hoffman test for local minimality of a profile");
  cls->add_option("profile", profile_arg, "Profile CSV (s,u)")->required();
  cls->add_option("anisotropy", aniso_arg, "Anisotropy JSON file or inline JSON")->required();
  cls->add_option("--tol", face_tol, "Face tolerance (default from the anisotropy)");

  auto* rea = app.add_subcommand("rearrange", "Vertical rearrangement of a raster set");
  rea->add_option("raster", raster_arg, "Raster file (JSON header line + 0/1 rows)")->required();
  rea->add_option("--anisotropy", aniso_arg, "Report phi-perimeters before and after");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*wulff) return cmd_wulff(g, aniso_arg, samples, svg);
    if (*thr) return cmd_threshold(g, aniso_arg, p, length);
    if (*slv) return cmd_solve(g, problem_arg, svg);
    if (*diag) return cmd_diagnose(g, problem_arg, levels, radius, tol, svg);
    if (*cls) return cmd_classify(g, profile_arg, aniso_arg, face_tol);
    if (*rea) return cmd_rearrange(g, raster_arg, aniso_arg);
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
