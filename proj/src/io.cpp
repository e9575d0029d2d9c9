#include "anigraph/io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "anigraph/error.hpp"

namespace anigraph::io {

namespace fs = std::filesystem;

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw IngestionError(what + ": malformed JSON: " + e.what());
  }
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path.string());
}

namespace {

template <class T>
T field(const json& j, const char* key, const char* context) {
  if (!j.is_object() || !j.contains(key)) {
    throw IngestionError(std::string(context) + ": missing field \"" + key + "\"");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw IngestionError(std::string(context) + ": bad field \"" + key + "\": " + e.what());
  }
}

template <class T>
T field_or(const json& j, const char* key, T fallback, const char* context) {
  if (!j.contains(key)) return fallback;
  return field<T>(j, key, context);
}

Interp interp_from(const std::string& s) {
  if (s == "linear") return Interp::linear;
  if (s == "piecewise_constant" || s == "piecewise-constant") return Interp::piecewise_constant;
  throw IngestionError("unknown interpolation \"" + s + "\"");
}

std::string interp_name(Interp i) { return i == Interp::linear ? "linear" : "piecewise_constant"; }

}  // namespace

Anisotropy anisotropy_from_json(const json& j) {
  if (!j.is_object()) throw IngestionError("anisotropy: expected a JSON object");
  const auto kind = field<std::string>(j, "kind", "anisotropy");
  if (kind == "euclidean") return Anisotropy::euclidean();
  if (kind == "ellipse") {
    return Anisotropy::ellipse(field<double>(j, "a", "anisotropy"), field<double>(j, "b", "anisotropy"));
  }
  if (kind == "lp") return Anisotropy::lp(field<double>(j, "q", "anisotropy"));
  if (kind == "polygon") {
    const auto raw = field<std::vector<std::vector<double>>>(j, "vertices", "anisotropy");
    std::vector<Vec2> v;
    for (const auto& p : raw) {
      if (p.size() != 2) throw IngestionError("anisotropy: vertices must be [x, y] pairs");
      v.emplace_back(p[0], p[1]);
    }
    return Anisotropy::polygon(std::move(v));
  }
  throw IngestionError("anisotropy: unknown kind \"" + kind + "\"");
}

json anisotropy_to_json(const Anisotropy& a) {
  switch (a.kind()) {
    case AnisotropyKind::euclidean:
      return {{"kind", "euclidean"}};
    case AnisotropyKind::ellipse:
      return {{"kind", "ellipse"}, {"a", a.ellipse_a()}, {"b", a.ellipse_b()}};
    case AnisotropyKind::lp:
      return {{"kind", "lp"}, {"q", a.lp_q()}};
    case AnisotropyKind::polygon: {
      json v = json::array();
      for (const Vec2& p : a.vertices()) v.push_back({p.x, p.y});
      return {{"kind", "polygon"}, {"vertices", v}};
    }
    case AnisotropyKind::generic:
      break;
  }
  return {{"kind", "generic"}, {"label", a.label()}};
}

GSpec gspec_from_json(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw IngestionError("g: expected a JSON object");
  const auto kind = field<std::string>(j, "kind", "g");
  if (kind == "constant") return GSpec::constant(field<double>(j, "c", "g"));
  if (kind == "step") return GSpec::step(field<double>(j, "a", "g"));
  const Interp interp = interp_from(field_or<std::string>(j, "interp", "linear", "g"));
  if (kind == "csv") {
    fs::path p = field<std::string>(j, "path", "g");
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    return GSpec::from_csv(p.string(), interp);
  }
  if (kind == "table") {
    return GSpec::tabulated(field<std::vector<double>>(j, "s", "g"), field<std::vector<double>>(j, "g", "g"), interp);
  }
  throw IngestionError("g: unknown kind \"" + kind + "\"");
}

json gspec_to_json(const GSpec& g) {
  switch (g.kind()) {
    case GSpec::Kind::constant:
      return {{"kind", "constant"}, {"c", g.level()}};
    case GSpec::Kind::step:
      return {{"kind", "step"}, {"a", g.level()}};
    case GSpec::Kind::csv:
      break;
  }
  if (!g.source().empty()) return {{"kind", "csv"}, {"path", g.source()}, {"interp", interp_name(g.interp())}};
  return {{"kind", "table"}, {"s", g.abscissae()}, {"g", g.ordinates()}, {"interp", interp_name(g.interp())}};
}

SolverConfig solver_config_from_json(const json& j) {
  SolverConfig c;
  if (j.is_null()) return c;
  if (!j.is_object()) throw IngestionError("solver: expected a JSON object");
  c.max_iters = field_or<long>(j, "max_iters", c.max_iters, "solver");
  c.tol_rel = field_or<double>(j, "tol_rel", c.tol_rel, "solver");
  c.stagnation_window = field_or<int>(j, "stagnation_window", c.stagnation_window, "solver");
  c.tau = field_or<double>(j, "tau", c.tau, "solver");
  c.sigma_step = field_or<double>(j, "sigma_step", c.sigma_step, "solver");
  c.over_relaxation = field_or<double>(j, "over_relaxation", c.over_relaxation, "solver");
  c.trace_stride = field_or<int>(j, "trace_stride", c.trace_stride, "solver");
  c.coarsest_cells = field_or<int>(j, "coarsest_cells", c.coarsest_cells, "solver");
  c.validate();
  return c;
}

json solver_config_to_json(const SolverConfig& c) {
  return {{"max_iters", c.max_iters},       {"tol_rel", c.tol_rel},
          {"stagnation_window", c.stagnation_window}, {"tau", c.tau},
          {"sigma_step", c.sigma_step},     {"over_relaxation", c.over_relaxation},
          {"trace_stride", c.trace_stride}, {"coarsest_cells", c.coarsest_cells}};
}

Problem problem_from_json(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw IngestionError("problem: expected a JSON object");
  Problem p;
  p.aniso = anisotropy_from_json(field<json>(j, "anisotropy", "problem"));
  if (j.contains("interval")) {
    const auto iv = field<std::vector<double>>(j, "interval", "problem");
    if (iv.size() != 2) throw IngestionError("problem: interval must be [x_min, x_max]");
    p.x_min = iv[0];
    p.x_max = iv[1];
  }
  p.p = field_or<double>(j, "p", p.p, "problem");
  if (!(p.p >= 1.0)) throw DomainError("problem: fidelity exponent p must be at least 1");
  p.g = gspec_from_json(field<json>(j, "g", "problem"), base_dir);
  if (j.contains("grid")) p.n_cells = field<int>(field<json>(j, "grid", "problem"), "n", "grid");
  p.solver = solver_config_from_json(j.contains("solver") ? j.at("solver") : json());
  p.grid();  // validates the interval and cell count
  return p;
}

json problem_to_json(const Problem& p) {
  return {{"anisotropy", anisotropy_to_json(p.aniso)},
          {"interval", {p.x_min, p.x_max}},
          {"p", p.p},
          {"g", gspec_to_json(p.g)},
          {"grid", {{"n", p.n_cells}}},
          {"solver", solver_config_to_json(p.solver)}};
}

std::string format_double(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

void write_profile_csv(std::ostream& out, const Profile& u) {
  out << "s,u\n";
  for (int j = 0; j < u.grid.n_nodes(); ++j) {
    out << format_double(u.grid.node(j)) << ',' << format_double(u.values[static_cast<std::size_t>(j)]) << '\n';
  }
}

Profile read_profile_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IngestionError("profile CSV is empty");
  std::vector<double> s;
  std::vector<double> u;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IngestionError("profile CSV: row " + std::to_string(row) + " lacks a comma");
    try {
      std::size_t used = 0;
      s.push_back(std::stod(line.substr(0, comma), &used));
      u.push_back(std::stod(line.substr(comma + 1), &used));
    } catch (const std::exception&) {
      throw IngestionError("profile CSV: malformed row " + std::to_string(row));
    }
  }
  if (s.size() < 2) throw IngestionError("profile CSV needs at least two rows");
  const int n = static_cast<int>(s.size()) - 1;
  Grid grid = [&] {
    try {
      return Grid(s.front(), s.back(), n);
    } catch (const DomainError& e) {
      throw IngestionError(std::string("profile CSV: ") + e.what());
    }
  }();
  const double slack = 1e-9 * grid.length();
  for (int j = 0; j <= n; ++j) {
    if (std::abs(s[static_cast<std::size_t>(j)] - grid.node(j)) > slack) {
      throw IngestionError("profile CSV: abscissae are not uniformly spaced");
    }
  }
  try {
    return Profile(grid, std::move(u));
  } catch (const DomainError& e) {
    throw IngestionError(std::string("profile CSV: ") + e.what());
  }
}

Profile read_profile_csv_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open profile " + path.string());
  return read_profile_csv(in);
}

json to_json(const Vec2& v) { return json::array({v.x, v.y}); }

json to_json(const WulffMeasures& m) {
  return {{"area", m.area},     {"phi_perimeter", m.phi_perimeter}, {"c_phi", m.c_phi},
          {"alpha0", m.alpha0}, {"sample_count", m.sample_count}};
}

json to_json(const SymmetryFlags& f) {
  return {{"partially_monotone", f.partially_monotone},
          {"vertical_facets", f.vertical_facets},
          {"elliptic", f.elliptic},
          {"rolling_radius_estimate", f.rolling_radius_estimate}};
}

json to_json(const BoundaryArc& a) {
  return {{"start", a.start}, {"length", a.length}, {"perimeter", a.perimeter},
          {"first", to_json(a.first)}, {"last", to_json(a.last)}};
}

json to_json(const EnergyBreakdown& e) { return {{"area", e.area}, {"fidelity", e.fidelity}, {"total", e.total}}; }

json to_json(const SolveReport& r) {
  json trace = json::array();
  for (const auto& [it, e] : r.energy_trace) trace.push_back({it, e});
  json j{{"energy", to_json(r.energy)},
         {"iterations", r.iterations},
         {"converged", r.converged},
         {"final_stagnation", r.final_stagnation},
         {"dual_feasibility_max_violation", r.dual_feasibility_max_violation},
         {"n_cells", r.profile.grid.n_cells()},
         {"energy_trace", trace}};
  if (!r.converged) j["warning"] = "iteration budget exhausted before the stagnation test passed";
  return j;
}

json to_json(const ThresholdReport& r) {
  return {{"alpha0", r.alpha0},
          {"c_phi", r.c_phi},
          {"sigma", r.sigma},
          {"gamma", r.gamma},
          {"lambda", r.lambda},
          {"phi_e1", r.phi_e1},
          {"phi_e2", r.phi_e2},
          {"hypotheses",
           {{"partially_monotone", r.hypotheses.partially_monotone},
            {"vertical_facets", r.hypotheses.vertical_facets},
            {"elliptic", r.hypotheses.elliptic}}},
          {"regularity_class", to_string(r.regularity_class)},
          {"branch_min", r.branch_min},
          {"active_branch", r.active_branch}};
}

json to_json(const RegularityReport& r) {
  return {{"lipschitz_estimate", r.lipschitz_estimate},
          {"normal_deviation_min", r.normal_deviation_min},
          {"max_principle_ok", r.max_principle_ok},
          {"max_principle_margins", {{"lower", r.lower_margin}, {"upper", r.upper_margin}}},
          {"refinement_classification", to_string(r.refinement_classification)},
          {"tangent_ball",
           {{"radius_tested", r.tangent_ball.radius_tested},
            {"fraction_verified_above", r.tangent_ball.fraction_verified_above},
            {"fraction_verified_below", r.tangent_ball.fraction_verified_below}}}};
}

json to_json(const RefinementStudy& s) {
  json conv = json::array();
  for (bool c : s.converged) conv.push_back(c);
  return {{"cells", s.cells},           {"slopes", s.slopes},   {"ratios", s.ratios},
          {"energies", s.energies},     {"converged", conv},
          {"classification", to_string(s.classification)}};
}

json to_json(const CahnHoffmanResult& r) {
  json j{{"feasible", r.feasible}, {"monotone", to_string(r.monotone)}, {"normals_tested", r.normals_tested}};
  j["witness_arc"] = r.witness_arc ? to_json(*r.witness_arc) : json();
  j["infeasibility_witness"] =
      r.infeasibility_witness ? json::array({r.infeasibility_witness->first, r.infeasibility_witness->second}) : json();
  if (r.warning) j["warning"] = *r.warning;
  return j;
}

}  // namespace anigraph::io
