#include "anigraph/energy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "anigraph/error.hpp"

namespace anigraph {

Grid::Grid(double x_min, double x_max, int n_cells)
    : x_min_(x_min), x_max_(x_max), n_cells_(n_cells), h_((x_max - x_min) / n_cells) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max)) {
    throw DomainError("grid needs finite x_min < x_max");
  }
  if (n_cells < 1) throw DomainError("grid needs at least one cell");
}

std::vector<double> Grid::nodes() const {
  std::vector<double> out(static_cast<std::size_t>(n_nodes()));
  for (int j = 0; j < n_nodes(); ++j) out[static_cast<std::size_t>(j)] = node(j);
  return out;
}

Profile::Profile(Grid grid_, std::vector<double> values_) : grid(grid_), values(std::move(values_)) {
  if (values.size() != static_cast<std::size_t>(grid.n_nodes())) {
    throw DomainError("profile length does not match the grid");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("profile values must be finite");
  }
}

GSpec GSpec::constant(double c) {
  if (!std::isfinite(c)) throw DomainError("constant datum must be finite");
  GSpec g;
  g.kind_ = Kind::constant;
  g.level_ = c;
  return g;
}

GSpec GSpec::step(double a) {
  if (!std::isfinite(a)) throw DomainError("step datum must be finite");
  GSpec g;
  g.kind_ = Kind::step;
  g.level_ = a;
  return g;
}

GSpec GSpec::tabulated(std::vector<double> s, std::vector<double> values, Interp interp, std::string source) {
  if (s.size() != values.size() || s.empty()) throw IngestionError("datum table needs matching, nonempty columns");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s[i]) || !std::isfinite(values[i])) throw IngestionError("datum table has non-finite entries");
    if (i > 0 && !(s[i] > s[i - 1])) throw IngestionError("datum abscissae must be strictly increasing");
  }
  if (interp == Interp::linear && s.size() < 2) throw IngestionError("linear datum needs two samples");
  GSpec g;
  g.kind_ = Kind::csv;
  g.s_ = std::move(s);
  g.g_ = std::move(values);
  g.interp_ = interp;
  g.source_ = std::move(source);
  return g;
}

GSpec GSpec::from_csv(const std::string& path, Interp interp) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open datum file " + path);
  std::string line;
  if (!std::getline(in, line)) throw IngestionError("empty datum file " + path);
  std::vector<double> s;
  std::vector<double> g;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double a = 0.0;
    double b = 0.0;
    if (!(ls >> a >> b)) throw IngestionError(path + ": malformed row " + std::to_string(row));
    s.push_back(a);
    g.push_back(b);
  }
  return tabulated(std::move(s), std::move(g), interp, path);
}

double GSpec::value_at(double s, double x_min, double x_max) const {
  switch (kind_) {
    case Kind::constant: return level_;
    case Kind::step: {
      const double mid = 0.5 * (x_min + x_max);
      const double eps = 1e-12 * (x_max - x_min);
      if (std::abs(s - mid) <= eps) return 0.0;
      return s < mid ? -level_ : level_;
    }
    case Kind::csv: break;
  }
  const double span = std::max(std::abs(s_.front()), std::abs(s_.back())) + 1.0;
  const double eps = 1e-12 * span;
  if (s < s_.front() - eps || s > s_.back() + eps) {
    throw IngestionError("datum samples do not cover the interval");
  }
  auto it = std::upper_bound(s_.begin(), s_.end(), s);
  std::size_t k = it == s_.begin() ? 0 : static_cast<std::size_t>(it - s_.begin()) - 1;
  if (interp_ == Interp::piecewise_constant) {
    // sample k holds on [s_k, s_{k+1}); breakpoints take the mean of both sides
    if (k > 0 && std::abs(s - s_[k]) <= eps) return 0.5 * (g_[k - 1] + g_[k]);
    if (k + 1 < s_.size() && std::abs(s - s_[k + 1]) <= eps) return 0.5 * (g_[k] + g_[k + 1]);
    return g_[k];
  }
  k = std::min(k, s_.size() - 2);
  const double t = std::clamp((s - s_[k]) / (s_[k + 1] - s_[k]), 0.0, 1.0);
  return g_[k] + t * (g_[k + 1] - g_[k]);
}

double GSpec::positive_part_inf() const {
  switch (kind_) {
    case Kind::constant: return std::max(level_, 0.0);
    case Kind::step: return std::abs(level_);
    case Kind::csv: break;
  }
  double m = 0.0;
  for (double v : g_) m = std::max(m, v);
  return m;
}

double GSpec::negative_part_inf() const {
  switch (kind_) {
    case Kind::constant: return std::max(-level_, 0.0);
    case Kind::step: return std::abs(level_);
    case Kind::csv: break;
  }
  double m = 0.0;
  for (double v : g_) m = std::max(m, -v);
  return m;
}

double GSpec::norm_inf() const { return std::max(positive_part_inf(), negative_part_inf()); }

std::vector<double> sample_g(const GSpec& g, const Grid& grid) {
  std::vector<double> out(static_cast<std::size_t>(grid.n_nodes()));
  for (int j = 0; j < grid.n_nodes(); ++j) {
    out[static_cast<std::size_t>(j)] = g.value_at(grid.node(j), grid.x_min(), grid.x_max());
  }
  return out;
}

std::vector<double> fidelity_weights(const Grid& grid) {
  std::vector<double> w(static_cast<std::size_t>(grid.n_nodes()), grid.h());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

double pairwise_sum(std::span<const double> terms) {
  if (terms.size() <= 8) {
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
  }
  const std::size_t half = terms.size() / 2;
  return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

EnergyEvaluator::EnergyEvaluator(const Anisotropy& aniso, const Grid& grid, std::span<const double> g, double p)
    : aniso_(aniso), h_(grid.h()), g_(g), p_(p), weights_(fidelity_weights(grid)), terms_(g.size()) {
  if (!(p >= 1.0)) throw DomainError("fidelity exponent p must be at least 1");
  if (g.size() != static_cast<std::size_t>(grid.n_nodes())) throw DomainError("datum length does not match the grid");
}

EnergyBreakdown EnergyEvaluator::operator()(std::span<const double> u) {
  if (u.size() != g_.size()) throw DomainError("datum length does not match the profile");
  const std::size_t n = u.size();
  for (std::size_t i = 0; i + 1 < n; ++i) terms_[i] = aniso_.eval_dual({-(u[i + 1] - u[i]), h_});
  EnergyBreakdown e;
  e.area = pairwise_sum(std::span<const double>(terms_).first(n - 1));
  for (std::size_t j = 0; j < n; ++j) {
    const double d = std::abs(u[j] - g_[j]);
    terms_[j] = weights_[j] * (p_ == 1.0 ? d : p_ == 2.0 ? d * d : std::pow(d, p_));
  }
  e.fidelity = pairwise_sum(terms_);
  e.total = e.area + e.fidelity;
  return e;
}

EnergyBreakdown energy(const Anisotropy& aniso, const Profile& u, std::span<const double> g, double p) {
  if (!(p >= 1.0)) throw DomainError("fidelity exponent p must be at least 1");
  if (g.size() != u.values.size()) throw DomainError("datum length does not match the profile");
  return EnergyEvaluator(aniso, u.grid, g, p)(u.values);
}

Profile truncate(const Profile& u, double lo, double hi) {
  if (lo > hi) throw DomainError("truncate needs lo <= hi");
  std::vector<double> v = u.values;
  for (double& x : v) x = std::clamp(x, lo, hi);
  return Profile(u.grid, std::move(v));
}

}  // namespace anigraph
