#include "anigraph/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anigraph/error.hpp"

namespace anigraph {

std::string to_string(RefinementClass c) {
  switch (c) {
    case RefinementClass::lipschitz:
      return "lipschitz";
    case RefinementClass::jump_suspected:
      return "jump_suspected";
    case RefinementClass::inconclusive:
      break;
  }
  return "inconclusive";
}

double max_slope(const Profile& u) {
  double m = 0.0;
  for (std::size_t j = 0; j + 1 < u.values.size(); ++j) m = std::max(m, std::abs(u.values[j + 1] - u.values[j]));
  return m / u.grid.h();
}

RegularityReport lipschitz_report(const Profile& u, std::span<const double> g) {
  if (g.size() != u.values.size()) throw DomainError("datum length does not match the profile");
  RegularityReport rep;
  const double h = u.grid.h();
  double steepest = 0.0;
  for (std::size_t j = 0; j + 1 < u.values.size(); ++j) {
    steepest = std::max(steepest, std::abs(u.values[j + 1] - u.values[j]));
  }
  rep.lipschitz_estimate = steepest / h;
  rep.normal_deviation_min = h / std::hypot(steepest, h);

  double gpos = 0.0;
  double gneg = 0.0;
  for (double v : g) {
    gpos = std::max(gpos, v);
    gneg = std::max(gneg, -v);
  }
  const auto [lo, hi] = std::minmax_element(u.values.begin(), u.values.end());
  rep.lower_margin = *lo + gneg;
  rep.upper_margin = gpos - *hi;
  rep.max_principle_ok = rep.lower_margin >= -kMaxPrincipleTol && rep.upper_margin >= -kMaxPrincipleTol;
  return rep;
}

RefinementClass classify_slopes(std::span<const double> slopes, std::vector<double>* ratios) {
  std::vector<double> rs;
  for (std::size_t k = 0; k + 1 < slopes.size(); ++k) {
    const double a = slopes[k] < 1e-12 ? 0.0 : slopes[k];
    const double b = slopes[k + 1] < 1e-12 ? 0.0 : slopes[k + 1];
    if (a == 0.0) {
      rs.push_back(b == 0.0 ? 1.0 : std::numeric_limits<double>::infinity());
    } else {
      rs.push_back(b / a);
    }
  }
  if (ratios) *ratios = rs;
  if (rs.empty()) return RefinementClass::inconclusive;
  if (rs.back() <= kStableRatio) return RefinementClass::lipschitz;
  if (std::all_of(rs.begin(), rs.end(), [](double r) { return r >= kJumpRatio; })) {
    return RefinementClass::jump_suspected;
  }
  return RefinementClass::inconclusive;
}

RefinementStudy refinement_study(const Problem& problem, int levels) {
  if (levels < 3) throw DomainError("refinement study needs at least three levels");
  RefinementStudy st;
  Problem level = problem;
  for (int k = 0; k < levels; ++k) {
    SolveReport r = solve(level);
    st.cells.push_back(level.n_cells);
    st.slopes.push_back(max_slope(r.profile));
    st.energies.push_back(r.energy.total);
    st.converged.push_back(r.converged);
    st.reports.push_back(std::move(r));
    level.n_cells *= 2;
  }
  st.classification = classify_slopes(st.slopes, &st.ratios);
  return st;
}

Vec2 contact_direction(const Anisotropy& aniso, Vec2 nu) {
  if (aniso.geometry_polygon().empty()) return aniso.support_point(nu);
  const BoundaryArc face = aniso.exposed_face(nu, aniso.default_face_tol());
  if (face.degenerate()) return aniso.support_point(nu);
  return aniso.chart().point_at(face.mid_param());
}

TangentBallResult tangent_ball_check(const Anisotropy& aniso, const Profile& u, double r, double tol) {
  if (!(r > 0.0)) throw DomainError("ball radius must be positive");
  const Grid& grid = u.grid;
  const std::size_t nn = u.values.size();
  const double h = grid.h();
  std::vector<Vec2> pts(nn);
  for (std::size_t j = 0; j < nn; ++j) pts[j] = {grid.node(static_cast<int>(j)), u.values[j]};

  std::vector<Vec2> edge_normal(nn - 1);
  for (std::size_t i = 0; i + 1 < nn; ++i) {
    const Vec2 n{-(u.values[i + 1] - u.values[i]), h};
    edge_normal[i] = n / n.norm();
  }

  // phi(v) >= |v| / reach, so vertices farther than r * reach in s never enter the ball
  const double reach = 0.5 * aniso.diameter();
  const double window = r * reach;

  auto clear_of_graph = [&](Vec2 center) {
    const auto first = std::lower_bound(pts.begin(), pts.end(), center.x - window,
                                        [](Vec2 p, double x) { return p.x < x; });
    for (auto it = first; it != pts.end() && it->x <= center.x + window; ++it) {
      if (aniso.eval(*it - center) < r - tol) return false;
    }
    return true;
  };

  std::size_t above = 0;
  std::size_t below = 0;
  for (std::size_t j = 0; j < nn; ++j) {
    Vec2 nu{0.0, 0.0};
    if (j > 0) nu = nu + edge_normal[j - 1];
    if (j + 1 < nn) nu = nu + edge_normal[j];
    nu = nu / nu.norm();
    const Vec2 q = contact_direction(aniso, nu) * r;
    if (clear_of_graph(pts[j] - q)) ++below;
    if (clear_of_graph(pts[j] + q)) ++above;
  }
  TangentBallResult res;
  res.radius_tested = r;
  res.fraction_verified_above = static_cast<double>(above) / static_cast<double>(nn);
  res.fraction_verified_below = static_cast<double>(below) / static_cast<double>(nn);
  return res;
}

}  // namespace anigraph
