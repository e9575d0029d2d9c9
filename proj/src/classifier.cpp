#include "anigraph/classifier.hpp"

#include <algorithm>
#include <cmath>

namespace anigraph {

std::string to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::nondecreasing:
      return "nondecreasing";
    case Monotonicity::nonincreasing:
      return "nonincreasing";
    case Monotonicity::constant:
      return "constant";
    case Monotonicity::none:
      break;
  }
  return "none";
}

std::vector<EdgeNormal> edge_normals(const Profile& u) {
  const double h = u.grid.h();
  std::vector<EdgeNormal> out;
  out.reserve(u.values.size());
  for (std::size_t i = 0; i + 1 < u.values.size(); ++i) {
    const double du = u.values[i + 1] - u.values[i];
    const Vec2 n{-du, h};
    out.push_back({n / n.norm(), i, false});
    if (std::abs(du) > kJumpSteepness * h) out.push_back({{du > 0.0 ? -1.0 : 1.0, 0.0}, i, true});
  }
  return out;
}

Monotonicity classify_monotone(const Profile& u, double tol) {
  bool up = false;
  bool down = false;
  for (std::size_t i = 0; i + 1 < u.values.size(); ++i) {
    const double du = u.values[i + 1] - u.values[i];
    if (du > tol) up = true;
    if (du < -tol) down = true;
  }
  if (up && down) return Monotonicity::none;
  if (up) return Monotonicity::nondecreasing;
  if (down) return Monotonicity::nonincreasing;
  return Monotonicity::constant;
}

std::optional<BoundaryArc> intersect_arcs(const BoundaryArc& a, const BoundaryArc& b, const BoundaryChart& chart) {
  if (a.full()) return b;
  if (b.full()) return a;
  BoundaryArc r;
  r.perimeter = a.perimeter;
  const double d_ab = chart.wrap(b.start - a.start);
  const double d_ba = chart.wrap(a.start - b.start);
  if (d_ab <= a.length) {
    r.start = b.start;
    r.length = std::min(a.length - d_ab, b.length);
  } else if (d_ba <= b.length) {
    r.start = a.start;
    r.length = std::min(b.length - d_ba, a.length);
  } else {
    return std::nullopt;
  }
  r.first = chart.point_at(r.start);
  r.last = chart.point_at(r.start + r.length);
  return r;
}

CahnHoffmanResult cahn_hoffman(const Anisotropy& aniso, const Profile& u, double tol) {
  if (tol <= 0.0) tol = aniso.default_face_tol();
  const BoundaryChart& chart = aniso.chart();
  CahnHoffmanResult res;
  res.monotone = classify_monotone(u);
  if (!aniso.flags().partially_monotone) {
    res.warning = "anisotropy is not partially monotone; the characterization does not apply";
  }
  const std::vector<EdgeNormal> normals = edge_normals(u);
  res.normals_tested = normals.size();

  std::vector<BoundaryArc> faces;
  faces.reserve(normals.size());
  std::optional<BoundaryArc> common;
  for (std::size_t k = 0; k < normals.size(); ++k) {
    faces.push_back(aniso.exposed_face(normals[k].nu, tol));
    common = k == 0 ? std::optional<BoundaryArc>(faces.back()) : intersect_arcs(*common, faces.back(), chart);
    if (common) continue;

    // name two edges whose faces are already disjoint
    for (std::size_t j = 0; j < k && !res.infeasibility_witness; ++j) {
      if (!intersect_arcs(faces[j], faces[k], chart)) {
        res.infeasibility_witness = std::make_pair(normals[j].edge, normals[k].edge);
      }
    }
    for (std::size_t i = 0; i < k && !res.infeasibility_witness; ++i) {
      for (std::size_t j = i + 1; j < k && !res.infeasibility_witness; ++j) {
        if (!intersect_arcs(faces[i], faces[j], chart)) {
          res.infeasibility_witness = std::make_pair(normals[i].edge, normals[j].edge);
        }
      }
    }
    if (!res.infeasibility_witness) res.infeasibility_witness = std::make_pair(normals[0].edge, normals[k].edge);
    res.feasible = false;
    return res;
  }
  // grids have at least one cell, so there is at least one normal
  res.feasible = true;
  res.witness_arc = common;
  return res;
}

double calibration_defect(const Anisotropy& aniso, const Profile& u, Vec2 n) {
  double worst = 0.0;
  for (const EdgeNormal& e : edge_normals(u)) worst = std::max(worst, aniso.eval_dual(e.nu) - dot(n, e.nu));
  return worst;
}

}  // namespace anigraph
