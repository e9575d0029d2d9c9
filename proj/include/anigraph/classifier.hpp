#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "anigraph/anisotropy.hpp"
#include "anigraph/energy.hpp"

namespace anigraph {

enum class Monotonicity { nondecreasing, nonincreasing, constant, none };

std::string to_string(Monotonicity m);

inline constexpr double kJumpSteepness = 1e4;  // |du| > kJumpSteepness * h marks a jump edge
inline constexpr double kMonotoneTol = 1e-12;

struct EdgeNormal {
  Vec2 nu;
  std::size_t edge = 0;
  bool jump_limit = false;  // the horizontal limit normal of a jump edge
};

// Unit normals (-du, h) / |(-du, h)| of the subgraph, one per edge, plus
// -e1 (up-jump) or +e1 (down-jump) for every jump edge.
std::vector<EdgeNormal> edge_normals(const Profile& u);

Monotonicity classify_monotone(const Profile& u, double tol = kMonotoneTol);

struct CahnHoffmanResult {
  bool feasible = false;
  std::optional<BoundaryArc> witness_arc;
  std::optional<std::pair<std::size_t, std::size_t>> infeasibility_witness;  // edge indices
  Monotonicity monotone = Monotonicity::none;
  std::optional<std::string> warning;
  std::size_t normals_tested = 0;
};

// Intersection of two boundary arcs of the same chart; empty when disjoint.
// Both arcs must be shorter than half the perimeter.
std::optional<BoundaryArc> intersect_arcs(const BoundaryArc& a, const BoundaryArc& b, const BoundaryChart& chart);

// Searches for one vector N with phi(N) = 1 calibrating every edge normal.
// tol <= 0 selects the anisotropy's default face tolerance.
CahnHoffmanResult cahn_hoffman(const Anisotropy& aniso, const Profile& u, double tol = 0.0);

// Largest violation of <N, nu_j> >= phi_dual(nu_j) over the profile's normals.
double calibration_defect(const Anisotropy& aniso, const Profile& u, Vec2 n);

}  // namespace anigraph
