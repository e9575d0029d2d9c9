#pragma once

#include <span>
#include <string>
#include <vector>

#include "anigraph/anisotropy.hpp"
#include "anigraph/energy.hpp"
#include "anigraph/solver.hpp"

namespace anigraph {

enum class RefinementClass { lipschitz, jump_suspected, inconclusive };

std::string to_string(RefinementClass c);

struct TangentBallResult {
  double radius_tested = 0.0;
  double fraction_verified_above = 0.0;
  double fraction_verified_below = 0.0;
};

/// Regularity diagnostics of a discrete profile. The slope bound and the
/// smallest vertical component of the edge normals determine each other:
/// lipschitz_estimate = sqrt(1 / normal_deviation_min^2 - 1).
struct RegularityReport {
  double lipschitz_estimate = 0.0;
  double normal_deviation_min = 1.0;
  bool max_principle_ok = true;
  // signed distances of min u above -|g^-|_inf and of max u below |g^+|_inf
  double lower_margin = 0.0;
  double upper_margin = 0.0;
  RefinementClass refinement_classification = RefinementClass::inconclusive;
  TangentBallResult tangent_ball;
};

inline constexpr double kMaxPrincipleTol = 1e-6;
inline constexpr double kStableRatio = 1.2;
inline constexpr double kJumpRatio = 1.8;

RegularityReport lipschitz_report(const Profile& u, std::span<const double> g);

// max_j |u_{j+1} - u_j| / h
double max_slope(const Profile& u);

struct RefinementStudy {
  std::vector<int> cells;
  std::vector<double> slopes;   // max |du| / h per level
  std::vector<double> ratios;   // slopes[k + 1] / slopes[k]
  std::vector<double> energies;
  std::vector<bool> converged;
  RefinementClass classification = RefinementClass::inconclusive;
  std::vector<SolveReport> reports;  // one per level, coarsest first
};

// Growth rule for a slope sequence: lipschitz when the last ratio is at most
// 1.2, jump_suspected when every ratio is at least 1.8, else inconclusive.
// Slopes below 1e-12 count as zero and a ratio of two zeros is 1.
RefinementClass classify_slopes(std::span<const double> slopes, std::vector<double>* ratios = nullptr);

// Solves on problem.n_cells, twice that, ... (levels grids in total).
RefinementStudy refinement_study(const Problem& problem, int levels);

// Boundary point of W with outward normal nu; the exposed-face midpoint
// when the face is a segment.
Vec2 contact_direction(const Anisotropy& aniso, Vec2 nu);

TangentBallResult tangent_ball_check(const Anisotropy& aniso, const Profile& u, double r, double tol);

}  // namespace anigraph
