#pragma once

#include <span>
#include <vector>

#include "anigraph/anisotropy.hpp"
#include "anigraph/energy.hpp"

namespace anigraph {

/// Step sizes are mesh-balanced: the primal step applied to the nodal
/// values is tau / h and the dual step is sigma_step * h, so the product
/// (and hence the stability bound 4 tau sigma_step <= 1) is independent of h.
struct SolverConfig {
  long max_iters = 200000;
  double tol_rel = 1e-10;
  int stagnation_window = 100;
  double tau = 0.02;
  double sigma_step = 12.375;
  double over_relaxation = 1.0;
  int trace_stride = 0;  // record the energy every trace_stride iterations (0: off)
  // Warm start from nested grids halved down to this many cells; 0 starts
  // directly on the target grid from u = g, dual = 0.
  int coarsest_cells = 64;

  void validate() const;
};

struct SolveReport {
  Profile profile;
  EnergyBreakdown energy;
  long iterations = 0;
  bool converged = false;
  double final_stagnation = 0.0;
  double dual_feasibility_max_violation = 0.0;
  std::vector<std::pair<long, double>> energy_trace;
};

SolveReport solve(const Anisotropy& aniso, const Grid& grid, std::span<const double> g, double p,
                  const SolverConfig& cfg = {});

/// A complete problem instance: gauge, interval, datum, exponent and grid size.
struct Problem {
  Anisotropy aniso = Anisotropy::euclidean();
  double x_min = -1.0;
  double x_max = 1.0;
  double p = 1.0;
  GSpec g = GSpec::constant(0.0);
  int n_cells = 256;
  SolverConfig solver;

  Grid grid() const { return Grid(x_min, x_max, n_cells); }
};

SolveReport solve(const Problem& problem);

// argmin_z (z - v)^2 / (2 tau) + w |z - g|^p
double prox_fidelity(double v, double g, double w, double p, double tau);

// Exhaustive search on a quantized window followed by line refinement.
// Only for grids with at most four cells.
Profile brute_force_oracle(const Anisotropy& aniso, const Grid& grid, std::span<const double> g, double p,
                           int levels = 21);

}  // namespace anigraph
