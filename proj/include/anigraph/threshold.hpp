#pragma once

#include <string>

#include "anigraph/anisotropy.hpp"

namespace anigraph {

enum class RegularityClass { lipschitz, c11, not_applicable };

std::string to_string(RegularityClass c);

/// Smallness threshold on the datum and the constants feeding it.
struct ThresholdReport {
  double alpha0 = 0.0;
  double c_phi = 0.0;
  double sigma = 0.0;
  double gamma = 0.0;   // 3 sigma
  double lambda = 0.0;  // p (4 sigma)^(p-1)
  double phi_e1 = 0.0;
  double phi_e2 = 0.0;
  SymmetryFlags hypotheses;
  RegularityClass regularity_class = RegularityClass::not_applicable;
  // min{alpha0 phi_e1 / 4, alpha0 / (2 phi_e2), |I| phi_e1 / (4 phi_e2)} and which entry won (0, 1, 2)
  double branch_min = 0.0;
  int active_branch = 0;
};

ThresholdReport sigma_threshold(const Anisotropy& aniso, double p, double interval_length);

/// Volume-penalty constant for a datum bounded by g_inf inside the strip |y| < gamma.
double lambda_from_gamma(double p, double gamma, double g_inf);

struct LinfCheck {
  bool satisfied = false;
  double bound = 0.0;
  double r_max = 0.0;        // alpha0 / lambda
  double gamma_lower = 0.0;  // alpha0 phi_e1 / (2 lambda)
};

LinfCheck linf_hypothesis_check(const Anisotropy& aniso, double lambda, double interval_length, double u_inf);

}  // namespace anigraph
