#include "anigraph/threshold.hpp"

#include <array>
#include <cmath>

#include "anigraph/error.hpp"

namespace anigraph {

std::string to_string(RegularityClass c) {
  switch (c) {
    case RegularityClass::lipschitz:
      return "lipschitz";
    case RegularityClass::c11:
      return "c11";
    case RegularityClass::not_applicable:
      break;
  }
  return "not_applicable";
}

namespace {

struct Branches {
  double min = 0.0;
  int index = 0;
};

Branches branch_min(double alpha0, double phi_e1, double phi_e2, double length) {
  const std::array<double, 3> b{alpha0 * phi_e1 / 4.0, alpha0 / (2.0 * phi_e2), length * phi_e1 / (4.0 * phi_e2)};
  Branches out{b[0], 0};
  for (int i = 1; i < 3; ++i) {
    if (b[static_cast<std::size_t>(i)] < out.min) out = {b[static_cast<std::size_t>(i)], i};
  }
  return out;
}

}  // namespace

ThresholdReport sigma_threshold(const Anisotropy& aniso, double p, double interval_length) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("fidelity exponent p must be at least 1");
  if (!(interval_length > 0.0) || !std::isfinite(interval_length)) {
    throw DomainError("interval length must be positive");
  }
  ThresholdReport r;
  const WulffMeasures& m = aniso.measures();
  r.alpha0 = m.alpha0;
  r.c_phi = m.c_phi;
  r.phi_e1 = aniso.eval({1.0, 0.0});
  r.phi_e2 = aniso.eval({0.0, 1.0});
  const Branches b = branch_min(r.alpha0, r.phi_e1, r.phi_e2, interval_length);
  r.branch_min = b.min;
  r.active_branch = b.index;
  r.sigma = p == 1.0 ? b.min : std::pow(b.min / (std::pow(4.0, p - 1.0) * p), 1.0 / p);
  r.gamma = 3.0 * r.sigma;
  r.lambda = p == 1.0 ? 1.0 : p * std::pow(4.0 * r.sigma, p - 1.0);
  r.hypotheses = aniso.flags();
  const auto& h = r.hypotheses;
  if (h.partially_monotone && !h.vertical_facets) {
    r.regularity_class = h.elliptic ? RegularityClass::c11 : RegularityClass::lipschitz;
  }
  return r;
}

double lambda_from_gamma(double p, double gamma, double g_inf) {
  if (!(p >= 1.0)) throw DomainError("fidelity exponent p must be at least 1");
  if (!(g_inf >= 0.0)) throw DomainError("g_inf must be nonnegative");
  if (!(gamma > 2.0 * g_inf)) throw HypothesisViolation("gamma must exceed twice the datum bound");
  return p == 1.0 ? 1.0 : p * std::pow(gamma + g_inf, p - 1.0);
}

LinfCheck linf_hypothesis_check(const Anisotropy& aniso, double lambda, double interval_length, double u_inf) {
  if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
  const double alpha0 = aniso.measures().alpha0;
  const double e1 = aniso.eval({1.0, 0.0});
  const double e2 = aniso.eval({0.0, 1.0});
  LinfCheck c;
  c.bound = branch_min(alpha0, e1, e2, interval_length).min / lambda;
  c.satisfied = u_inf < c.bound;
  c.r_max = alpha0 / lambda;
  c.gamma_lower = alpha0 * e1 / (2.0 * lambda);
  return c;
}

}  // namespace anigraph
