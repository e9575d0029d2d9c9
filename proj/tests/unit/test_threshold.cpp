#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "anigraph/error.hpp"
#include "anigraph/threshold.hpp"
#include "doctest.h"

using namespace anigraph;

namespace {

Anisotropy square() { return Anisotropy::polygon({{1, -1}, {1, 1}, {-1, 1}, {-1, -1}}); }

// straight transcription of the threshold formula, kept apart from the library code
double sigma_formula(double alpha0, double e1, double e2, double len, double p) {
  const double m = std::min({alpha0 * e1 / 4, alpha0 / (2 * e2), len * e1 / (4 * e2)});
  return std::pow(m / (std::pow(4.0, p - 1) * p), 1 / p);
}

}  // namespace

TEST_CASE("euclidean threshold at p = 1") {
  const Anisotropy e = Anisotropy::euclidean();
  const ThresholdReport r = sigma_threshold(e, 1.0, 2.0);
  CHECK(r.sigma == 0.25 * std::min(r.alpha0, 2.0));
  CHECK(r.alpha0 == doctest::Approx(2 * std::sqrt(std::numbers::pi) / (4 * std::numbers::pi + 1)).epsilon(1e-6));
  CHECK(r.sigma == doctest::Approx(0.06533).epsilon(1e-4));
  CHECK(r.gamma == 3 * r.sigma);
  CHECK(r.lambda == 1.0);
  CHECK(r.phi_e1 == 1.0);
  CHECK(r.phi_e2 == 1.0);
  CHECK(r.regularity_class == RegularityClass::c11);

  const ThresholdReport s = sigma_threshold(e, 1.0, 0.1);
  CHECK(s.sigma == doctest::Approx(0.025).epsilon(1e-15));
  CHECK(s.active_branch == 2);
}

TEST_CASE("euclidean threshold at p = 2") {
  const ThresholdReport r = sigma_threshold(Anisotropy::euclidean(), 2.0, 2.0);
  CHECK(r.sigma == doctest::Approx(std::sqrt(r.alpha0 / 32)).epsilon(1e-14));
  CHECK(r.lambda == doctest::Approx(2 * 4 * r.sigma).epsilon(1e-14));
}

TEST_CASE("hypothesis flags drive the regularity class") {
  const ThresholdReport sq = sigma_threshold(square(), 1.5, 3.0);
  CHECK(sq.hypotheses.vertical_facets);
  CHECK(sq.regularity_class == RegularityClass::not_applicable);
  CHECK(sq.sigma > 0);
  CHECK(sq.alpha0 == doctest::Approx(4.0 / 17.0).epsilon(1e-14));

  CHECK(sigma_threshold(Anisotropy::lp(1), 1, 2).regularity_class == RegularityClass::lipschitz);
  CHECK(sigma_threshold(Anisotropy::ellipse(2, 1), 1, 2).regularity_class == RegularityClass::c11);

  // a sheared ellipse is not symmetric about the axes
  const Anisotropy sheared = Anisotropy::generic(
      [](Vec2 v) { return std::sqrt(v.x * v.x + v.x * v.y + v.y * v.y); }, "sheared");
  CHECK(sigma_threshold(sheared, 1, 2).regularity_class == RegularityClass::not_applicable);
  CHECK(sigma_threshold(sheared, 1, 2).sigma > 0);
}

TEST_CASE("threshold input validation") {
  const Anisotropy e = Anisotropy::euclidean();
  CHECK_THROWS_AS(sigma_threshold(e, 0.5, 2), DomainError);
  CHECK_THROWS_AS(sigma_threshold(e, 1, 0), DomainError);
  CHECK_THROWS_AS(sigma_threshold(e, 1, -1), DomainError);
  CHECK_THROWS_AS(linf_hypothesis_check(e, 0, 2, 0), DomainError);
}

TEST_CASE("lambda from gamma") {
  CHECK(lambda_from_gamma(1, 5, 1) == 1.0);
  CHECK(lambda_from_gamma(1, 0.3, 0.1) == 1.0);
  CHECK(lambda_from_gamma(2, 3, 1) == 8.0);
  CHECK_THROWS_AS(lambda_from_gamma(2, 1, 1), HypothesisViolation);
  CHECK_THROWS_AS(lambda_from_gamma(2, 2, 1), HypothesisViolation);
}

TEST_CASE("L-infinity hypothesis check") {
  const Anisotropy e = Anisotropy::euclidean();
  const LinfCheck c = linf_hypothesis_check(e, 1.0, 2.0, 0.0);
  CHECK(c.satisfied);
  CHECK(c.bound == doctest::Approx(e.measures().alpha0 / 4).epsilon(1e-15));
  CHECK(c.r_max == e.measures().alpha0);
  CHECK(c.gamma_lower == e.measures().alpha0 / 2);
  CHECK_FALSE(linf_hypothesis_check(e, 1.0, 2.0, c.bound).satisfied);
  CHECK(linf_hypothesis_check(e, 1.0, 2.0, std::nextafter(c.bound, 0.0)).satisfied);
}

TEST_CASE("sigma grows with the interval and saturates") {
  for (const Anisotropy& a : {Anisotropy::euclidean(), Anisotropy::ellipse(1, 3), Anisotropy::lp(4)}) {
    for (double p : {1.0, 1.7, 2.5}) {
      double prev = 0;
      for (double len = 0.01; len < 20; len *= 1.3) {
        const ThresholdReport r = sigma_threshold(a, p, len);
        CHECK(r.sigma >= prev);
        prev = r.sigma;
        const double cap = std::min(r.alpha0 * r.phi_e1 / 4, r.alpha0 / (2 * r.phi_e2));
        const double len_branch = len * r.phi_e1 / (4 * r.phi_e2);
        CHECK((r.active_branch == 2) == (len_branch < cap));
        if (len_branch >= cap) {
          CHECK(r.sigma == sigma_threshold(a, p, 2 * len).sigma);
        }
      }
    }
  }
}

TEST_CASE("sigma is not monotone in p") {
  // with the interval branch at 0.065: sigma(1) = 0.065 but sigma(2) = sqrt(0.065 / 8)
  const Anisotropy e = Anisotropy::euclidean();
  const double len = 0.26;
  CHECK(sigma_threshold(e, 1, len).sigma == doctest::Approx(0.065).epsilon(1e-12));
  CHECK(sigma_threshold(e, 2, len).sigma == doctest::Approx(std::sqrt(0.065 / 8)).epsilon(1e-12));
  CHECK(sigma_threshold(e, 2, len).sigma > sigma_threshold(e, 1, len).sigma);
}

TEST_CASE("threshold constants wire into the regularity hypotheses") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> un(0, 1);
  int gamma_failures = 0;
  for (int k = 0; k < 100; ++k) {
    const Anisotropy a = k % 2 ? Anisotropy::ellipse(0.3 + 3 * un(rng), 0.3 + 3 * un(rng))
                               : Anisotropy::lp(1 + 5 * un(rng));
    const double p = 1 + 2 * un(rng);
    const double len = 0.05 + 4 * un(rng);
    const ThresholdReport r = sigma_threshold(a, p, len);
    CHECK(r.sigma == doctest::Approx(sigma_formula(r.alpha0, r.phi_e1, r.phi_e2, len, p)).epsilon(1e-12));
    // sigma lambda equals the smallest branch, so the bound at lambda is sigma itself
    CHECK(r.sigma * r.lambda == doctest::Approx(r.branch_min).epsilon(1e-12));
    CHECK(r.lambda == doctest::Approx(lambda_from_gamma(p, r.gamma, r.sigma)).epsilon(1e-12));
    const double g_inf = r.sigma * un(rng) * (1 - 1e-9);
    const LinfCheck c = linf_hypothesis_check(a, r.lambda, len, g_inf);
    CHECK(c.bound == doctest::Approx(r.sigma).epsilon(1e-12));
    CHECK(c.satisfied);
    // gamma = 3 sigma clears alpha0 phi_e1 / (2 lambda) exactly when the smallest branch exceeds alpha0 phi_e1 / 6
    const bool clears = r.gamma > c.gamma_lower;
    const double margin = r.branch_min - r.alpha0 * r.phi_e1 / 6;
    if (std::abs(margin) > 1e-12) CHECK(clears == (margin > 0));
    if (!clears) ++gamma_failures;
  }
  CHECK(gamma_failures > 0);
}

TEST_CASE("strip condition fails for short intervals") {
  const Anisotropy e = Anisotropy::euclidean();
  const ThresholdReport r = sigma_threshold(e, 1, 0.1);
  const LinfCheck c = linf_hypothesis_check(e, r.lambda, 0.1, 0);
  CHECK(r.gamma == doctest::Approx(0.075));
  CHECK(c.gamma_lower == doctest::Approx(r.alpha0 / 2));
  CHECK_FALSE(r.gamma > c.gamma_lower);
  const ThresholdReport wide = sigma_threshold(e, 1, 2);
  CHECK(wide.gamma > linf_hypothesis_check(e, wide.lambda, 2, 0).gamma_lower);
}
