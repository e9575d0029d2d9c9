#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "anigraph/energy.hpp"
#include "anigraph/error.hpp"
#include "closed_forms.hpp"
#include "doctest.h"

using namespace anigraph;
using anigraph::testing::arc_pair;
using anigraph::testing::sample_profile;

namespace {

const double kPi = std::numbers::pi;

Anisotropy square() { return Anisotropy::polygon({{1, -1}, {1, 1}, {-1, 1}, {-1, -1}}); }

std::vector<double> random_values(std::mt19937_64& rng, int n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("grid and profile validation") {
  CHECK_THROWS_AS(Grid(1, 1, 4), DomainError);
  CHECK_THROWS_AS(Grid(0, 1, 0), DomainError);
  const Grid g(-1, 1, 4);
  CHECK(g.h() == 0.5);
  CHECK(g.node(2) == 0.0);
  CHECK(g.node(4) == 1.0);
  CHECK_THROWS_AS(Profile(g, {0, 0, 0}), DomainError);
  CHECK_THROWS_AS(Profile(g, {0, 0, NAN, 0, 0}), DomainError);
}

TEST_CASE("sample_g examples") {
  const Grid grid(-1, 1, 8);
  for (double v : sample_g(GSpec::constant(0.5), grid)) CHECK(v == 0.5);
  const auto st = sample_g(GSpec::step(2), grid);
  CHECK(st[4] == 0.0);
  CHECK(st[0] == -2.0);
  CHECK(st[8] == 2.0);
  const auto lin = sample_g(GSpec::tabulated({-1, 1}, {0, 1}, Interp::linear), grid);
  CHECK(lin[4] == doctest::Approx(0.5));
  const auto pc = sample_g(GSpec::tabulated({-1, 0, 1}, {-1, 1, 1}, Interp::piecewise_constant), grid);
  CHECK(pc[4] == 0.0);
  CHECK(pc[3] == -1.0);
  CHECK(pc[5] == 1.0);
  CHECK_THROWS_AS(sample_g(GSpec::tabulated({-0.5, 1}, {0, 1}, Interp::linear), grid), IngestionError);
  CHECK_THROWS_AS(GSpec::tabulated({0, 0}, {0, 1}, Interp::linear), IngestionError);
}

TEST_CASE("datum norms") {
  const GSpec t = GSpec::tabulated({0, 1, 2}, {-0.25, 0.5, 0.1}, Interp::linear);
  CHECK(t.positive_part_inf() == 0.5);
  CHECK(t.negative_part_inf() == 0.25);
  CHECK(t.norm_inf() == 0.5);
  CHECK(GSpec::step(-3).norm_inf() == 3.0);
  CHECK(GSpec::constant(-2).positive_part_inf() == 0.0);
}

TEST_CASE("datum csv ingestion") {
  const auto path = std::filesystem::temp_directory_path() / "anigraph_g_test.csv";
  {
    std::ofstream out(path);
    out << "s,g\n-1,0\n1,1\n";
  }
  const GSpec g = GSpec::from_csv(path.string(), Interp::linear);
  CHECK(g.value_at(0.0, -1, 1) == doctest::Approx(0.5));
  {
    std::ofstream out(path);
    out << "s,g\n-1,0\nbad\n";
  }
  CHECK_THROWS_AS(GSpec::from_csv(path.string(), Interp::linear), IngestionError);
  std::filesystem::remove(path);
}

TEST_CASE("flat graph energy") {
  for (int n : {1, 7, 64}) {
    const Grid grid(-1, 1, n);
    const Profile u(grid, std::vector<double>(static_cast<std::size_t>(n + 1), 0.0));
    const auto g = sample_g(GSpec::constant(0.0), grid);
    const auto e = energy(Anisotropy::euclidean(), u, g, 1.0);
    CHECK(e.area == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(e.fidelity == 0.0);
    CHECK(e.total == doctest::Approx(2.0).epsilon(1e-14));
  }
  const Grid grid(0, 1, 4);
  const Profile u(grid, {0, 0, 0, 0, 0});
  CHECK_THROWS_AS(energy(Anisotropy::euclidean(), u, std::vector<double>(5, 0.0), 0.5), DomainError);
}

TEST_CASE("fidelity uses trapezoid weights") {
  const Grid grid(0, 1, 2);
  const Profile u(grid, {1, 1, 1});
  const std::vector<double> g{0, 0, 0};
  const auto e1 = energy(Anisotropy::euclidean(), u, g, 1.0);
  CHECK(e1.fidelity == doctest::Approx(1.0));
  const Profile u2(grid, {2, 0, 0});
  CHECK(energy(Anisotropy::euclidean(), u2, g, 2.0).fidelity == doctest::Approx(4 * 0.25));
}

TEST_CASE("arc pair profiles have energy near 4 + pi/2") {
  const double target = 4.0 + kPi / 2.0;
  const Anisotropy e = Anisotropy::euclidean();
  for (auto [a, b] : {std::pair{0.0, 0.0}, std::pair{1.0, -1.0}, std::pair{0.5, -0.25}}) {
    double prev_err = 0.0;
    for (int n : {1024, 4096}) {
      const Grid grid(-1, 1, n);
      const Profile u = sample_profile(grid, [&](double s) { return arc_pair(s, a, b); });
      const auto g = sample_g(GSpec::step(2), grid);
      const double err = std::abs(energy(e, u, g, 1.0).total - target);
      if (n == 4096) {
        CHECK(err < 5e-2);
        CHECK(err <= 0.5 * prev_err);
      }
      prev_err = err;
    }
  }
}

TEST_CASE("energy is convex in the profile") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> lam(0, 1);
  const Grid grid(-1, 1, 16);
  const auto g = random_values(rng, 17, 1.0);
  for (const Anisotropy& a : {Anisotropy::euclidean(), Anisotropy::lp(1), Anisotropy::ellipse(2, 0.5), square()}) {
    for (double p : {1.0, 1.5, 2.0}) {
      for (int i = 0; i < 50; ++i) {
        const Profile u(grid, random_values(rng, 17, 2.0));
        const Profile v(grid, random_values(rng, 17, 2.0));
        const double l = lam(rng);
        std::vector<double> mix(17);
        for (std::size_t j = 0; j < 17; ++j) mix[j] = l * u.values[j] + (1 - l) * v.values[j];
        const double lhs = energy(a, Profile(grid, mix), g, p).total;
        const double rhs = l * energy(a, u, g, p).total + (1 - l) * energy(a, v, g, p).total;
        CHECK(lhs <= rhs + 1e-9);
      }
    }
  }
}

TEST_CASE("truncate") {
  const Grid grid(0, 1, 2);
  const Profile t = truncate(Profile(grid, {-3, 0, 3}), -1, 1);
  CHECK(t.values == std::vector<double>{-1, 0, 1});
  const Profile in(grid, {0.1, -0.2, 0.3});
  CHECK(truncate(in, -1, 1).values == in.values);
  CHECK_THROWS_AS(truncate(in, 1, -1), DomainError);
}

TEST_CASE("truncating to the datum window never raises the energy") {
  std::mt19937_64 rng(8);
  const Grid grid(-1, 1, 24);
  for (const Anisotropy& a : {Anisotropy::euclidean(), Anisotropy::lp(1), square(), Anisotropy::lp(3)}) {
    for (int i = 0; i < 100; ++i) {
      std::vector<double> gs = random_values(rng, 6, 1.0);
      std::vector<double> xs{-1, -0.6, -0.2, 0.2, 0.6, 1};
      const GSpec spec = GSpec::tabulated(xs, gs, Interp::piecewise_constant);
      const auto g = sample_g(spec, grid);
      const Profile u(grid, random_values(rng, 25, 3.0));
      const Profile v = truncate(u, -spec.negative_part_inf(), spec.positive_part_inf());
      for (double p : {1.0, 2.0}) CHECK(energy(a, v, g, p).total <= energy(a, u, g, p).total + 1e-12);
    }
  }
}

TEST_CASE("area bounded below by the flat graph") {
  std::mt19937_64 rng(4);
  const Grid grid(-1, 1, 32);
  const std::vector<double> g(33, 0.0);
  for (const Anisotropy& a : {Anisotropy::euclidean(), Anisotropy::lp(1), square(), Anisotropy::ellipse(0.5, 3)}) {
    const double flat = a.eval_dual({0, 1}) * grid.length();
    for (int i = 0; i < 20; ++i) {
      CHECK(energy(a, Profile(grid, random_values(rng, 33, 1.0)), g, 1.0).area >= flat - 1e-9);
    }
  }
}

TEST_CASE("mesh consistency for a smooth profile") {
  const Anisotropy e = Anisotropy::euclidean();
  auto f = [](double s) { return std::sin(2 * s) + 0.3 * s * s; };
  auto total = [&](int n) {
    const Grid grid(-1, 1, n);
    const auto g = sample_g(GSpec::step(0.5), grid);
    return energy(e, sample_profile(grid, f), g, 2.0).total;
  };
  const double d1 = std::abs(total(256) - total(128));
  const double d2 = std::abs(total(512) - total(256));
  CHECK(d2 <= 0.75 * d1);
}

TEST_CASE("a unit jump costs phi_dual(e1)") {
  for (const Anisotropy& a : {Anisotropy::euclidean(), Anisotropy::ellipse(2, 1), square(), Anisotropy::lp(1)}) {
    const double expected = a.eval_dual({0, 1}) * 2.0 + a.eval_dual({1, 0});
    double prev = 1e300;
    for (int n : {64, 128, 256, 512}) {
      const Grid grid(-1, 1, n);
      const Profile u = sample_profile(grid, [](double s) { return s > 0 ? 1.0 : 0.0; });
      const std::vector<double> g(static_cast<std::size_t>(n + 1), 0.0);
      const double err = std::abs(energy(a, u, g, 1.0).area - expected);
      CHECK(err <= prev + 1e-15);
      CHECK(err <= 2.0 / n);
      prev = err;
    }
  }
}

TEST_CASE("pairwise summation is deterministic") {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / static_cast<double>(i + 1);
  CHECK(pairwise_sum(v) == pairwise_sum(v));
  CHECK(pairwise_sum(v) == doctest::Approx(7.485470860550345));
}
