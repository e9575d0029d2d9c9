#include <cmath>
#include <random>
#include <sstream>

#include "anigraph/error.hpp"
#include "anigraph/geometry.hpp"
#include "doctest.h"

using namespace anigraph;

namespace {

Anisotropy square() { return Anisotropy::polygon({{1, -1}, {1, 1}, {-1, 1}, {-1, -1}}); }

// Walks every grid line and charges each in/out transition with the dual norm of its outward normal.
double perimeter_by_grid_lines(const RasterSet& f, const Anisotropy& a) {
  auto in = [&](int ix, int iy) { return ix >= 0 && ix < f.nx() && iy >= 0 && iy < f.ny() && f.at(ix, iy); };
  double total = 0;
  for (int x = 0; x <= f.nx(); ++x) {
    for (int iy = 0; iy < f.ny(); ++iy) {
      const bool l = in(x - 1, iy);
      const bool r = in(x, iy);
      if (l && !r) total += a.eval_dual({1, 0}) * f.dy();
      if (r && !l) total += a.eval_dual({-1, 0}) * f.dy();
    }
  }
  for (int y = 0; y <= f.ny(); ++y) {
    for (int ix = 0; ix < f.nx(); ++ix) {
      const bool b = in(ix, y - 1);
      const bool t = in(ix, y);
      if (b && !t) total += a.eval_dual({0, 1}) * f.dx();
      if (t && !b) total += a.eval_dual({0, -1}) * f.dx();
    }
  }
  return total;
}

RasterSet random_polyomino(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(1, 14);
  std::uniform_real_distribution<double> u(0, 1);
  const int nx = dim(rng);
  const int ny = dim(rng);
  RasterSet f(-1, 1 + u(rng), -0.5, 0.5 + u(rng), nx, ny);
  const double fill = u(rng);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) f.set(ix, iy, u(rng) < fill);
  }
  return f;
}

}  // namespace

TEST_CASE("raster validation") {
  CHECK_THROWS_AS(RasterSet(0, 1, 0, 1, 0, 3), DomainError);
  CHECK_THROWS_AS(RasterSet(1, 1, 0, 1, 2, 3), DomainError);
  RasterSet f(0, 1, 0, 1, 2, 3);
  CHECK_THROWS_AS(f.set(2, 0, true), DomainError);
  CHECK(f.dx() == 0.5);
}

TEST_CASE("phi perimeter of small sets") {
  RasterSet cell(0, 1, 0, 1, 1, 1);
  cell.set(0, 0, true);
  CHECK(raster_phi_perimeter(cell, Anisotropy::euclidean()) == 4.0);
  CHECK(raster_phi_perimeter(cell, square()) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(raster_phi_perimeter(cell, Anisotropy::ellipse(2, 1)) == doctest::Approx(6.0).epsilon(1e-12));

  RasterSet domino(0, 2, 0, 1, 2, 1);
  domino.set(0, 0, true);
  domino.set(1, 0, true);
  CHECK(raster_phi_perimeter(domino, Anisotropy::euclidean()) == 6.0);

  CHECK(raster_phi_perimeter(RasterSet(0, 1, 0, 1, 3, 3), Anisotropy::euclidean()) == 0.0);
}

TEST_CASE("phi perimeter matches a grid-line sweep") {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 100; ++k) {
    const RasterSet f = random_polyomino(rng);
    for (const Anisotropy& a : {Anisotropy::euclidean(), square(), Anisotropy::ellipse(1, 3)}) {
      CHECK(raster_phi_perimeter(f, a) == doctest::Approx(perimeter_by_grid_lines(f, a)).epsilon(1e-12));
    }
  }
}

TEST_CASE("rearrangement examples") {
  // subgraph of a lattice-valued profile comes back unchanged
  const Grid grid(0, 1, 5);
  const Profile u(grid, {0.25, 0.5, 0.75, 0.5, 0.25, 0.5});
  const RasterSet sub = subgraph_raster(u, 0.0, 1.0, 8);
  const ColumnProfile v = vertical_rearrangement(sub);
  CHECK(subgraph_raster(v, sub) == sub);
  const std::vector<double> mids{0.375, 0.625, 0.625, 0.375, 0.375};
  for (std::size_t i = 0; i < mids.size(); ++i) CHECK(v.heights[i] == doctest::Approx(mids[i]).epsilon(1e-12));

  // disk: column heights are chord lengths up to one cell
  const double radius = 0.8;
  RasterSet disk(-1, 1, -1, 1, 80, 80);
  for (int iy = 0; iy < 80; ++iy) {
    for (int ix = 0; ix < 80; ++ix) {
      const double x = disk.x_center(ix);
      const double y = -1 + (iy + 0.5) * disk.dy();
      disk.set(ix, iy, x * x + y * y <= radius * radius);
    }
  }
  const ColumnProfile dv = vertical_rearrangement(disk);
  const auto centers = dv.centers();
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const double s = centers[i];
    const double chord = std::abs(s) < radius ? 2 * std::sqrt(radius * radius - s * s) : 0.0;
    CHECK(std::abs(dv.heights[i] - (-1 + chord)) <= disk.dy() + 1e-12);
  }

  // two bars in the same columns stack up
  RasterSet bars(0, 4, 0, 10, 4, 10);
  for (int ix = 1; ix < 3; ++ix) {
    for (int iy : {2, 3, 7, 8, 9}) bars.set(ix, iy, true);
  }
  const ColumnProfile bv = vertical_rearrangement(bars);
  CHECK(bv.heights == std::vector<double>{0, 5, 5, 0});
}

TEST_CASE("vertical rearrangement never increases the phi perimeter") {
  std::mt19937_64 rng(2024);
  const std::vector<Anisotropy> gauges{Anisotropy::euclidean(), Anisotropy::lp(1), square(), Anisotropy::ellipse(2, 1)};
  for (int k = 0; k < 200; ++k) {
    const RasterSet f = random_polyomino(rng);
    const ColumnProfile v = vertical_rearrangement(f);
    const RasterSet g = subgraph_raster(v, f);
    CHECK(g.column_counts() == f.column_counts());
    CHECK(subgraph_raster(vertical_rearrangement(g), g) == g);
    for (const Anisotropy& a : gauges) {
      CHECK(raster_phi_perimeter(g, a) <= raster_phi_perimeter(f, a) + 1e-9);
    }
  }
}

TEST_CASE("sheared gauge probe") {
  // records only: whether the inequality survives without axis symmetry
  const Anisotropy sheared = Anisotropy::generic(
      [](Vec2 v) { return std::sqrt(v.x * v.x + 1.2 * v.x * v.y + v.y * v.y); }, "sheared");
  std::mt19937_64 rng(5);
  int violations = 0;
  for (int k = 0; k < 200; ++k) {
    const RasterSet f = random_polyomino(rng);
    const RasterSet g = subgraph_raster(vertical_rearrangement(f), f);
    violations += raster_phi_perimeter(g, sheared) > raster_phi_perimeter(f, sheared) + 1e-9;
  }
  MESSAGE("sheared gauge: " << violations << " of 200 rasters gained perimeter");
}

TEST_CASE("raster text round trip") {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 20; ++k) {
    const RasterSet f = random_polyomino(rng);
    std::stringstream ss;
    write_raster(ss, f);
    CHECK(read_raster(ss) == f);
  }
  std::istringstream txt("{\"box\": [0, 3, 0, 2], \"nx\": 3, \"ny\": 2}\n100\n1 1 0\n");
  const RasterSet f = read_raster(txt);
  CHECK(f.at(0, 1));
  CHECK_FALSE(f.at(1, 1));
  CHECK(f.at(1, 0));
  CHECK(f.column_counts() == std::vector<int>{2, 1, 0});

  std::istringstream short_rows("{\"box\": [0, 3, 0, 2], \"nx\": 3, \"ny\": 2}\n100\n");
  CHECK_THROWS_AS(read_raster(short_rows), IngestionError);
  std::istringstream bad_char("{\"box\": [0, 3, 0, 2], \"nx\": 3, \"ny\": 1}\n1x0\n");
  CHECK_THROWS_AS(read_raster(bad_char), IngestionError);
  std::istringstream bad_header("{\"box\": [0, 3], \"nx\": 3, \"ny\": 1}\n100\n");
  CHECK_THROWS_AS(read_raster(bad_header), IngestionError);
  std::istringstream not_json("box 0 3\n100\n");
  CHECK_THROWS_AS(read_raster(not_json), IngestionError);
}
