#include "anigraph/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "anigraph/error.hpp"

namespace anigraph {

RasterSet::RasterSet(double x_min, double x_max, double y_min, double y_max, int nx, int ny)
    : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max), nx_(nx), ny_(ny) {
  if (nx < 1 || ny < 1) throw DomainError("raster needs at least one cell in each direction");
  if (!(x_max > x_min) || !(y_max > y_min) || !std::isfinite(x_max - x_min) || !std::isfinite(y_max - y_min)) {
    throw DomainError("raster box must be a nondegenerate finite rectangle");
  }
  cells_.assign(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), 0);
}

std::size_t RasterSet::index(int ix, int iy) const {
  if (ix < 0 || ix >= nx_ || iy < 0 || iy >= ny_) throw DomainError("raster cell index out of range");
  return static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(ix);
}

int RasterSet::column_count(int ix) const {
  int c = 0;
  for (int iy = 0; iy < ny_; ++iy) c += at(ix, iy);
  return c;
}

std::vector<int> RasterSet::column_counts() const {
  std::vector<int> out(static_cast<std::size_t>(nx_));
  for (int ix = 0; ix < nx_; ++ix) out[static_cast<std::size_t>(ix)] = column_count(ix);
  return out;
}

std::vector<double> ColumnProfile::centers() const {
  const double dx = (x_max - x_min) / static_cast<double>(counts.size());
  std::vector<double> c(counts.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = x_min + (static_cast<double>(i) + 0.5) * dx;
  return c;
}

ColumnProfile vertical_rearrangement(const RasterSet& f) {
  ColumnProfile v;
  v.x_min = f.x_min();
  v.x_max = f.x_max();
  v.y_min = f.y_min();
  v.dy = f.dy();
  v.counts = f.column_counts();
  v.heights.reserve(v.counts.size());
  for (int c : v.counts) v.heights.push_back(f.y_min() + v.dy * c);
  return v;
}

RasterSet subgraph_raster(const ColumnProfile& v, const RasterSet& like) {
  if (static_cast<int>(v.counts.size()) != like.nx()) throw DomainError("column count does not match the raster");
  RasterSet out(like.x_min(), like.x_max(), like.y_min(), like.y_max(), like.nx(), like.ny());
  for (int ix = 0; ix < like.nx(); ++ix) {
    const int c = v.counts[static_cast<std::size_t>(ix)];
    if (c < 0 || c > like.ny()) throw DomainError("column height outside the raster");
    for (int iy = 0; iy < c; ++iy) out.set(ix, iy, true);
  }
  return out;
}

RasterSet subgraph_raster(const Profile& u, double y_min, double y_max, int ny) {
  const Grid& g = u.grid;
  RasterSet out(g.x_min(), g.x_max(), y_min, y_max, g.n_cells(), ny);
  const double dy = out.dy();
  for (int ix = 0; ix < g.n_cells(); ++ix) {
    const double mid = 0.5 * (u.values[static_cast<std::size_t>(ix)] + u.values[static_cast<std::size_t>(ix) + 1]);
    const int c = std::clamp(static_cast<int>(std::lround((mid - y_min) / dy)), 0, ny);
    for (int iy = 0; iy < c; ++iy) out.set(ix, iy, true);
  }
  return out;
}

double raster_phi_perimeter(const RasterSet& f, const Anisotropy& aniso) {
  // count exposed sides by outward normal, then weight each family once
  long left = 0;
  long right = 0;
  long down = 0;
  long up = 0;
  for (int iy = 0; iy < f.ny(); ++iy) {
    for (int ix = 0; ix < f.nx(); ++ix) {
      if (!f.at(ix, iy)) continue;
      left += ix == 0 || !f.at(ix - 1, iy);
      right += ix + 1 == f.nx() || !f.at(ix + 1, iy);
      down += iy == 0 || !f.at(ix, iy - 1);
      up += iy + 1 == f.ny() || !f.at(ix, iy + 1);
    }
  }
  const double dx = f.dx();
  const double dy = f.dy();
  return static_cast<double>(left) * aniso.eval_dual({-1, 0}) * dy +
         static_cast<double>(right) * aniso.eval_dual({1, 0}) * dy +
         static_cast<double>(down) * aniso.eval_dual({0, -1}) * dx +
         static_cast<double>(up) * aniso.eval_dual({0, 1}) * dx;
}

RasterSet read_raster(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IngestionError("raster: missing header line");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw IngestionError(std::string("raster: malformed header: ") + e.what());
  }
  if (!header.contains("box") || !header["box"].is_array() || header["box"].size() != 4 || !header.contains("nx") ||
      !header.contains("ny")) {
    throw IngestionError("raster: header needs box[4], nx and ny");
  }
  std::array<double, 4> box{};
  int nx = 0;
  int ny = 0;
  try {
    for (std::size_t i = 0; i < 4; ++i) box[i] = header["box"][i].get<double>();
    nx = header["nx"].get<int>();
    ny = header["ny"].get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw IngestionError(std::string("raster: bad header field: ") + e.what());
  }
  RasterSet f = [&] {
    try {
      return RasterSet(box[0], box[1], box[2], box[3], nx, ny);
    } catch (const DomainError& e) {
      throw IngestionError(std::string("raster: ") + e.what());
    }
  }();
  for (int row = 0; row < ny; ++row) {
    if (!std::getline(in, line)) throw IngestionError("raster: fewer rows than ny");
    std::string bits;
    for (char ch : line) {
      if (ch == '0' || ch == '1') {
        bits.push_back(ch);
      } else if (ch != ' ' && ch != '\t' && ch != '\r') {
        throw IngestionError("raster: rows may only contain 0 and 1");
      }
    }
    if (static_cast<int>(bits.size()) != nx) throw IngestionError("raster: row length differs from nx");
    const int iy = ny - 1 - row;
    for (int ix = 0; ix < nx; ++ix) f.set(ix, iy, bits[static_cast<std::size_t>(ix)] == '1');
  }
  return f;
}

RasterSet read_raster_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open raster file " + path);
  return read_raster(in);
}

void write_raster(std::ostream& out, const RasterSet& f) {
  const nlohmann::json header{
      {"box", {f.x_min(), f.x_max(), f.y_min(), f.y_max()}}, {"nx", f.nx()}, {"ny", f.ny()}};
  out << header.dump() << '\n';
  for (int iy = f.ny() - 1; iy >= 0; --iy) {
    for (int ix = 0; ix < f.nx(); ++ix) out << (f.at(ix, iy) ? '1' : '0');
    out << '\n';
  }
}

}  // namespace anigraph
