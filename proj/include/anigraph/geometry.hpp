#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "anigraph/anisotropy.hpp"
#include "anigraph/energy.hpp"

namespace anigraph {

/// A union of closed cells of a uniform nx-by-ny grid over an axis-aligned box.
/// Row 0 is the bottom row.
class RasterSet {
 public:
  RasterSet(double x_min, double x_max, double y_min, double y_max, int nx, int ny);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double y_min() const { return y_min_; }
  double y_max() const { return y_max_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double dx() const { return (x_max_ - x_min_) / nx_; }
  double dy() const { return (y_max_ - y_min_) / ny_; }

  bool at(int ix, int iy) const { return cells_[index(ix, iy)] != 0; }
  void set(int ix, int iy, bool in) { cells_[index(ix, iy)] = in ? 1 : 0; }
  int column_count(int ix) const;
  std::vector<int> column_counts() const;
  double x_center(int ix) const { return x_min_ + (ix + 0.5) * dx(); }

  bool operator==(const RasterSet&) const = default;

 private:
  std::size_t index(int ix, int iy) const;

  double x_min_, x_max_, y_min_, y_max_;
  int nx_, ny_;
  std::vector<unsigned char> cells_;
};

/// Column-wise profile of a raster: one value per column, stacked from y_min.
struct ColumnProfile {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double dy = 1.0;
  std::vector<int> counts;
  std::vector<double> heights;  // y_min + dy * counts

  std::vector<double> centers() const;
};

ColumnProfile vertical_rearrangement(const RasterSet& f);

// Cells of `like`'s grid lying below the profile (column ix filled up to counts[ix]).
RasterSet subgraph_raster(const ColumnProfile& v, const RasterSet& like);

// Raster of the subgraph {y <= u(s)} of a nodal profile, cell centers tested at the column centers.
RasterSet subgraph_raster(const Profile& u, double y_min, double y_max, int ny);

double raster_phi_perimeter(const RasterSet& f, const Anisotropy& aniso);

// Text format: a JSON header line {"box": [x_min, x_max, y_min, y_max], "nx": .., "ny": ..}
// followed by ny rows of nx characters 0/1, top row first.
RasterSet read_raster(std::istream& in);
RasterSet read_raster_file(const std::string& path);
void write_raster(std::ostream& out, const RasterSet& f);

}  // namespace anigraph
