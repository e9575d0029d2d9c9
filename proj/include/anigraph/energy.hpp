#pragma once

#include <span>
#include <string>
#include <vector>

#include "anigraph/anisotropy.hpp"

namespace anigraph {

/// Uniform partition of [x_min, x_max] into n_cells cells.
class Grid {
 public:
  Grid(double x_min, double x_max, int n_cells);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  int n_cells() const { return n_cells_; }
  int n_nodes() const { return n_cells_ + 1; }
  double h() const { return h_; }
  double length() const { return x_max_ - x_min_; }
  double node(int j) const { return j == n_cells_ ? x_max_ : x_min_ + j * h_; }
  std::vector<double> nodes() const;

  bool operator==(const Grid&) const = default;

 private:
  double x_min_;
  double x_max_;
  int n_cells_;
  double h_;
};

/// Nodal values of a discrete profile u on a grid.
struct Profile {
  Profile(Grid grid, std::vector<double> values);

  Grid grid;
  std::vector<double> values;
};

enum class Interp { piecewise_constant, linear };

/// The datum g: a constant, a symmetric two-level step, or tabulated samples.
class GSpec {
 public:
  enum class Kind { constant, step, csv };

  static GSpec constant(double c);
  // -a on the left half of the interval, +a on the right half.
  static GSpec step(double a);
  static GSpec tabulated(std::vector<double> s, std::vector<double> g, Interp interp,
                         std::string source = {});
  static GSpec from_csv(const std::string& path, Interp interp);

  Kind kind() const { return kind_; }
  double level() const { return level_; }  // c for constant, a for step
  Interp interp() const { return interp_; }
  const std::string& source() const { return source_; }
  const std::vector<double>& abscissae() const { return s_; }
  const std::vector<double>& ordinates() const { return g_; }

  double value_at(double s, double x_min, double x_max) const;
  double norm_inf() const;
  double positive_part_inf() const;  // sup of max(g, 0)
  double negative_part_inf() const;  // sup of max(-g, 0)

 private:
  Kind kind_ = Kind::constant;
  double level_ = 0.0;
  Interp interp_ = Interp::linear;
  std::vector<double> s_;
  std::vector<double> g_;
  std::string source_;
};

std::vector<double> sample_g(const GSpec& g, const Grid& grid);

struct EnergyBreakdown {
  double area = 0.0;
  double fidelity = 0.0;
  double total = 0.0;
};

// Trapezoid weights h/2, h, ..., h, h/2.
std::vector<double> fidelity_weights(const Grid& grid);

EnergyBreakdown energy(const Anisotropy& aniso, const Profile& u, std::span<const double> g, double p);

/// Repeated energy evaluation on one grid and datum without per-call allocation.
/// Gives the same bits as energy(). The anisotropy and datum must outlive it.
class EnergyEvaluator {
 public:
  EnergyEvaluator(const Anisotropy& aniso, const Grid& grid, std::span<const double> g, double p);
  EnergyBreakdown operator()(std::span<const double> u);

 private:
  const Anisotropy& aniso_;
  double h_;
  std::span<const double> g_;
  double p_;
  std::vector<double> weights_;
  std::vector<double> terms_;
};

Profile truncate(const Profile& u, double lo, double hi);

// Fixed-tree pairwise summation; the result depends only on the input order.
double pairwise_sum(std::span<const double> terms);

}  // namespace anigraph
