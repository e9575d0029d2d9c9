#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "anigraph/vec2.hpp"

namespace anigraph {

enum class AnisotropyKind { euclidean, ellipse, lp, polygon, generic };

std::string to_string(AnisotropyKind kind);

inline constexpr int kMeasureSamples = 65536;
inline constexpr int kProjectionSamples = 4096;
inline constexpr int kChartSamples = 8192;
inline constexpr int kCurvatureSamples = 4096;

/// Isoperimetric data of the unit ball W = {phi <= 1}.
struct WulffMeasures {
  double area = 0.0;           // |W|
  double phi_perimeter = 0.0;  // sum of phi_dual(edge normal) * edge length
  double c_phi = 0.0;          // phi_perimeter / sqrt(area)
  double alpha0 = 0.0;         // phi_perimeter / ((2 phi_perimeter + 1) sqrt(area))
  int sample_count = 0;        // boundary points used (vertex count for polygons)
};

struct SymmetryFlags {
  bool partially_monotone = false;
  bool vertical_facets = false;
  bool elliptic = false;
  // Smallest circumradius of consecutive boundary triples; 0 when not elliptic.
  double rolling_radius_estimate = 0.0;
};

/// Numerical check of the gauge axioms on sampled directions.
struct AxiomReport {
  double homogeneity_error = 0.0;  // max relative |phi(t v) - t phi(v)|
  double evenness_error = 0.0;     // max relative |phi(-v) - phi(v)|
  int convexity_violations = 0;    // midpoint inequality failures
  double norm_bound = 0.0;         // largest c with c <= phi <= 1/c on the unit circle
};

/// Arc-length chart of the boundary of W. Parameter 0 sits at the bottom
/// point boundary_point(0, -1) and grows counterclockwise up to the
/// perimeter. Polygons are charted exactly; smooth kinds use a sampled
/// polyline whose points are pushed radially back onto the boundary.
class BoundaryChart {
 public:
  BoundaryChart() = default;
  BoundaryChart(std::vector<Vec2> nodes, bool exact, std::function<Vec2(Vec2)> to_boundary);

  double perimeter() const { return perimeter_; }
  bool exact() const { return exact_; }
  const std::vector<Vec2>& nodes() const { return nodes_; }
  const std::vector<double>& node_params() const { return cum_; }

  // Parameter of a boundary point (located by its polar angle).
  double param_of(Vec2 p) const;
  Vec2 point_at(double s) const;
  double wrap(double s) const;

 private:
  std::size_t segment_for_angle(double theta) const;

  std::vector<Vec2> nodes_;      // closed: nodes_.back() == nodes_.front()
  std::vector<double> angles_;   // unwrapped, starting at -pi/2
  std::vector<double> cum_;      // cumulative arc length at each node
  double perimeter_ = 0.0;
  bool exact_ = false;
  std::function<Vec2(Vec2)> to_boundary_;
};

/// Connected arc of the boundary of W, stored as start parameter plus
/// length so that wraparound at parameter 0 needs no special casing.
struct BoundaryArc {
  double start = 0.0;
  double length = 0.0;
  double perimeter = 0.0;
  Vec2 first;  // point at start
  Vec2 last;   // point at start + length

  bool degenerate(double eps = 1e-12) const { return length <= eps; }
  bool full() const { return length >= perimeter; }
  double end() const { return start + length; }
  double mid_param() const;
  bool contains_param(double s, double slack = 0.0) const;
  // One interval when the arc stays inside [0, P], two when it wraps.
  std::vector<std::pair<double, double>> intervals() const;
};

/// A norm on R^2 together with the geometry of its unit ball. Instances
/// are immutable; caches are filled at construction and copies share them.
class Anisotropy {
 public:
  using Evaluator = std::function<double(Vec2)>;

  static Anisotropy euclidean();
  static Anisotropy ellipse(double a, double b);
  static Anisotropy lp(double q);
  // Counterclockwise, centrally symmetric vertices of W.
  static Anisotropy polygon(std::vector<Vec2> vertices);
  static Anisotropy generic(Evaluator evaluator, std::string label = "generic");

  AnisotropyKind kind() const;
  std::string label() const;
  double ellipse_a() const;
  double ellipse_b() const;
  double lp_q() const;
  const std::vector<Vec2>& vertices() const;  // polygon kind only

  double eval(Vec2 v) const;
  double eval_dual(Vec2 v) const;
  // A maximizer of <., nu> over W; for polygons the lowest-index vertex.
  Vec2 support_point(Vec2 nu) const;
  Vec2 boundary_point(Vec2 d) const;
  std::vector<Vec2> wulff_sample(int samples) const;
  WulffMeasures wulff_measures(int samples = kMeasureSamples) const;
  BoundaryArc exposed_face(Vec2 nu, double tol) const;
  Vec2 project(Vec2 x) const;

  const WulffMeasures& measures() const;
  const SymmetryFlags& flags() const;
  const BoundaryChart& chart() const;
  AxiomReport check_axioms(int samples = 1024, unsigned long seed = 7) const;

  double diameter() const;
  double default_face_tol() const;
  // Polygon vertices carrying the exact geometry (lp(1) diamond, polygon,
  // inner approximation of a generic gauge); empty for smooth closed forms.
  const std::vector<Vec2>& geometry_polygon() const;

  struct Impl;

 private:
  explicit Anisotropy(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// Free-function spellings of the member operations.
inline double eval(const Anisotropy& a, Vec2 v) { return a.eval(v); }
inline double eval_dual(const Anisotropy& a, Vec2 v) { return a.eval_dual(v); }
inline Vec2 boundary_point(const Anisotropy& a, Vec2 d) { return a.boundary_point(d); }
inline std::vector<Vec2> wulff_sample(const Anisotropy& a, int m) { return a.wulff_sample(m); }
inline WulffMeasures wulff_measures(const Anisotropy& a, int m = kMeasureSamples) {
  return a.wulff_measures(m);
}
inline const SymmetryFlags& symmetry_flags(const Anisotropy& a) { return a.flags(); }
inline BoundaryArc exposed_face(const Anisotropy& a, Vec2 nu, double tol) {
  return a.exposed_face(nu, tol);
}
inline Vec2 project_wulff(const Anisotropy& a, Vec2 x) { return a.project(x); }

// Nearest point of a convex polygon (vertices counterclockwise) to x,
// assuming x lies outside. Ties go to the lowest edge index.
Vec2 nearest_point_on_polygon(const std::vector<Vec2>& vertices, Vec2 x);

}  // namespace anigraph
