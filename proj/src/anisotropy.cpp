#include "anigraph/anisotropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "anigraph/error.hpp"

namespace anigraph {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Polar angle mapped into [-pi/2, 3pi/2), the chart's angular range.
double chart_angle(Vec2 p) {
  double t = std::atan2(p.y, p.x);
  if (t < -kPi / 2) t += kTwoPi;
  return t;
}

// Maximizes a unimodal function on [a, b]; returns the argmax.
template <class F>
double golden_max(F&& f, double a, double b) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

double polygon_signed_area(const std::vector<Vec2>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * s;
}

std::vector<Vec2> diamond() { return {{1, 0}, {0, 1}, {-1, 0}, {0, -1}}; }

}  // namespace

std::string to_string(AnisotropyKind kind) {
  switch (kind) {
    case AnisotropyKind::euclidean: return "euclidean";
    case AnisotropyKind::ellipse: return "ellipse";
    case AnisotropyKind::lp: return "lp";
    case AnisotropyKind::polygon: return "polygon";
    case AnisotropyKind::generic: return "generic";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// BoundaryChart

BoundaryChart::BoundaryChart(std::vector<Vec2> nodes, bool exact,
                             std::function<Vec2(Vec2)> to_boundary)
    : nodes_(std::move(nodes)), exact_(exact), to_boundary_(std::move(to_boundary)) {
  if (nodes_.size() < 3) throw GeometryError("boundary chart needs at least three nodes");
  angles_.reserve(nodes_.size() + 1);
  for (const Vec2& p : nodes_) angles_.push_back(chart_angle(p));
  for (std::size_t i = 1; i < angles_.size(); ++i) {
    if (!(angles_[i] > angles_[i - 1])) {
      throw GeometryError("boundary nodes are not in counterclockwise angular order");
    }
  }
  nodes_.push_back(nodes_.front());
  angles_.push_back(angles_.front() + kTwoPi);
  cum_.assign(nodes_.size(), 0.0);
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    cum_[i] = cum_[i - 1] + distance(nodes_[i], nodes_[i - 1]);
  }
  perimeter_ = cum_.back();
}

double BoundaryChart::wrap(double s) const {
  double r = std::fmod(s, perimeter_);
  if (r < 0) r += perimeter_;
  if (r >= perimeter_) r = 0.0;
  return r;
}

std::size_t BoundaryChart::segment_for_angle(double theta) const {
  auto it = std::upper_bound(angles_.begin(), angles_.end(), theta);
  std::size_t k = it == angles_.begin() ? 0 : static_cast<std::size_t>(it - angles_.begin()) - 1;
  return std::min(k, nodes_.size() - 2);
}

double BoundaryChart::param_of(Vec2 p) const {
  const double theta = chart_angle(p);
  const std::size_t k = segment_for_angle(theta);
  const Vec2 a = nodes_[k];
  const Vec2 e = nodes_[k + 1] - a;
  const Vec2 d = unit_from_angle(theta);
  const double denom = cross(e, d);
  double t = 0.0;
  if (std::abs(denom) > 0.0) t = -cross(a, d) / denom;
  t = std::clamp(t, 0.0, 1.0);
  return cum_[k] + t * (cum_[k + 1] - cum_[k]);
}

Vec2 BoundaryChart::point_at(double s) const {
  const double w = wrap(s);
  auto it = std::upper_bound(cum_.begin(), cum_.end(), w);
  std::size_t k = it == cum_.begin() ? 0 : static_cast<std::size_t>(it - cum_.begin()) - 1;
  k = std::min(k, nodes_.size() - 2);
  const double len = cum_[k + 1] - cum_[k];
  const double t = len > 0 ? (w - cum_[k]) / len : 0.0;
  const Vec2 q = nodes_[k] + (nodes_[k + 1] - nodes_[k]) * t;
  if (exact_ || !to_boundary_) return q;
  return to_boundary_(q);
}

// ---------------------------------------------------------------------------
// BoundaryArc

double BoundaryArc::mid_param() const {
  double m = start + 0.5 * length;
  if (m >= perimeter) m -= perimeter;
  return m;
}

bool BoundaryArc::contains_param(double s, double slack) const {
  if (full()) return true;
  double rel = std::fmod(s - start, perimeter);
  if (rel < 0) rel += perimeter;
  if (rel <= length + slack) return true;
  // within slack before the start
  return perimeter - rel <= slack;
}

std::vector<std::pair<double, double>> BoundaryArc::intervals() const {
  if (full()) return {{0.0, perimeter}};
  if (start + length <= perimeter) return {{start, start + length}};
  return {{start, perimeter}, {0.0, start + length - perimeter}};
}

// ---------------------------------------------------------------------------
// Anisotropy internals

struct Anisotropy::Impl {
  AnisotropyKind kind = AnisotropyKind::euclidean;
  std::string label;
  double a = 1.0;
  double b = 1.0;
  double q = 2.0;
  std::vector<Vec2> vertices;          // polygon kind, as given
  std::vector<Vec2> poly;              // exact polygon geometry (polygon, lp(1), generic inner)
  std::vector<Vec2> gauge_normals;     // polygon gauge: phi(v) = max <v,n_e>/c_e
  std::vector<double> gauge_offsets;
  Evaluator fn;
  std::vector<Vec2> dense;             // generic: boundary samples from -pi/2 ccw
  std::vector<double> dense_angles;
  BoundaryChart chart;
  WulffMeasures measures;
  SymmetryFlags flags;
  double diameter = 2.0;

  bool polygonal() const {
    return kind == AnisotropyKind::polygon || (kind == AnisotropyKind::lp && q == 1.0);
  }

  double eval(Vec2 v) const {
    switch (kind) {
      case AnisotropyKind::euclidean: return std::sqrt(v.x * v.x + v.y * v.y);
      case AnisotropyKind::ellipse: return std::sqrt((v.x / a) * (v.x / a) + (v.y / b) * (v.y / b));
      case AnisotropyKind::lp: return lp_norm(v, q);
      case AnisotropyKind::polygon: {
        double m = 0.0;
        for (std::size_t i = 0; i < gauge_normals.size(); ++i) {
          m = std::max(m, dot(v, gauge_normals[i]) / gauge_offsets[i]);
        }
        return m;
      }
      case AnisotropyKind::generic: {
        const double r = fn(v);
        if (!std::isfinite(r) || r < 0.0) {
          throw InvalidAnisotropy("generic evaluator returned a negative or non-finite value");
        }
        return r;
      }
    }
    return 0.0;
  }

  static double lp_norm(Vec2 v, double p) {
    const double ax = std::abs(v.x);
    const double ay = std::abs(v.y);
    if (p == 1.0) return ax + ay;
    if (std::isinf(p)) return std::max(ax, ay);
    const double m = std::max(ax, ay);
    if (m == 0.0) return 0.0;
    return m * std::pow(std::pow(ax / m, p) + std::pow(ay / m, p), 1.0 / p);
  }

  double eval_dual(Vec2 v) const {
    switch (kind) {
      case AnisotropyKind::euclidean: return std::sqrt(v.x * v.x + v.y * v.y);
      case AnisotropyKind::ellipse: return std::sqrt((a * v.x) * (a * v.x) + (b * v.y) * (b * v.y));
      case AnisotropyKind::lp: {
        if (q == 1.0) return std::max(std::abs(v.x), std::abs(v.y));
        return lp_norm(v, q / (q - 1.0));
      }
      case AnisotropyKind::polygon: {
        double m = -std::numeric_limits<double>::infinity();
        for (const Vec2& p : poly) m = std::max(m, dot(v, p));
        return std::max(m, 0.0);
      }
      case AnisotropyKind::generic: {
        if (v.x == 0.0 && v.y == 0.0) return 0.0;
        return std::max(0.0, dot(support_point(v), v));
      }
    }
    return 0.0;
  }

  Vec2 boundary_point(Vec2 d) const {
    if (d.x == 0.0 && d.y == 0.0) throw DomainError("boundary_point: zero direction");
    const double r = eval(d);
    if (!(r > 0.0)) throw InvalidAnisotropy("gauge vanishes at a nonzero direction");
    return d / r;
  }

  Vec2 support_point(Vec2 nu) const {
    switch (kind) {
      case AnisotropyKind::euclidean: return nu / nu.norm();
      case AnisotropyKind::ellipse: {
        const Vec2 g{a * a * nu.x, b * b * nu.y};
        return g / eval_dual(nu);
      }
      case AnisotropyKind::lp:
        if (q != 1.0) {
          const double qd = q / (q - 1.0);
          const double n = eval_dual(nu);
          auto comp = [&](double c) {
            return std::copysign(std::pow(std::abs(c) / n, qd - 1.0), c);
          };
          return {comp(nu.x), comp(nu.y)};
        }
        [[fallthrough]];
      case AnisotropyKind::polygon: {
        std::size_t best = 0;
        double bv = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < poly.size(); ++i) {
          const double val = dot(nu, poly[i]);
          if (val > bv) {
            bv = val;
            best = i;
          }
        }
        return poly[best];
      }
      case AnisotropyKind::generic: {
        std::size_t best = 0;
        double bv = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < dense.size(); ++i) {
          const double val = dot(nu, dense[i]);
          if (val > bv) {
            bv = val;
            best = i;
          }
        }
        const double step = kTwoPi / static_cast<double>(dense.size());
        const double t0 = dense_angles[best];
        const double t = golden_max(
            [&](double th) { return dot(boundary_point(unit_from_angle(th)), nu); },
            t0 - step, t0 + step);
        const Vec2 p = boundary_point(unit_from_angle(t));
        return dot(p, nu) >= bv ? p : dense[best];
      }
    }
    return {};
  }

  Vec2 project(Vec2 x) const;
  Vec2 project_ellipse(Vec2 x) const;
  Vec2 project_lp(Vec2 x) const;
  BoundaryArc exposed_face(Vec2 nu, double tol) const;
  BoundaryArc polygon_face(Vec2 nu, double tol) const;
  BoundaryArc smooth_face(Vec2 nu, double tol) const;

  std::vector<Vec2> sample(int m) const;
  WulffMeasures compute_measures(int m) const;
  SymmetryFlags compute_flags() const;
  bool generic_vertical_facet() const;
  void finish();
};

std::vector<Vec2> Anisotropy::Impl::sample(int m) const {
  if (m < 3) throw DomainError("wulff_sample needs at least 3 points");
  std::vector<std::pair<double, Vec2>> pts;
  pts.reserve(static_cast<std::size_t>(m) + vertices.size());
  for (int k = 0; k < m; ++k) {
    const double t = kTwoPi * k / m;
    pts.emplace_back(t, boundary_point(unit_from_angle(t)));
  }
  if (kind == AnisotropyKind::polygon) {
    for (const Vec2& v : vertices) {
      double t = std::atan2(v.y, v.x);
      if (t < 0) t += kTwoPi;
      pts.emplace_back(t, v);
    }
    std::stable_sort(pts.begin(), pts.end(),
                     [](const auto& l, const auto& r) { return l.first < r.first; });
    // a vertex replaces a sample sharing its direction
    std::vector<std::pair<double, Vec2>> merged;
    for (const auto& pt : pts) {
      if (!merged.empty() && std::abs(pt.first - merged.back().first) < 1e-14) {
        merged.back() = pt;
      } else {
        merged.push_back(pt);
      }
    }
    pts.swap(merged);
  }
  std::vector<Vec2> out;
  out.reserve(pts.size());
  for (const auto& pt : pts) out.push_back(pt.second);
  return out;
}

WulffMeasures Anisotropy::Impl::compute_measures(int m) const {
  std::vector<Vec2> pl;
  std::vector<double> th;
  if (polygonal()) {
    pl = poly;
  } else {
    if (m < 3) throw DomainError("wulff_measures needs at least 3 samples");
    pl.reserve(static_cast<std::size_t>(m));
    th.reserve(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
      const double t = kTwoPi * k / m;
      th.push_back(t);
      pl.push_back(boundary_point(unit_from_angle(t)));
    }
  }
  const std::size_t n = pl.size();
  const double area = polygon_signed_area(pl);
  if (!(area > 0.0) || !std::isfinite(area)) {
    throw GeometryError("degenerate Wulff polyline (non-positive area)");
  }
  double perim = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p0 = pl[i];
    const Vec2 p1 = pl[(i + 1) % n];
    const Vec2 e = p1 - p0;
    const double len = e.norm();
    if (len == 0.0) continue;
    if (cross(p0, p1) <= 0.0) throw GeometryError("self-intersecting Wulff polyline");
    const Vec2 nu{e.y / len, -e.x / len};
    double support;
    if (kind == AnisotropyKind::generic) {
      // the supporting point for this edge normal lies on the arc between p0 and p1
      const double t0 = th[i];
      const double t1 = (i + 1 < n) ? th[i + 1] : th[0] + kTwoPi;
      const double t = golden_max(
          [&](double a) { return dot(boundary_point(unit_from_angle(a)), nu); }, t0, t1);
      support = std::max({dot(boundary_point(unit_from_angle(t)), nu), dot(p0, nu), dot(p1, nu)});
    } else {
      support = eval_dual(nu);
    }
    perim += support * len;
  }
  WulffMeasures out;
  out.area = area;
  out.phi_perimeter = perim;
  out.c_phi = perim / std::sqrt(area);
  out.alpha0 = perim / ((2.0 * perim + 1.0) * std::sqrt(area));
  out.sample_count = static_cast<int>(n);
  return out;
}

bool Anisotropy::Impl::generic_vertical_facet() const {
  auto spread = [&](double delta) {
    return distance(support_point(unit_from_angle(delta)), support_point(unit_from_angle(-delta)));
  };
  const double coarse = spread(1e-4);
  if (coarse <= 1e-6) return false;
  // a facet keeps its endpoints apart as the normals close in; a smooth arc does not
  const double fine = spread(1e-6);
  return fine > 0.5 * coarse;
}

SymmetryFlags Anisotropy::Impl::compute_flags() const {
  SymmetryFlags f;
  switch (kind) {
    case AnisotropyKind::euclidean:
    case AnisotropyKind::ellipse:
    case AnisotropyKind::lp:
      f.partially_monotone = true;
      f.vertical_facets = false;
      break;
    case AnisotropyKind::polygon: {
      f.partially_monotone = std::all_of(vertices.begin(), vertices.end(), [&](Vec2 v) {
        return std::abs(eval({v.x, -v.y}) - 1.0) <= 1e-9;
      });
      const double scale = diameter;
      for (std::size_t i = 0; i < vertices.size(); ++i) {
        const Vec2 e = vertices[(i + 1) % vertices.size()] - vertices[i];
        if (std::abs(e.x) <= 1e-12 * scale && std::abs(e.y) > 1e-12 * scale) {
          f.vertical_facets = true;
        }
      }
      break;
    }
    case AnisotropyKind::generic: {
      std::mt19937_64 rng(1234567);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      bool ok = true;
      for (int i = 0; i < 1024 && ok; ++i) {
        const Vec2 v{u(rng), u(rng)};
        if (v.x == 0.0 && v.y == 0.0) continue;
        const double p0 = eval(v);
        const double p1 = eval({std::abs(v.x), std::abs(v.y)});
        ok = std::abs(p0 - p1) <= 1e-10 * std::max(1.0, p0);
      }
      f.partially_monotone = ok;
      f.vertical_facets = generic_vertical_facet();
      break;
    }
  }
  if (polygonal()) {
    f.elliptic = false;
    f.rolling_radius_estimate = 0.0;
    return f;
  }
  const std::vector<Vec2> pts = sample(kCurvatureSamples);
  const std::size_t n = pts.size();
  double kmin = std::numeric_limits<double>::infinity();
  double kmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p0 = pts[(i + n - 1) % n];
    const Vec2 p1 = pts[i];
    const Vec2 p2 = pts[(i + 1) % n];
    const double la = distance(p0, p1);
    const double lb = distance(p1, p2);
    const double lc = distance(p0, p2);
    const double twice_area = std::abs(cross(p1 - p0, p2 - p0));
    const double kappa = (la * lb * lc > 0.0) ? 2.0 * twice_area / (la * lb * lc) : 0.0;
    kmin = std::min(kmin, kappa);
    kmax = std::max(kmax, kappa);
  }
  f.elliptic = kmin >= 1e-6 && kmax <= 1e6;
  f.rolling_radius_estimate = f.elliptic ? 1.0 / kmax : 0.0;
  return f;
}

Vec2 Anisotropy::Impl::project_ellipse(Vec2 x) const {
  const double a2 = a * a;
  const double b2 = b * b;
  const double xa = x.x * a;
  const double yb = x.y * b;
  double lam = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double da = a2 + lam;
    const double db = b2 + lam;
    const double f = (xa / da) * (xa / da) + (yb / db) * (yb / db) - 1.0;
    const double fp = -2.0 * (xa * xa / (da * da * da) + yb * yb / (db * db * db));
    if (fp == 0.0) break;
    const double step = f / fp;
    lam -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(lam))) break;
  }
  return {x.x * a2 / (a2 + lam), x.y * b2 / (b2 + lam)};
}

Vec2 Anisotropy::Impl::project_lp(Vec2 x) const {
  // Nearest point on the first-quadrant arc z(t) = (cos t, sin t) / |(cos t, sin t)|_q.
  // Stationarity: (x1 - z1) z2^(q-1) = (x2 - z2) z1^(q-1); the residual runs
  // from -x2 at t = 0 to x1 at t = pi/2, so regula falsi (Illinois) brackets it.
  const double x1 = std::abs(x.x);
  const double x2 = std::abs(x.y);
  if (x1 == 0.0) return {0.0, std::copysign(1.0, x.y)};
  if (x2 == 0.0) return {std::copysign(1.0, x.x), 0.0};
  auto point = [&](double t) {
    const double c = std::cos(t);
    const double s = std::sin(t);
    const double r = std::pow(std::pow(c, q) + std::pow(s, q), 1.0 / q);
    return Vec2{c / r, s / r};
  };
  auto residual = [&](double t) {
    const Vec2 z = point(t);
    return (x1 - z.x) * std::pow(z.y, q - 1.0) - (x2 - z.y) * std::pow(z.x, q - 1.0);
  };
  double a = 0.0;
  double b = 0.5 * std::numbers::pi;
  double fa = -x2;
  double fb = x1;
  int side = 0;
  double t = 0.5 * (a + b);
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    t = (a * fb - b * fa) / (fb - fa);
    if (!(t > a && t < b)) t = 0.5 * (a + b);
    const double ft = residual(t);
    if (ft == 0.0) break;
    if ((ft > 0.0) == (fb > 0.0)) {
      b = t;
      fb = ft;
      if (side == -1) fa *= 0.5;
      side = -1;
    } else {
      a = t;
      fa = ft;
      if (side == 1) fb *= 0.5;
      side = 1;
    }
  }
  const Vec2 z = point(t);
  return {std::copysign(z.x, x.x), std::copysign(z.y, x.y)};
}

Vec2 Anisotropy::Impl::project(Vec2 x) const {
  const double r = eval(x);
  if (r <= 1.0) return x;
  switch (kind) {
    case AnisotropyKind::euclidean: return x / r;
    case AnisotropyKind::ellipse: {
      const Vec2 p = project_ellipse(x);
      const double rp = eval(p);
      return rp > 1.0 ? p / rp : p;
    }
    case AnisotropyKind::lp:
      if (q == 2.0) return x / r;
      if (q != 1.0) return project_lp(x);
      [[fallthrough]];
    case AnisotropyKind::polygon:
    case AnisotropyKind::generic: return nearest_point_on_polygon(poly, x);
  }
  return x;
}

BoundaryArc Anisotropy::Impl::polygon_face(Vec2 nu, double tol) const {
  const auto& nodes = chart.nodes();
  const auto& cum = chart.node_params();
  const std::size_t m = nodes.size() - 1;  // distinct nodes
  const double perim = chart.perimeter();
  std::vector<double> f(m);
  std::size_t kbest = 0;
  for (std::size_t i = 0; i < m; ++i) {
    f[i] = dot(nodes[i], nu);
    if (f[i] > f[kbest]) kbest = i;
  }
  const double d = f[kbest];
  const double eps = 1e-12 * (1.0 + std::abs(d));
  const double thr = d - std::max(tol, 0.0);
  auto in = [&](std::size_t i) { return f[i] >= thr - eps; };
  auto prev = [&](std::size_t i) { return (i + m - 1) % m; };
  auto next = [&](std::size_t i) { return (i + 1) % m; };
  auto seglen = [&](std::size_t i) { return cum[i + 1] - cum[i]; };

  BoundaryArc arc;
  arc.perimeter = perim;
  std::size_t left = kbest;
  std::size_t steps = 0;
  while (in(prev(left)) && steps < m) {
    left = prev(left);
    ++steps;
  }
  if (steps >= m) {
    arc.start = 0.0;
    arc.length = perim;
    arc.first = arc.last = chart.point_at(0.0);
    return arc;
  }
  std::size_t right = kbest;
  while (in(next(right))) right = next(right);

  // faces of a polygon are whole vertices or edges; tol only decides membership
  arc.start = cum[left];
  double len = 0.0;
  for (std::size_t i = left; i != right; i = next(i)) len += seglen(i);
  arc.length = len;
  arc.first = chart.point_at(arc.start);
  arc.last = chart.point_at(arc.start + arc.length);
  return arc;
}

BoundaryArc Anisotropy::Impl::smooth_face(Vec2 nu, double tol) const {
  const Vec2 star = support_point(nu);
  const double d = std::max(eval_dual(nu), dot(star, nu));
  const double thr = d - std::max(tol, 0.0);
  const double t_star = std::atan2(star.y, star.x);
  auto f = [&](double th) { return dot(boundary_point(unit_from_angle(th)), nu); };

  BoundaryArc arc;
  arc.perimeter = chart.perimeter();
  if (f(t_star + kPi) >= thr) {
    arc.start = 0.0;
    arc.length = arc.perimeter;
    arc.first = arc.last = chart.point_at(0.0);
    return arc;
  }
  double t_lo = t_star;
  double t_hi = t_star;
  if (tol > 0.0) {
    auto crossing = [&](double inside, double outside) {
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (inside + outside);
        if (mid == inside || mid == outside) break;
        if (f(mid) >= thr) inside = mid; else outside = mid;
      }
      return inside;
    };
    t_lo = crossing(t_star, t_star - kPi);
    t_hi = crossing(t_star, t_star + kPi);
  }
  const double s_lo = chart.param_of(boundary_point(unit_from_angle(t_lo)));
  const double s_hi = chart.param_of(boundary_point(unit_from_angle(t_hi)));
  double len = s_hi - s_lo;
  if (len < -0.5 * arc.perimeter) len += arc.perimeter;
  arc.start = chart.wrap(s_lo);
  arc.length = std::max(0.0, len);
  arc.first = chart.point_at(arc.start);
  arc.last = chart.point_at(arc.start + arc.length);
  return arc;
}

BoundaryArc Anisotropy::Impl::exposed_face(Vec2 nu, double tol) const {
  if (std::abs(nu.norm() - 1.0) > 1e-12) throw DomainError("exposed_face: normal must be a unit vector");
  if (polygonal()) return polygon_face(nu, tol);
  return smooth_face(nu, tol);
}

void Anisotropy::Impl::finish() {
  if (kind == AnisotropyKind::lp && q == 1.0) poly = diamond();
  if (kind == AnisotropyKind::polygon) poly = vertices;

  if (kind == AnisotropyKind::generic) {
    const int m = kChartSamples;
    dense.reserve(m);
    dense_angles.reserve(m);
    for (int k = 0; k < m; ++k) {
      const double t = -kPi / 2 + kTwoPi * k / m;
      dense_angles.push_back(t);
      dense.push_back(boundary_point(unit_from_angle(t)));
    }
  }

  if (polygonal()) {
    std::vector<Vec2> nodes = poly;
    const Vec2 bottom = boundary_point({0.0, -1.0});
    nodes.push_back(bottom);
    std::sort(nodes.begin(), nodes.end(),
              [](Vec2 l, Vec2 r) { return chart_angle(l) < chart_angle(r); });
    std::vector<Vec2> uniq;
    for (const Vec2& p : nodes) {
      if (uniq.empty() || distance(p, uniq.back()) > 1e-14) uniq.push_back(p);
    }
    chart = BoundaryChart(std::move(uniq), true, {});
  } else {
    std::vector<Vec2> nodes;
    if (kind == AnisotropyKind::generic) {
      nodes = dense;
    } else {
      nodes.reserve(kChartSamples);
      for (int k = 0; k < kChartSamples; ++k) {
        nodes.push_back(boundary_point(unit_from_angle(-kPi / 2 + kTwoPi * k / kChartSamples)));
      }
    }
    const Impl* self = this;
    chart = BoundaryChart(std::move(nodes), false,
                          [self](Vec2 p) { return self->boundary_point(p); });
  }

  double rmax = 0.0;
  for (const Vec2& p : chart.nodes()) rmax = std::max(rmax, p.norm());
  diameter = 2.0 * rmax;

  if (kind == AnisotropyKind::generic) poly = sample(kProjectionSamples);

  measures = compute_measures(kMeasureSamples);
  flags = compute_flags();
}

// ---------------------------------------------------------------------------
// Anisotropy public surface

Anisotropy Anisotropy::euclidean() {
  auto impl = std::make_shared<Impl>();
  impl->kind = AnisotropyKind::euclidean;
  impl->label = "euclidean";
  impl->finish();
  return Anisotropy(std::move(impl));
}

Anisotropy Anisotropy::ellipse(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw InvalidAnisotropy("ellipse semi-axes must be positive and finite");
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = AnisotropyKind::ellipse;
  impl->label = "ellipse";
  impl->a = a;
  impl->b = b;
  impl->finish();
  return Anisotropy(std::move(impl));
}

Anisotropy Anisotropy::lp(double q) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw InvalidAnisotropy("lp exponent must satisfy 1 <= q < inf");
  auto impl = std::make_shared<Impl>();
  impl->kind = AnisotropyKind::lp;
  impl->label = "lp";
  impl->q = q;
  impl->finish();
  return Anisotropy(std::move(impl));
}

Anisotropy Anisotropy::polygon(std::vector<Vec2> vertices) {
  const std::size_t n = vertices.size();
  if (n < 4) throw InvalidAnisotropy("polygon needs at least four vertices");
  double scale = 0.0;
  for (const Vec2& v : vertices) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw InvalidAnisotropy("non-finite polygon vertex");
    scale = std::max(scale, v.norm());
  }
  if (!(polygon_signed_area(vertices) > 0.0)) {
    throw InvalidAnisotropy("polygon vertices must be counterclockwise with positive area");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e0 = vertices[(i + 1) % n] - vertices[i];
    const Vec2 e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
    if (e0.norm() <= 1e-14 * scale) throw InvalidAnisotropy("repeated polygon vertex");
    if (cross(e0, e1) < -1e-12 * scale * scale) throw InvalidAnisotropy("polygon is not convex");
  }
  for (const Vec2& v : vertices) {
    const bool has_mirror = std::any_of(vertices.begin(), vertices.end(), [&](Vec2 w) {
      return (w + v).norm() <= 1e-9 * std::max(1.0, scale);
    });
    if (!has_mirror) throw InvalidAnisotropy("polygon is not centrally symmetric");
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = AnisotropyKind::polygon;
  impl->label = "polygon";
  impl->vertices = std::move(vertices);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 v0 = impl->vertices[i];
    const Vec2 v1 = impl->vertices[(i + 1) % n];
    const Vec2 e = v1 - v0;
    const double c = cross(v0, v1);
    if (!(c > 0.0)) throw InvalidAnisotropy("origin is not interior to the polygon");
    impl->gauge_normals.push_back({e.y, -e.x});
    impl->gauge_offsets.push_back(c);
  }
  impl->finish();
  return Anisotropy(std::move(impl));
}

Anisotropy Anisotropy::generic(Evaluator evaluator, std::string label) {
  if (!evaluator) throw InvalidAnisotropy("generic anisotropy needs an evaluator");
  auto impl = std::make_shared<Impl>();
  impl->kind = AnisotropyKind::generic;
  impl->label = std::move(label);
  impl->fn = std::move(evaluator);
  impl->finish();
  return Anisotropy(std::move(impl));
}

AnisotropyKind Anisotropy::kind() const { return impl_->kind; }
std::string Anisotropy::label() const { return impl_->label; }
double Anisotropy::ellipse_a() const { return impl_->a; }
double Anisotropy::ellipse_b() const { return impl_->b; }
double Anisotropy::lp_q() const { return impl_->q; }
const std::vector<Vec2>& Anisotropy::vertices() const { return impl_->vertices; }

double Anisotropy::eval(Vec2 v) const { return impl_->eval(v); }
double Anisotropy::eval_dual(Vec2 v) const { return impl_->eval_dual(v); }
Vec2 Anisotropy::support_point(Vec2 nu) const {
  if (nu.x == 0.0 && nu.y == 0.0) throw DomainError("support_point: zero direction");
  return impl_->support_point(nu);
}
Vec2 Anisotropy::boundary_point(Vec2 d) const { return impl_->boundary_point(d); }
std::vector<Vec2> Anisotropy::wulff_sample(int samples) const { return impl_->sample(samples); }

WulffMeasures Anisotropy::wulff_measures(int samples) const {
  if (samples == kMeasureSamples || impl_->polygonal()) return impl_->measures;
  return impl_->compute_measures(samples);
}

BoundaryArc Anisotropy::exposed_face(Vec2 nu, double tol) const { return impl_->exposed_face(nu, tol); }
Vec2 Anisotropy::project(Vec2 x) const { return impl_->project(x); }
const WulffMeasures& Anisotropy::measures() const { return impl_->measures; }
const SymmetryFlags& Anisotropy::flags() const { return impl_->flags; }
const BoundaryChart& Anisotropy::chart() const { return impl_->chart; }
double Anisotropy::diameter() const { return impl_->diameter; }
const std::vector<Vec2>& Anisotropy::geometry_polygon() const { return impl_->poly; }

double Anisotropy::default_face_tol() const {
  return impl_->kind == AnisotropyKind::generic ? 1e-4 : 1e-7 * impl_->diameter;
}

AxiomReport Anisotropy::check_axioms(int samples, unsigned long seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> logt(std::log(0.1), std::log(10.0));
  AxiomReport r;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Vec2 v{u(rng), u(rng)};
    const Vec2 w{u(rng), u(rng)};
    const double t = std::exp(logt(rng));
    const double pv = eval(v);
    const double pw = eval(w);
    if (pv > 0.0) {
      r.homogeneity_error = std::max(r.homogeneity_error, std::abs(eval(v * t) - t * pv) / (t * pv));
      r.evenness_error = std::max(r.evenness_error, std::abs(eval(-v) - pv) / pv);
    }
    if (eval((v + w) * 0.5) > 0.5 * (pv + pw) + 1e-12 * (1.0 + pv + pw)) ++r.convexity_violations;
    const double pc = eval(unit_from_angle(kTwoPi * i / samples));
    lo = std::min(lo, pc);
    hi = std::max(hi, pc);
  }
  r.norm_bound = std::min({1.0, lo, 1.0 / hi});
  return r;
}

Vec2 nearest_point_on_polygon(const std::vector<Vec2>& vertices, Vec2 x) {
  double best = std::numeric_limits<double>::infinity();
  Vec2 out = x;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = vertices[i];
    const Vec2 e = vertices[(i + 1) % n] - a;
    const double ee = dot(e, e);
    const double t = ee > 0.0 ? std::clamp(dot(x - a, e) / ee, 0.0, 1.0) : 0.0;
    const Vec2 p = a + e * t;
    const Vec2 dlt = x - p;
    const double d2 = dot(dlt, dlt);
    if (d2 < best) {
      best = d2;
      out = p;
    }
  }
  return out;
}

}  // namespace anigraph
