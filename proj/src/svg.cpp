#include "anigraph/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

#include "anigraph/error.hpp"

namespace anigraph {

void SvgPlot::add_polyline(std::vector<Vec2> points, std::string color, double stroke, bool closed) {
  lines_.push_back({std::move(points), std::move(color), stroke, closed});
}

void SvgPlot::write(std::ostream& out) const {
  double x0 = std::numeric_limits<double>::infinity();
  double y0 = x0;
  double x1 = -x0;
  double y1 = -x0;
  for (const Line& l : lines_) {
    for (const Vec2& p : l.points) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
  }
  if (!(x1 >= x0)) {
    x0 = y0 = 0.0;
    x1 = y1 = 1.0;
  }
  // widen flat extents so the scale stays finite
  if (x1 - x0 < 1e-12) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  if (y1 - y0 < 1e-12) {
    y0 -= 0.5;
    y1 += 0.5;
  }

  const double margin = 30.0;
  double sx = (width_ - 2 * margin) / (x1 - x0);
  double sy = (height_ - 2 * margin) / (y1 - y0);
  if (equal_aspect_) sx = sy = std::min(sx, sy);
  auto map = [&](Vec2 p) { return Vec2{margin + (p.x - x0) * sx, height_ - margin - (p.y - y0) * sy}; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\"" << height_
      << "\" viewBox=\"0 0 " << width_ << ' ' << height_ << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title_.empty()) out << "<text x=\"" << margin << "\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">" << title_ << "</text>\n";
  char buf[64];
  for (const Line& l : lines_) {
    if (l.points.empty()) continue;
    out << "<path fill=\"none\" stroke=\"" << l.color << "\" stroke-width=\"" << l.stroke << "\" d=\"";
    for (std::size_t i = 0; i < l.points.size(); ++i) {
      const Vec2 q = map(l.points[i]);
      std::snprintf(buf, sizeof buf, "%c%.2f %.2f", i == 0 ? 'M' : 'L', q.x, q.y);
      out << buf;
    }
    if (l.closed) out << 'Z';
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

void SvgPlot::write_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IngestionError("cannot write " + path);
  write(out);
}

}  // namespace anigraph
