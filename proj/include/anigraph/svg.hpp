#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "anigraph/vec2.hpp"

namespace anigraph {

/// Static line plot in world coordinates, fitted into a fixed canvas with y up.
class SvgPlot {
 public:
  SvgPlot(int width = 640, int height = 480) : width_(width), height_(height) {}

  void add_polyline(std::vector<Vec2> points, std::string color, double stroke = 1.5, bool closed = false);
  void set_title(std::string title) { title_ = std::move(title); }
  // Equal scale on both axes (Wulff shapes); otherwise each axis fills the canvas.
  void set_equal_aspect(bool on) { equal_aspect_ = on; }

  void write(std::ostream& out) const;
  void write_file(const std::string& path) const;

 private:
  struct Line {
    std::vector<Vec2> points;
    std::string color;
    double stroke;
    bool closed;
  };
  int width_;
  int height_;
  bool equal_aspect_ = false;
  std::string title_;
  std::vector<Line> lines_;
};

}  // namespace anigraph
