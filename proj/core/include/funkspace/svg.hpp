#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace funkspace::io {

/// Minimal SVG document builder mapping a world-space window onto a square
/// canvas (y up in world space, y down on the canvas). Numbers are printed
/// with fixed precision so output is byte-stable.
class SvgWriter {
 public:
  SvgWriter(const Eigen::Vector2d& world_min, const Eigen::Vector2d& world_max, int size = 512);

  Eigen::Vector2d to_canvas(const Eigen::Vector2d& p) const;
  double to_canvas_length(double len) const { return len * scale_; }

  void polygon(const std::vector<Eigen::Vector2d>& pts, const std::string& cls, bool closed = true);
  void polyline(const std::vector<Eigen::Vector2d>& pts, const std::string& cls) {
    polygon(pts, cls, false);
  }
  void circle(const Eigen::Vector2d& center, double radius, const std::string& cls);
  /// Minor arc from a to b of the circle with the given center and radius.
  void arc(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& center,
           double radius, const std::string& cls);
  void segment(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const std::string& cls);
  void marker(const Eigen::Vector2d& p, const std::string& label);

  std::string str() const;

 private:
  std::string fmt(double v) const;

  Eigen::Vector2d min_;
  double scale_ = 1.0;
  int size_ = 512;
  std::vector<std::string> elements_;
};

}  // namespace funkspace::io
