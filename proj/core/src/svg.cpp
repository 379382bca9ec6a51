#include "funkspace/svg.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace funkspace::io {

namespace {
constexpr double kMargin = 16.0;
}

SvgWriter::SvgWriter(const Eigen::Vector2d& world_min, const Eigen::Vector2d& world_max, int size)
    : min_(world_min), size_(size) {
  const double span = std::max(world_max.x() - world_min.x(), world_max.y() - world_min.y());
  scale_ = (size - 2.0 * kMargin) / (span > 0.0 ? span : 1.0);
}

Eigen::Vector2d SvgWriter::to_canvas(const Eigen::Vector2d& p) const {
  return {kMargin + (p.x() - min_.x()) * scale_, size_ - kMargin - (p.y() - min_.y()) * scale_};
}

std::string SvgWriter::fmt(double v) const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  std::string s(buf);
  if (s == "-0.000") s = "0.000";
  return s;
}

void SvgWriter::polygon(const std::vector<Eigen::Vector2d>& pts, const std::string& cls,
                        bool closed) {
  if (pts.empty()) return;
  std::ostringstream d;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto c = to_canvas(pts[i]);
    d << (i == 0 ? "M " : " L ") << fmt(c.x()) << ' ' << fmt(c.y());
  }
  if (closed) d << " Z";
  elements_.push_back("<path class=\"" + cls + "\" d=\"" + d.str() + "\"/>");
}

void SvgWriter::circle(const Eigen::Vector2d& center, double radius, const std::string& cls) {
  const auto c = to_canvas(center);
  elements_.push_back("<circle class=\"" + cls + "\" cx=\"" + fmt(c.x()) + "\" cy=\"" +
                      fmt(c.y()) + "\" r=\"" + fmt(to_canvas_length(radius)) + "\"/>");
}

void SvgWriter::arc(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                    const Eigen::Vector2d& center, double radius, const std::string& cls) {
  const auto ca = to_canvas(a);
  const auto cb = to_canvas(b);
  const auto cc = to_canvas(center);
  const Eigen::Vector2d u = ca - cc;
  const Eigen::Vector2d v = cb - cc;
  // Canvas angles grow clockwise on screen; sweep-flag 1 follows growing angle.
  const int sweep = (u.x() * v.y() - u.y() * v.x()) > 0.0 ? 1 : 0;
  const std::string r = fmt(to_canvas_length(radius));
  elements_.push_back("<path class=\"" + cls + "\" d=\"M " + fmt(ca.x()) + ' ' + fmt(ca.y()) +
                      " A " + r + ' ' + r + " 0 0 " + std::to_string(sweep) + ' ' + fmt(cb.x()) +
                      ' ' + fmt(cb.y()) + "\"/>");
}

void SvgWriter::segment(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const std::string& cls) {
  polygon({a, b}, cls, false);
}

void SvgWriter::marker(const Eigen::Vector2d& p, const std::string& label) {
  const auto c = to_canvas(p);
  elements_.push_back("<circle class=\"point\" cx=\"" + fmt(c.x()) + "\" cy=\"" + fmt(c.y()) +
                      "\" r=\"3\"/>");
  elements_.push_back("<text x=\"" + fmt(c.x() + 5.0) + "\" y=\"" + fmt(c.y() - 5.0) + "\">" +
                      label + "</text>");
}

std::string SvgWriter::str() const {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_ << "\" height=\"" << size_
      << "\" viewBox=\"0 0 " << size_ << ' ' << size_ << "\">\n";
  out << "<style>path,circle{fill:none;stroke-width:1.5}.body{stroke:#222}"
         ".boundary{stroke:#b22}.ideal{stroke:#888}.ball{stroke:#27c}"
         ".geodesic{stroke:#2a2;stroke-dasharray:4 2}.point{fill:#000;stroke:none}"
         "text{font:11px sans-serif}</style>\n";
  for (const auto& e : elements_) out << e << '\n';
  out << "</svg>\n";
  return out.str();
}

}  // namespace funkspace::io
