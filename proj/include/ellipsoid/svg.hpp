#pragma once

// SVG rendering of a two-dimensional solve: bounding circle, constraint lines,
// and one ellipse per visited state, colored from blue (first) to red (last).
// Drawing happens in world coordinates inside a y-flipped group, so ellipse
// attributes are the true center and semi-axes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <span>
#include <string>

#include "ellipsoid/ellipsoid.hpp"
#include "ellipsoid/errors.hpp"
#include "ellipsoid/solver.hpp"

namespace ellipsoid {

struct EllipseAxes {
  double rx = 0.0;
  double ry = 0.0;
  /// Rotation of the rx axis from +x, counter-clockwise, in degrees.
  double angle_deg = 0.0;
};

/// Semi-axes of {x : x'K^{-1}x <= 1} from the closed-form 2x2 eigendecomposition.
inline EllipseAxes principal_axes(const SymmetricMatrix& k) {
  if (k.dim() != 2) throw usage_error("principal_axes: shape must be 2x2");
  const double a = k(0, 0);
  const double b = k(0, 1);
  const double d = k(1, 1);
  if (b == 0.0) return {std::sqrt(std::max(a, 0.0)), std::sqrt(std::max(d, 0.0)), 0.0};
  const double mean = 0.5 * (a + d);
  const double r = std::hypot(0.5 * (a - d), b);
  const double theta = 0.5 * std::atan2(2.0 * b, a - d);
  return {std::sqrt(std::max(mean + r, 0.0)), std::sqrt(std::max(mean - r, 0.0)), theta * 180.0 / std::numbers::pi};
}

namespace svg_detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

inline std::string color(std::size_t i, std::size_t count) {
  const double t = count > 1 ? static_cast<double>(i) / static_cast<double>(count - 1) : 0.0;
  char buf[48];
  std::snprintf(buf, sizeof buf, "hsl(%.1f,70%%,45%%)", 240.0 * (1.0 - t));
  return buf;
}

}  // namespace svg_detail

/// Requires dim 2 and one record per state, in visiting order.
inline void emit_svg_trace(const LinearSystem& sys, std::span<const TraceRecord> records,
                           std::span<const EllipsoidState> states, std::ostream& out) {
  using svg_detail::num;
  if (sys.dim() != 2) {
    throw usage_error("emit_svg_trace: SVG output is only available for two-dimensional problems (dim = " +
                      std::to_string(sys.dim()) + ")");
  }
  if (records.size() != states.size()) throw usage_error("emit_svg_trace: records and states differ in length");

  const double r = sys.radius();
  double extent = r;
  for (const auto& s : states) {
    extent = std::max({extent, std::abs(s.center()[0]) + std::sqrt(s.shape()(0, 0)),
                       std::abs(s.center()[1]) + std::sqrt(s.shape()(1, 1))});
  }
  const double w = 1.1 * extent;
  const double stroke = w / 300.0;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(-w) << ' ' << num(-w) << ' '
      << num(2 * w) << ' ' << num(2 * w) << "\" width=\"600\" height=\"600\">\n";
  out << "<g transform=\"scale(1,-1)\" fill=\"none\" stroke-width=\"" << num(stroke) << "\">\n";
  out << "<circle class=\"bound\" cx=\"0\" cy=\"0\" r=\"" << num(r) << "\" stroke=\"black\"/>\n";

  for (std::size_t i = 0; i < sys.constraints().size(); ++i) {
    const auto& c = sys.constraints()[i];
    const double a0 = c.normal[0];
    const double a1 = c.normal[1];
    const double len2 = a0 * a0 + a1 * a1;
    const double len = std::sqrt(len2);
    const double px = a0 * c.bound / len2;
    const double py = a1 * c.bound / len2;
    const double span = 4.0 * w;
    const double dx = -a1 / len * span;
    const double dy = a0 / len * span;
    out << "<line class=\"constraint\" data-index=\"" << i << "\" x1=\"" << num(px - dx) << "\" y1=\""
        << num(py - dy) << "\" x2=\"" << num(px + dx) << "\" y2=\"" << num(py + dy)
        << "\" stroke=\"gray\" stroke-dasharray=\"" << num(2 * stroke) << "\"/>\n";
  }

  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& s = states[i];
    const EllipseAxes ax = principal_axes(s.shape());
    const std::string cx = num(s.center()[0]);
    const std::string cy = num(s.center()[1]);
    out << "<ellipse data-iter=\"" << records[i].iter << "\" cx=\"" << cx << "\" cy=\"" << cy << "\" rx=\""
        << num(ax.rx) << "\" ry=\"" << num(ax.ry) << "\"";
    if (ax.angle_deg != 0.0) out << " transform=\"rotate(" << num(ax.angle_deg) << ' ' << cx << ' ' << cy << ")\"";
    out << " stroke=\"" << svg_detail::color(i, states.size()) << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
}

}  // namespace ellipsoid
