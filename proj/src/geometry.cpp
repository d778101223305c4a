#include "hair/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "hair/errors.hpp"

namespace hair {

double intersection_area(const Rect& a, const Rect& b) {
  const double w = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double h = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

double iou(const Rect& a, const Rect& b) {
  if (a.empty() || b.empty()) throw ValidationError("iou of a degenerate box");
  const double inter = intersection_area(a, b);
  return inter / (a.area() + b.area() - inter);
}

double iou(const BBox& detection, const BBox& ground_truth) {
  return iou(detection.rect(), ground_truth.rect());
}

std::string to_string(Quadrant q) {
  switch (q) {
    case Quadrant::NW: return "NW";
    case Quadrant::NE: return "NE";
    case Quadrant::SW: return "SW";
    case Quadrant::SE: return "SE";
  }
  return "?";
}

std::array<Rect, 4> split_quadrants(const Rect& r) {
  if (r.w < 2.0 || r.h < 2.0) throw ComputationError("unsplittable node");
  const double hw = std::floor(r.w / 2.0);
  const double hh = std::floor(r.h / 2.0);
  return {{
      {r.x, r.y, hw, hh},
      {r.x + hw, r.y, r.w - hw, hh},
      {r.x, r.y + hh, hw, r.h - hh},
      {r.x + hw, r.y + hh, r.w - hw, r.h - hh},
  }};
}

void Polyline::validate() const {
  if (vertices.size() < 2)
    throw ValidationError("road '" + road_id + "' needs at least two vertices");
  for (std::size_t i = 1; i < vertices.size(); ++i)
    if (vertices[i] == vertices[i - 1])
      throw ValidationError("road '" + road_id + "' repeats a vertex");
  for (const auto& v : vertices)
    if (!std::isfinite(v.x) || !std::isfinite(v.y))
      throw ValidationError("road '" + road_id + "' has a non-finite vertex");
}

// Liang-Barsky: shrink the parameter interval [t0, t1] against each edge.
std::optional<std::pair<Point, Point>> clip_segment(Point a, Point b, const Rect& r) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.x - r.x, r.right() - a.x, a.y - r.y, r.bottom() - a.y};
  double t0 = 0.0;
  double t1 = 1.0;
  for (int k = 0; k < 4; ++k) {
    if (p[k] == 0.0) {
      if (q[k] < 0.0) return std::nullopt;
      continue;
    }
    const double t = q[k] / p[k];
    if (p[k] < 0.0)
      t0 = std::max(t0, t);
    else
      t1 = std::min(t1, t);
  }
  if (t0 >= t1) return std::nullopt;
  return std::make_pair(Point{a.x + t0 * dx, a.y + t0 * dy}, Point{a.x + t1 * dx, a.y + t1 * dy});
}

namespace {

double distance(Point a, Point b, const Homography* h) {
  if (h) {
    a = h->apply(a);
    b = h->apply(b);
  }
  return std::hypot(b.x - a.x, b.y - a.y);
}

}  // namespace

double polyline_length(const Polyline& p, const Homography* h) {
  double total = 0.0;
  for (std::size_t i = 1; i < p.vertices.size(); ++i)
    total += distance(p.vertices[i - 1], p.vertices[i], h);
  return total;
}

double clip_polyline_length(const Polyline& p, const Rect& r, const Homography* h) {
  if (r.empty()) throw ValidationError("clip rectangle is empty");
  double total = 0.0;
  for (std::size_t i = 1; i < p.vertices.size(); ++i) {
    auto clipped = clip_segment(p.vertices[i - 1], p.vertices[i], r);
    if (clipped) total += distance(clipped->first, clipped->second, h);
  }
  return total;
}

}  // namespace hair
