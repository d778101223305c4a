#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hair/types.hpp"

namespace hair {

double intersection_area(const Rect& a, const Rect& b);

// Intersection over union of two boxes. Throws ValidationError when either
// box has non-positive area.
double iou(const Rect& a, const Rect& b);
double iou(const BBox& detection, const BBox& ground_truth);

enum class Quadrant { NW = 0, NE = 1, SW = 2, SE = 3 };

std::string to_string(Quadrant q);

// Children in NW, NE, SW, SE order. The NW child takes floor(w/2) x floor(h/2)
// so the four children tile the parent exactly. Throws ComputationError
// ("unsplittable node") when w < 2 or h < 2.
std::array<Rect, 4> split_quadrants(const Rect& r);

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct Polyline {
  std::string road_id;
  std::vector<Point> vertices;

  // Throws ValidationError on fewer than 2 vertices or repeated consecutive vertices.
  void validate() const;

  friend bool operator==(const Polyline&, const Polyline&) = default;
};

// Projective map from pixel to world coordinates, stored with m[2][2] == 1.
class Homography {
 public:
  using Matrix = std::array<std::array<double, 3>, 3>;

  Homography();  // identity
  explicit Homography(const Matrix& m, std::string unit = "");

  const Matrix& matrix() const { return m_; }
  const std::string& unit() const { return unit_; }

  // Throws ComputationError when the point maps to the plane at infinity.
  Point apply(const Point& p) const;
  Homography inverse() const;

 private:
  Matrix m_;
  std::string unit_;
};

struct GroundControlPoint {
  Point pixel;
  Point world;

  friend bool operator==(const GroundControlPoint&, const GroundControlPoint&) = default;
};

struct HomographyFit {
  Homography homography;
  double rms_residual = 0.0;  // world units, over the input pairs
};

// Normalized direct linear transform, least squares over all pairs.
HomographyFit estimate_homography(std::span<const GroundControlPoint> pairs,
                                  const std::string& unit = "");

// Parametric clip of segment a-b against r. Returns the clipped endpoints or
// nothing when the segment misses r (or only touches it in a point).
std::optional<std::pair<Point, Point>> clip_segment(Point a, Point b, const Rect& r);

double polyline_length(const Polyline& p, const Homography* h = nullptr);

// Length of the part of p inside r. With a homography, clipped endpoints are
// mapped to world space before measuring.
double clip_polyline_length(const Polyline& p, const Rect& r, const Homography* h = nullptr);

}  // namespace hair
