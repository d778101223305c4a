#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hair/geometry.hpp"
#include "hair/quadtree.hpp"
#include "hair/types.hpp"

namespace hair {

// Road centerlines of one camera. Lengths are measured in pixels, or in world
// units when ground control points are given, then multiplied by unit_scale;
// `unit` labels the resulting length unit.
struct RoadSet {
  std::vector<Polyline> roads;
  std::vector<GroundControlPoint> gcps;  // empty, or at least 4 pairs
  std::string unit = "px";
  double unit_scale = 1.0;

  void validate() const;
  std::optional<Homography> homography() const;

  friend bool operator==(const RoadSet&, const RoadSet&) = default;
};

double region_road_length(const RoadSet& roads, std::span<const Rect> scope);

// Vehicles per unit length. Throws ComputationError("no road in scope") when
// the length is not positive.
double estimate_density(int vehicle_count, double road_length);

struct DensityRow {
  std::string image_id;
  std::string scope;  // "full" or "hair"
  int ground_truth = 0;
  int detections = 0;
  double observed = 0.0;
  double predicted = 0.0;
  double error = 0.0;  // predicted - observed
};

struct DensityReport {
  std::string unit;  // density is vehicles per `unit`
  double full_length = 0.0;
  std::optional<double> hair_length;
  std::vector<DensityRow> rows;
  double full_rmse = 0.0;
  std::optional<double> hair_rmse;
};

// Observed density counts ground truth, predicted density counts detections.
// In the HAIR scope both counts use majority-overlap membership (inside_hair).
DensityReport evaluate_density(const CameraDataset& dataset,
                               std::span<const std::string> eval_image_ids, const Hair* hair,
                               const RoadSet& roads);

}  // namespace hair
