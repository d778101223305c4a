#include "hair/density.hpp"

#include "hair/errors.hpp"
#include "hair/resampling.hpp"

namespace hair {

void RoadSet::validate() const {
  for (const auto& r : roads) r.validate();
  if (!gcps.empty() && gcps.size() < 4)
    throw ValidationError("ground control points need at least 4 pairs");
  if (!(unit_scale > 0.0)) throw ValidationError("unit_scale must be positive");
}

std::optional<Homography> RoadSet::homography() const {
  if (gcps.empty()) return std::nullopt;
  return estimate_homography(gcps, unit).homography;
}

double region_road_length(const RoadSet& roads, std::span<const Rect> scope) {
  const auto h = roads.homography();
  double total = 0.0;
  for (const auto& road : roads.roads)
    for (const auto& r : scope) total += clip_polyline_length(road, r, h ? &*h : nullptr);
  return total * roads.unit_scale;
}

double estimate_density(int vehicle_count, double road_length) {
  if (!(road_length > 0.0)) throw ComputationError("no road in scope");
  return double(vehicle_count) / road_length;
}

DensityReport evaluate_density(const CameraDataset& dataset,
                               std::span<const std::string> eval_image_ids, const Hair* hair,
                               const RoadSet& roads) {
  roads.validate();
  if (eval_image_ids.empty()) throw ValidationError("density evaluation needs images");

  DensityReport report;
  report.unit = roads.unit;
  const Rect extent = dataset.extent();
  report.full_length = region_road_length(roads, std::span<const Rect>(&extent, 1));
  if (!(report.full_length > 0.0)) throw ComputationError("no road in scope: full");

  std::vector<Rect> leaf_rects;
  if (hair) {
    for (const auto& leaf : hair->leaves) leaf_rects.push_back(leaf.rect);
    report.hair_length = region_road_length(roads, leaf_rects);
    if (!(*report.hair_length > 0.0)) throw ComputationError("no road in scope: hair");
  }

  std::vector<double> full_errors, hair_errors;
  for (const auto& id : eval_image_ids) {
    const ImageRecord* img = dataset.find(id);
    if (!img) throw ValidationError("unknown image_id '" + id + "'");

    DensityRow full{id, "full", int(img->ground_truth.size()), int(img->detections.size())};
    full.observed = estimate_density(full.ground_truth, report.full_length);
    full.predicted = estimate_density(full.detections, report.full_length);
    full.error = full.predicted - full.observed;
    full_errors.push_back(full.error);
    report.rows.push_back(full);

    if (hair) {
      DensityRow in{id, "hair"};
      for (const auto& b : img->ground_truth) in.ground_truth += inside_hair(b.rect(), *hair);
      for (const auto& b : img->detections) in.detections += inside_hair(b.rect(), *hair);
      in.observed = estimate_density(in.ground_truth, *report.hair_length);
      in.predicted = estimate_density(in.detections, *report.hair_length);
      in.error = in.predicted - in.observed;
      hair_errors.push_back(in.error);
      report.rows.push_back(in);
    }
  }
  report.full_rmse = rmse(full_errors);
  if (hair) report.hair_rmse = rmse(hair_errors);
  return report;
}

}  // namespace hair
