#include <cmath>
#include <set>
#include <sstream>

#include "hair/errors.hpp"
#include "hair/geometry.hpp"
#include "hair/types.hpp"

namespace hair {

const ImageRecord* CameraDataset::find(const std::string& image_id) const {
  for (const auto& image : images)
    if (image.image_id == image_id) return &image;
  return nullptr;
}

std::vector<double> RapConfig::default_recall_levels() {
  std::vector<double> levels;
  for (int k = 0; k <= 10; ++k) levels.push_back(double(k) / 10.0);
  return levels;
}

void RapConfig::validate() const {
  if (recall_levels.size() < 2) throw ValidationError("recall_levels needs at least two entries");
  if (recall_levels.front() != 0.0) throw ValidationError("recall_levels must start at 0");
  if (recall_levels.back() != 1.0) throw ValidationError("recall_levels must end at 1");
  for (std::size_t k = 1; k < recall_levels.size(); ++k)
    if (recall_levels[k] < recall_levels[k - 1])
      throw ValidationError("recall_levels must be non-decreasing");
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0))
    throw ValidationError("iou_threshold must lie in (0, 1)");
  if (!(a0 >= 0.0 && a0 < 1.0)) throw ValidationError("a0 must lie in [0, 1)");
}

std::string to_string(ZeroRecallMode mode) {
  return mode == ZeroRecallMode::counted ? "counted" : "zeroed";
}

std::string to_string(EmptyRegionPolicy policy) {
  return policy == EmptyRegionPolicy::include ? "include" : "exclude";
}

ZeroRecallMode parse_zero_recall_mode(const std::string& text) {
  if (text == "counted") return ZeroRecallMode::counted;
  if (text == "zeroed") return ZeroRecallMode::zeroed;
  throw ValidationError("unknown zero-recall mode '" + text + "' (expected counted|zeroed)");
}

EmptyRegionPolicy parse_empty_region_policy(const std::string& text) {
  if (text == "include") return EmptyRegionPolicy::include;
  if (text == "exclude") return EmptyRegionPolicy::exclude;
  throw ValidationError("unknown empty-region policy '" + text + "' (expected include|exclude)");
}

std::string Violation::describe() const {
  std::ostringstream out;
  out << "image '" << image_id << "'";
  if (box_index >= 0) out << " " << kind << "[" << box_index << "]";
  out << ": " << rule;
  return out.str();
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  out << violations.size() << " violation(s)";
  for (const auto& v : violations) out << "\n  " << v.describe();
  return out.str();
}

namespace {

void check_box(const BBox& box, const Rect& extent, const std::string& image_id,
               const std::string& kind, int index, std::vector<Violation>& out) {
  const bool finite = std::isfinite(box.x) && std::isfinite(box.y) && std::isfinite(box.w) &&
                      std::isfinite(box.h);
  if (!finite || box.w <= 0.0 || box.h <= 0.0) {
    out.push_back({image_id, kind, index, "degenerate box"});
    return;
  }
  if (intersection_area(box.rect(), extent) <= 0.0)
    out.push_back({image_id, kind, index, "outside extent"});
  if (kind == "det") {
    if (!box.score)
      out.push_back({image_id, kind, index, "detection missing score"});
    else if (!(*box.score >= 0.0 && *box.score <= 1.0))
      out.push_back({image_id, kind, index, "score outside [0, 1]"});
  } else if (box.score) {
    out.push_back({image_id, kind, index, "ground truth carries a score"});
  }
}

}  // namespace

ValidationReport check_dataset(const CameraDataset& dataset) {
  ValidationReport report;
  if (dataset.width <= 0 || dataset.height <= 0) {
    report.violations.push_back({"", "", -1, "camera extent must be positive"});
    return report;
  }
  const Rect extent = dataset.extent();
  std::set<std::string> seen;
  for (const auto& image : dataset.images) {
    if (!seen.insert(image.image_id).second)
      report.violations.push_back({image.image_id, "", -1, "duplicate image_id"});
    for (std::size_t i = 0; i < image.ground_truth.size(); ++i)
      check_box(image.ground_truth[i], extent, image.image_id, "gt", int(i), report.violations);
    for (std::size_t i = 0; i < image.detections.size(); ++i)
      check_box(image.detections[i], extent, image.image_id, "det", int(i), report.violations);
  }
  return report;
}

const CameraDataset& validate_dataset(const CameraDataset& dataset) {
  auto report = check_dataset(dataset);
  if (!report.ok()) throw ValidationError("invalid dataset: " + report.summary());
  return dataset;
}

}  // namespace hair
