#pragma once

#include <optional>
#include <string>
#include <vector>

namespace hair {

// Axis-aligned rectangle in pixel space. Origin top-left, x right, y down.
struct Rect {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
  double right() const { return x + w; }
  double bottom() const { return y + h; }
  bool empty() const { return w <= 0.0 || h <= 0.0; }

  friend bool operator==(const Rect&, const Rect&) = default;
};

// A ground-truth or detected vehicle box. Detections carry a confidence score.
struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
  std::optional<double> score;

  Rect rect() const { return {x, y, w, h}; }

  friend bool operator==(const BBox&, const BBox&) = default;
};

struct ImageRecord {
  std::string image_id;
  std::vector<BBox> ground_truth;
  std::vector<BBox> detections;

  friend bool operator==(const ImageRecord&, const ImageRecord&) = default;
};

struct CameraDataset {
  std::string camera_id;
  int width = 0;
  int height = 0;
  std::vector<ImageRecord> images;

  Rect extent() const { return {0.0, 0.0, double(width), double(height)}; }
  const ImageRecord* find(const std::string& image_id) const;

  friend bool operator==(const CameraDataset&, const CameraDataset&) = default;
};

// How the r = 0 recall level contributes to RAP.
//   counted: standard interpolation, p(0) = best precision anywhere on the list.
//   zeroed:  p(0) is forced to 0.
enum class ZeroRecallMode { counted, zeroed };

// What happens to a region with neither ground truth nor detections.
enum class EmptyRegionPolicy { include, exclude };

struct RapConfig {
  std::vector<double> recall_levels = default_recall_levels();
  double a0 = 0.75;
  double iou_threshold = 0.5;
  ZeroRecallMode zero_recall_mode = ZeroRecallMode::counted;
  EmptyRegionPolicy empty_region_policy = EmptyRegionPolicy::exclude;

  // {0, 0.1, ..., 1.0}; level k is k/10 so it compares exactly with TP/n_gt.
  static std::vector<double> default_recall_levels();

  // Throws ValidationError if the levels or thresholds are malformed.
  void validate() const;

  friend bool operator==(const RapConfig&, const RapConfig&) = default;
};

std::string to_string(ZeroRecallMode mode);
std::string to_string(EmptyRegionPolicy policy);
ZeroRecallMode parse_zero_recall_mode(const std::string& text);
EmptyRegionPolicy parse_empty_region_policy(const std::string& text);

struct Violation {
  std::string image_id;
  std::string kind;  // "gt", "det" or "" for image-level problems
  int box_index = -1;
  std::string rule;

  std::string describe() const;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

ValidationReport check_dataset(const CameraDataset& dataset);

// Returns the dataset unchanged when it is well formed; otherwise throws
// ValidationError whose message lists every violation.
const CameraDataset& validate_dataset(const CameraDataset& dataset);

}  // namespace hair
