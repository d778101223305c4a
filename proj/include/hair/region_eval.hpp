#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hair/types.hpp"

namespace hair {

// Index of the region with the largest overlap with `box`; ties go to the
// lowest index. Throws ValidationError when the box overlaps no region.
std::size_t assign_to_region(const Rect& box, std::span<const Rect> regions);

// One region index per box, in box order.
std::vector<std::size_t> assign_to_regions(std::span<const BBox> boxes,
                                           std::span<const Rect> regions);

// Matching result for the boxes of one image inside one region.
struct ImageMatch {
  std::vector<bool> is_tp;        // per detection, input order
  std::vector<int> matched_gt;    // per detection, -1 when unmatched
  int n_gt = 0;
  int n_tp = 0;

  int n_fp() const { return int(is_tp.size()) - n_tp; }
  int n_fn() const { return n_gt - n_tp; }
};

// Greedy one-to-one matching. Detections are visited by descending score
// (input order on ties); each takes the unmatched ground truth of highest IoU
// (lowest index on ties) and is a true positive iff that IoU exceeds
// cfg.iou_threshold.
ImageMatch match_region_image(std::span<const BBox> ground_truth, std::span<const BBox> detections,
                              const RapConfig& cfg);

struct Outcome {
  double score = 0.0;
  bool is_tp = false;
};

// Detections of one image within one region, already matched.
struct RegionImageOutcomes {
  std::string image_id;
  std::vector<Outcome> detections;  // indexed by detection index
  int n_gt = 0;
};

RegionImageOutcomes make_region_image_outcomes(std::string image_id,
                                               std::span<const BBox> ground_truth,
                                               std::span<const BBox> detections,
                                               const RapConfig& cfg);

struct RankedOutcomes {
  std::vector<Outcome> outcomes;  // score non-increasing
  int n_gt = 0;

  int n_tp() const;
};

// Pools per-image outcomes of one region, ordered by (score desc, image_id asc,
// detection index asc).
RankedOutcomes compile_ranked(std::span<const RegionImageOutcomes> per_image);

// Interpolated precision at each configured recall level (before averaging).
std::vector<double> interpolated_precision(const RankedOutcomes& ranked, const RapConfig& cfg);

// Regional average precision. Empty when the region has neither ground truth
// nor detections.
std::optional<double> rap(const RankedOutcomes& ranked, const RapConfig& cfg);

struct PrecisionRecall {
  std::optional<double> precision;  // empty without detections
  std::optional<double> recall;     // empty without ground truth
};

PrecisionRecall precision_recall(const RankedOutcomes& ranked);

}  // namespace hair
