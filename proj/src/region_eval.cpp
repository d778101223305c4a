#include "hair/region_eval.hpp"

#include <algorithm>
#include <numeric>

#include "hair/errors.hpp"
#include "hair/geometry.hpp"

namespace hair {

namespace {

// Recall values are exact rationals; the slack only absorbs rounding in
// user-supplied recall levels such as 0.3.
constexpr double kRecallSlack = 1e-12;

}  // namespace

std::size_t assign_to_region(const Rect& box, std::span<const Rect> regions) {
  std::size_t best = regions.size();
  double best_area = 0.0;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const double a = intersection_area(box, regions[i]);
    if (a > best_area) {
      best_area = a;
      best = i;
    }
  }
  if (best == regions.size()) throw ValidationError("box overlaps no region");
  return best;
}

std::vector<std::size_t> assign_to_regions(std::span<const BBox> boxes,
                                           std::span<const Rect> regions) {
  if (regions.empty()) throw ValidationError("no regions to assign to");
  std::vector<std::size_t> out;
  out.reserve(boxes.size());
  for (const auto& b : boxes) out.push_back(assign_to_region(b.rect(), regions));
  return out;
}

ImageMatch match_region_image(std::span<const BBox> ground_truth, std::span<const BBox> detections,
                              const RapConfig& cfg) {
  ImageMatch m;
  m.n_gt = int(ground_truth.size());
  m.is_tp.assign(detections.size(), false);
  m.matched_gt.assign(detections.size(), -1);

  std::vector<std::size_t> order(detections.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detections[a].score.value_or(0.0) > detections[b].score.value_or(0.0);
  });

  std::vector<bool> consumed(ground_truth.size(), false);
  for (std::size_t d : order) {
    int best = -1;
    double best_iou = -1.0;
    for (std::size_t g = 0; g < ground_truth.size(); ++g) {
      if (consumed[g]) continue;
      const double v = iou(detections[d], ground_truth[g]);
      if (v > best_iou) {
        best_iou = v;
        best = int(g);
      }
    }
    if (best >= 0 && best_iou > cfg.iou_threshold) {
      consumed[std::size_t(best)] = true;
      m.is_tp[d] = true;
      m.matched_gt[d] = best;
      ++m.n_tp;
    }
  }
  return m;
}

RegionImageOutcomes make_region_image_outcomes(std::string image_id,
                                               std::span<const BBox> ground_truth,
                                               std::span<const BBox> detections,
                                               const RapConfig& cfg) {
  const ImageMatch m = match_region_image(ground_truth, detections, cfg);
  RegionImageOutcomes out;
  out.image_id = std::move(image_id);
  out.n_gt = m.n_gt;
  out.detections.reserve(detections.size());
  for (std::size_t d = 0; d < detections.size(); ++d)
    out.detections.push_back({detections[d].score.value_or(0.0), m.is_tp[d]});
  return out;
}

int RankedOutcomes::n_tp() const {
  return int(std::count_if(outcomes.begin(), outcomes.end(), [](const Outcome& o) { return o.is_tp; }));
}

RankedOutcomes compile_ranked(std::span<const RegionImageOutcomes> per_image) {
  struct Key {
    double score;
    const std::string* image_id;
    std::size_t index;
    bool is_tp;
  };
  std::vector<Key> keys;
  RankedOutcomes ranked;
  for (const auto& img : per_image) {
    ranked.n_gt += img.n_gt;
    for (std::size_t i = 0; i < img.detections.size(); ++i)
      keys.push_back({img.detections[i].score, &img.image_id, i, img.detections[i].is_tp});
  }
  std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
    if (a.score != b.score) return a.score > b.score;
    if (*a.image_id != *b.image_id) return *a.image_id < *b.image_id;
    return a.index < b.index;
  });
  ranked.outcomes.reserve(keys.size());
  for (const auto& k : keys) ranked.outcomes.push_back({k.score, k.is_tp});
  return ranked;
}

std::vector<double> interpolated_precision(const RankedOutcomes& ranked, const RapConfig& cfg) {
  const auto& levels = cfg.recall_levels;
  std::vector<double> best(levels.size(), 0.0);
  if (ranked.n_gt > 0) {
    int tp = 0;
    for (std::size_t i = 0; i < ranked.outcomes.size(); ++i) {
      if (ranked.outcomes[i].is_tp) ++tp;
      const double precision = double(tp) / double(i + 1);
      const double recall = double(tp) / double(ranked.n_gt);
      for (std::size_t k = 0; k < levels.size(); ++k)
        if (recall >= levels[k] - kRecallSlack) best[k] = std::max(best[k], precision);
    }
  }
  if (cfg.zero_recall_mode == ZeroRecallMode::zeroed && !best.empty()) best.front() = 0.0;
  return best;
}

std::optional<double> rap(const RankedOutcomes& ranked, const RapConfig& cfg) {
  if (ranked.n_gt == 0 && ranked.outcomes.empty()) return std::nullopt;
  if (ranked.n_gt == 0) return 0.0;
  const auto best = interpolated_precision(ranked, cfg);
  double sum = 0.0;
  for (double p : best) sum += p;
  return sum / double(best.size());
}

PrecisionRecall precision_recall(const RankedOutcomes& ranked) {
  PrecisionRecall pr;
  const int tp = ranked.n_tp();
  if (!ranked.outcomes.empty()) pr.precision = double(tp) / double(ranked.outcomes.size());
  if (ranked.n_gt > 0) pr.recall = double(tp) / double(ranked.n_gt);
  return pr;
}

}  // namespace hair
