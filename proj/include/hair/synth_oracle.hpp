#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hair/geometry.hpp"
#include "hair/quadtree.hpp"
#include "hair/types.hpp"

namespace hair {

struct CurvePoint {
  double size = 0.0;
  double value = 0.0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

// Piecewise-linear in box size, constant beyond the end knots. Two knots at
// the same size make a step; the later knot applies from that size upward.
double eval_curve(std::span<const CurvePoint> curve, double size);

struct SynthSpec {
  int width = 704;
  int height = 480;
  Polyline road;
  double road_halfwidth = 0.0;  // lateral spread at size_near, scaled with box size
  double vehicles_per_image = 6.0;
  double size_near = 80.0;      // box width at the bottom edge
  double size_far = 12.0;       // box width at the top edge
  double aspect = 0.75;         // box height / width
  std::vector<CurvePoint> detect_prob_curve;
  double fp_rate = 0.0;
  double fp_score_max = 0.5;
  double localization_jitter = 0.0;
  std::vector<CurvePoint> score_model;
  double score_noise = 0.0;
  std::uint64_t seed = 0;

  // Throws ValidationError on broken invariants.
  void validate() const;
  double size_at(double y) const;

  friend bool operator==(const SynthSpec&, const SynthSpec&) = default;
};

// Distance-degraded spec on a 704x480 frame: boxes under ~25 px are found
// about 40% of the time, boxes over ~40 px above 85%.
SynthSpec default_degraded_spec();

// Largest per-axis shift that keeps IoU above 0.5 for a w x h box.
double max_safe_jitter(double w, double h);

// Deterministic in spec.seed. When `source_gt` is given it receives, per image
// and detection, the index of the ground truth the detection was derived from
// (-1 for spurious detections).
CameraDataset generate_camera(const SynthSpec& spec, int n_images,
                              std::vector<std::vector<int>>* source_gt = nullptr);

// Exhaustive, non-recursive HAIR: enumerates every node down to max_depth,
// evaluates each one from scratch, and keeps the passing nodes none of whose
// ancestors pass. Shares only geometry primitives with identify_hair.
Hair brute_force_hair(const CameraDataset& dataset, std::span<const std::string> image_ids,
                      const RapConfig& cfg, int max_depth);

}  // namespace hair
