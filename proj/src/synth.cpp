#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hair/errors.hpp"
#include "hair/rng.hpp"
#include "hair/synth_oracle.hpp"

namespace hair {

double eval_curve(std::span<const CurvePoint> curve, double size) {
  if (curve.empty()) return 0.0;
  std::size_t i = 0;
  while (i < curve.size() && curve[i].size <= size) ++i;
  if (i == 0) return curve.front().value;
  if (i == curve.size()) return curve.back().value;
  const auto& a = curve[i - 1];
  const auto& b = curve[i];
  const double t = (size - a.size) / (b.size - a.size);
  return a.value + t * (b.value - a.value);
}

namespace {

void check_curve(const std::vector<CurvePoint>& curve, const char* name, bool probability) {
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (i && curve[i].size < curve[i - 1].size)
      throw ValidationError(std::string(name) + " knots must be sorted by size");
    if (probability && !(curve[i].value >= 0.0 && curve[i].value <= 1.0))
      throw ValidationError(std::string(name) + " values must lie in [0, 1]");
  }
}

}  // namespace

void SynthSpec::validate() const {
  if (width < 2 || height < 2) throw ValidationError("synthetic extent must be at least 2x2");
  road.validate();
  for (const auto& v : road.vertices)
    if (v.x < 0 || v.y < 0 || v.x > width || v.y > height)
      throw ValidationError("synthetic road must lie inside the extent");
  if (!(size_far > 0.0) || size_near < size_far)
    throw ValidationError("need size_near >= size_far > 0");
  if (!(aspect > 0.0)) throw ValidationError("aspect must be positive");
  if (vehicles_per_image < 0.0 || fp_rate < 0.0 || localization_jitter < 0.0 ||
      road_halfwidth < 0.0 || score_noise < 0.0)
    throw ValidationError("rates, jitter, spread and noise must be non-negative");
  if (!(fp_score_max >= 0.0 && fp_score_max <= 1.0))
    throw ValidationError("fp_score_max must lie in [0, 1]");
  check_curve(detect_prob_curve, "detect_prob_curve", true);
  check_curve(score_model, "score_model", true);
}

double SynthSpec::size_at(double y) const {
  const double t = std::clamp(y / double(height), 0.0, 1.0);
  return size_far + (size_near - size_far) * t;
}

SynthSpec default_degraded_spec() {
  SynthSpec s;
  s.width = 704;
  s.height = 480;
  s.road = {"main", {{250.0, 479.0}, {330.0, 240.0}, {370.0, 0.0}}};
  s.road_halfwidth = 110.0;
  s.vehicles_per_image = 8.0;
  s.size_near = 90.0;
  s.size_far = 10.0;
  s.aspect = 0.75;
  s.detect_prob_curve = {{12.0, 0.05}, {25.0, 0.4}, {40.0, 0.85}, {60.0, 0.97}};
  s.fp_rate = 0.3;
  s.fp_score_max = 0.5;
  s.localization_jitter = 3.0;
  s.score_model = {{12.0, 0.35}, {40.0, 0.7}, {90.0, 0.95}};
  s.score_noise = 0.05;
  s.seed = 20201;
  return s;
}

double max_safe_jitter(double w, double h) {
  return 0.999 * std::min(w, h) * (1.0 - std::sqrt(0.5)) / 2.0;
}

namespace {

Point point_at_arclength(const Polyline& road, double s) {
  for (std::size_t i = 1; i < road.vertices.size(); ++i) {
    const Point a = road.vertices[i - 1];
    const Point b = road.vertices[i];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (s <= len || i + 1 == road.vertices.size()) {
      const double t = std::clamp(s / len, 0.0, 1.0);
      return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
    }
    s -= len;
  }
  return road.vertices.back();
}

BBox box_around(double cx, double cy, double w, double h) { return {cx - w / 2, cy - h / 2, w, h, {}}; }

}  // namespace

CameraDataset generate_camera(const SynthSpec& spec, int n_images,
                              std::vector<std::vector<int>>* source_gt) {
  spec.validate();
  if (n_images < 0) throw ValidationError("image count must be non-negative");
  CameraDataset d;
  d.camera_id = "synthetic";
  d.width = spec.width;
  d.height = spec.height;
  if (source_gt) source_gt->assign(std::size_t(n_images), {});

  const double road_len = polyline_length(spec.road);
  const double W = spec.width;
  const double H = spec.height;
  for (int n = 0; n < n_images; ++n) {
    Rng rng(derive_seed(spec.seed, {std::uint64_t(n)}));
    ImageRecord img;
    char id[32];
    std::snprintf(id, sizeof id, "img_%04d", n);
    img.image_id = id;

    const int vehicles = rng.poisson(spec.vehicles_per_image);
    for (int v = 0; v < vehicles; ++v) {
      const Point p = point_at_arclength(spec.road, rng.uniform(0.0, road_len));
      const double w0 = spec.size_at(p.y);
      const double offset = rng.uniform(-1.0, 1.0) * spec.road_halfwidth * (w0 / spec.size_near);
      const double cx = std::clamp(p.x + offset, 0.0, W);
      const double cy = p.y;
      const double w = spec.size_at(cy);
      const double h = w * spec.aspect;
      img.ground_truth.push_back(box_around(cx, cy, w, h));
    }

    std::vector<int> sources;
    for (std::size_t g = 0; g < img.ground_truth.size(); ++g) {
      const BBox& gt = img.ground_truth[g];
      const double p = eval_curve(spec.detect_prob_curve, gt.w);
      if (!(rng.uniform() < p)) continue;
      const double j = std::min(spec.localization_jitter, max_safe_jitter(gt.w, gt.h));
      BBox det = gt;
      det.x += rng.uniform(-j, j);
      det.y += rng.uniform(-j, j);
      const double mean = eval_curve(spec.score_model, gt.w);
      det.score = std::clamp(mean + spec.score_noise * rng.normal(), 0.0, 1.0);
      img.detections.push_back(det);
      sources.push_back(int(g));
    }

    const int spurious = rng.poisson(spec.fp_rate);
    for (int f = 0; f < spurious; ++f) {
      const double cx = rng.uniform(0.0, W);
      const double cy = rng.uniform(0.0, H);
      const double w = spec.size_at(cy);
      BBox det = box_around(cx, cy, w, w * spec.aspect);
      det.score = rng.uniform(0.0, spec.fp_score_max);
      img.detections.push_back(det);
      sources.push_back(-1);
    }

    if (source_gt) (*source_gt)[std::size_t(n)] = std::move(sources);
    d.images.push_back(std::move(img));
  }
  return d;
}

}  // namespace hair
