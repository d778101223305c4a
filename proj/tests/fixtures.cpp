#include "fixtures.hpp"

#include <cmath>

#include "hair/rng.hpp"

namespace hair::testing {

BBox gt(double x, double y, double w, double h) { return {x, y, w, h, {}}; }
BBox det(double x, double y, double w, double h, double score) { return {x, y, w, h, score}; }

CameraDataset three_image_region() {
  CameraDataset d;
  d.camera_id = "region-example";
  d.width = 704;
  d.height = 480;

  ImageRecord a{"a", {}, {}};
  a.ground_truth = {gt(100, 300, 60, 45), gt(400, 320, 60, 45), gt(300, 100, 20, 15), gt(500, 80, 20, 15)};
  a.detections = {det(100, 300, 60, 45, 0.95), det(400, 320, 60, 45, 0.85)};

  ImageRecord b{"b", {}, {}};
  b.ground_truth = {gt(200, 350, 60, 45), gt(450, 260, 50, 38), gt(150, 60, 20, 15)};
  b.detections = {det(200, 350, 60, 45, 0.90), det(450, 260, 50, 38, 0.80), det(600, 150, 20, 15, 0.65)};

  ImageRecord c{"c", {}, {}};
  c.ground_truth = {gt(120, 280, 55, 40), gt(350, 150, 30, 22), gt(420, 40, 18, 14)};
  c.detections = {det(120, 280, 55, 40, 0.75), det(350, 150, 30, 22, 0.70)};

  d.images = {a, b, c};
  return d;
}

Hair lower_half_hair(const CameraDataset& d) {
  Hair h;
  h.camera_id = d.camera_id;
  h.width = d.width;
  h.height = d.height;
  h.max_depth = 1;
  h.identification_image_ids = {"identification-only"};
  h.leaves = {{{Quadrant::SW}, rect_for_path(d.extent(), {Quadrant::SW}), 1.0},
              {{Quadrant::SE}, rect_for_path(d.extent(), {Quadrant::SE}), 1.0}};
  return h;
}

CameraDataset bottom_half_perfect() {
  CameraDataset d;
  d.camera_id = "bottom-half";
  d.width = 400;
  d.height = 300;
  for (int i = 0; i < 4; ++i) {
    ImageRecord img;
    img.image_id = "bh_" + std::to_string(i);
    const double s = 4.0 * i;
    // Top half: missed.
    img.ground_truth.push_back(gt(40 + s, 30, 30, 20));
    img.ground_truth.push_back(gt(250 + s, 60, 30, 20));
    // Bottom half: detected exactly.
    const BBox near_left = gt(60 + s, 200, 60, 45);
    const BBox near_right = gt(260 + s, 220, 60, 45);
    img.ground_truth.push_back(near_left);
    img.ground_truth.push_back(near_right);
    img.detections.push_back(det(near_left.x, near_left.y, near_left.w, near_left.h, 0.9 - 0.01 * i));
    img.detections.push_back(det(near_right.x, near_right.y, near_right.w, near_right.h, 0.8 - 0.01 * i));
    d.images.push_back(img);
  }
  return d;
}

CameraDataset three_quadrant_camera() {
  CameraDataset d;
  d.camera_id = "three-quadrant";
  d.width = 800;
  d.height = 800;
  for (int i = 0; i < 2; ++i) {
    ImageRecord img;
    img.image_id = "q_" + std::to_string(i);
    const double s = 5.0 * i;
    double score = 0.99 - 0.1 * i;
    auto hit = [&](double x, double y) {
      img.ground_truth.push_back(gt(x + s, y + s, 40, 30));
      img.detections.push_back(det(x + s, y + s, 40, 30, score));
      score -= 0.01;
    };
    auto miss = [&](double x, double y) { img.ground_truth.push_back(gt(x + s, y + s, 30, 20)); };

    hit(500, 100);  // NE
    hit(650, 250);
    hit(100, 500);  // SW
    hit(250, 650);
    hit(500, 500);  // SE
    hit(650, 650);

    // NW.NW, NW.NE, NW.SW: one perfect depth-3 cell and three missed ones.
    for (auto [ox, oy] : {std::pair{0.0, 0.0}, std::pair{200.0, 0.0}, std::pair{0.0, 200.0}}) {
      hit(ox + 30, oy + 30);
      miss(ox + 130, oy + 30);
      miss(ox + 30, oy + 130);
      miss(ox + 130, oy + 130);
    }
    // NW.SE: everything missed.
    miss(230, 230);
    miss(330, 230);
    miss(230, 330);
    miss(330, 330);
    d.images.push_back(img);
  }
  return d;
}

SynthSpec random_spec(std::uint64_t seed) {
  Rng rng(derive_seed(seed, {0x5eed}));
  SynthSpec s;
  s.width = 32 + int(rng.below(400));
  s.height = 32 + int(rng.below(300));
  const int vertices = 2 + int(rng.below(3));
  for (int i = 0; i < vertices; ++i) {
    const double y = s.height * (1.0 - double(i) / double(vertices - 1));
    s.road.vertices.push_back({rng.uniform(0.1, 0.9) * s.width, y});
  }
  s.road.road_id = "r";
  s.road_halfwidth = rng.uniform(0.0, 0.4) * s.width;
  s.vehicles_per_image = rng.uniform(0.0, 8.0);
  s.size_far = rng.uniform(3.0, 20.0);
  s.size_near = s.size_far + rng.uniform(0.0, 0.3 * std::min(s.width, s.height));
  s.aspect = rng.uniform(0.5, 1.2);
  const double mid = rng.uniform(s.size_far, s.size_near + 1.0);
  s.detect_prob_curve = {{s.size_far, rng.uniform(0.0, 0.5)}, {mid, rng.uniform(0.3, 1.0)},
                         {s.size_near + 1.0, rng.uniform(0.6, 1.0)}};
  s.fp_rate = rng.uniform(0.0, 1.5);
  s.fp_score_max = rng.uniform(0.1, 1.0);
  s.localization_jitter = rng.uniform(0.0, 5.0);
  s.score_model = {{s.size_far, rng.uniform(0.1, 0.6)}, {s.size_near, rng.uniform(0.5, 1.0)}};
  s.score_noise = rng.uniform(0.0, 0.1);
  s.seed = seed;
  return s;
}

CameraDataset random_camera(std::uint64_t seed, int n_images, bool quantize_scores) {
  CameraDataset d = generate_camera(random_spec(seed), n_images);
  if (quantize_scores)
    for (auto& img : d.images)
      for (auto& b : img.detections) b.score = std::round(*b.score * 5.0) / 5.0;
  return d;
}

std::vector<std::string> all_ids(const CameraDataset& d) {
  std::vector<std::string> ids;
  for (const auto& img : d.images) ids.push_back(img.image_id);
  return ids;
}

}  // namespace hair::testing
