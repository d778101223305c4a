#include "doctest.h"

#include <algorithm>

#include "fixtures.hpp"
#include "hair/errors.hpp"
#include "hair/geometry.hpp"
#include "hair/region_eval.hpp"
#include "hair/rng.hpp"

using namespace hair;
using hair::testing::det;
using hair::testing::gt;

namespace {

// Hand-rolled 11-point interpolation: for each level, scan every prefix of the
// ranked list and keep the best precision among prefixes reaching the level.
// Recall is compared in integers: tp / n_gt >= k / 10  <=>  10 tp >= k n_gt.
double eleven_point(const std::vector<bool>& ranked_tp, int n_gt, bool zeroed) {
  double sum = 0;
  for (int k = 0; k <= 10; ++k) {
    if (k == 0 && zeroed) continue;
    double best = 0;
    int tp = 0;
    for (std::size_t i = 0; i < ranked_tp.size(); ++i) {
      tp += ranked_tp[i];
      if (10 * tp >= k * n_gt) best = std::max(best, double(tp) / double(i + 1));
    }
    sum += best;
  }
  return sum / 11.0;
}

RankedOutcomes ranked_from(const std::vector<bool>& tps, int n_gt) {
  RankedOutcomes r;
  r.n_gt = n_gt;
  for (std::size_t i = 0; i < tps.size(); ++i) r.outcomes.push_back({1.0 - 0.01 * double(i), tps[i]});
  return r;
}

RapConfig mode(ZeroRecallMode m) {
  RapConfig cfg;
  cfg.zero_recall_mode = m;
  return cfg;
}

}  // namespace

TEST_CASE("assign_to_regions picks the largest overlap, lowest index on ties") {
  const auto q = split_quadrants({0, 0, 100, 100});
  const std::vector<Rect> regions(q.begin(), q.end());
  const std::vector<BBox> boxes{gt(10, 10, 5, 5), gt(45, 45, 10, 10), gt(40, 48, 10, 10)};
  // Third box: NW=20, NE=0, SW=80, SE=0 -> SW.
  CHECK(intersection_area(boxes[2].rect(), regions[0]) == 20.0);
  CHECK(intersection_area(boxes[2].rect(), regions[2]) == 80.0);
  const auto a = assign_to_regions(boxes, regions);
  CHECK(a == std::vector<std::size_t>{0, 0, 2});
  CHECK_THROWS_AS(assign_to_region(Rect{200, 200, 5, 5}, regions), ValidationError);
}

TEST_CASE("match_region_image examples") {
  RapConfig cfg;
  const std::vector<BBox> truth{gt(0, 0, 10, 10)};
  const std::vector<BBox> near{det(1, 1, 10, 10, 0.9)};
  CHECK(iou(near[0], truth[0]) == doctest::Approx(81.0 / 119.0));
  auto m = match_region_image(truth, near, cfg);
  CHECK(m.is_tp == std::vector<bool>{true});
  CHECK(m.n_fn() == 0);

  const std::vector<BBox> far{det(8, 8, 10, 10, 0.9)};
  CHECK(iou(far[0], truth[0]) == doctest::Approx(4.0 / 196.0));
  m = match_region_image(truth, far, cfg);
  CHECK(m.is_tp == std::vector<bool>{false});
  CHECK(m.n_fp() == 1);
  CHECK(m.n_fn() == 1);

  const std::vector<BBox> three{gt(0, 0, 5, 5), gt(10, 0, 5, 5), gt(20, 0, 5, 5)};
  m = match_region_image(three, {}, cfg);
  CHECK(m.n_tp == 0);
  CHECK(m.n_fp() == 0);
  CHECK(m.n_fn() == 3);
}

TEST_CASE("IoU of exactly the threshold is a false positive") {
  RapConfig cfg;
  const std::vector<BBox> truth{gt(0, 0, 12, 10)};
  // Overlap 80, union 160.
  const std::vector<BBox> half{det(4, 0, 12, 10, 0.5)};
  REQUIRE(iou(half[0], truth[0]) == 0.5);
  CHECK(match_region_image(truth, half, cfg).n_tp == 0);
}

TEST_CASE("higher-score detection claims the shared ground truth") {
  RapConfig cfg;
  const std::vector<BBox> truth{gt(0, 0, 10, 10)};
  const std::vector<BBox> dets{det(1, 0, 10, 10, 0.3), det(0, 1, 10, 10, 0.8)};
  const auto m = match_region_image(truth, dets, cfg);
  CHECK(m.is_tp == std::vector<bool>{false, true});
  CHECK(m.matched_gt == std::vector<int>{-1, 0});
}

TEST_CASE("compile_ranked ordering contract") {
  RegionImageOutcomes one{"x", {{0.9, true}, {0.8, true}}, 2};
  auto r = compile_ranked(std::span(&one, 1));
  REQUIRE(r.outcomes.size() == 2);
  CHECK(r.outcomes[0].score == 0.9);
  CHECK(r.n_gt == 2);

  std::vector<RegionImageOutcomes> two{{"p", {{0.9, false}}, 1}, {"q", {{0.95, true}}, 1}};
  r = compile_ranked(two);
  CHECK(r.outcomes[0].score == 0.95);
  CHECK(r.outcomes[1].score == 0.9);
  CHECK(r.n_gt == 2);

  std::vector<RegionImageOutcomes> tie{{"b", {{0.8, false}}, 0}, {"a", {{0.8, true}}, 1}};
  r = compile_ranked(tie);
  CHECK(r.outcomes[0].is_tp);  // image "a" first
  CHECK_FALSE(r.outcomes[1].is_tp);
}

TEST_CASE("RAP of the three-image region under both conventions") {
  const std::vector<bool> ranks{true, true, true, true, true, true, false};
  CHECK(eleven_point(ranks, 10, true) == doctest::Approx(6.0 / 11.0));
  CHECK(eleven_point(ranks, 10, false) == doctest::Approx(7.0 / 11.0));

  const auto ranked = ranked_from(ranks, 10);
  CHECK(*rap(ranked, mode(ZeroRecallMode::zeroed)) == doctest::Approx(6.0 / 11.0).epsilon(1e-15));
  CHECK(*rap(ranked, mode(ZeroRecallMode::counted)) == doctest::Approx(7.0 / 11.0).epsilon(1e-15));

  // Same result through matching on the reconstructed images.
  const auto d = testing::three_image_region();
  std::vector<RegionImageOutcomes> per_image;
  for (const auto& img : d.images)
    per_image.push_back(make_region_image_outcomes(img.image_id, img.ground_truth, img.detections, RapConfig{}));
  const auto compiled = compile_ranked(per_image);
  CHECK(compiled.n_gt == 10);
  std::vector<bool> order;
  for (const auto& o : compiled.outcomes) order.push_back(o.is_tp);
  CHECK(order == ranks);
}

TEST_CASE("RAP edge cases") {
  const RapConfig counted = mode(ZeroRecallMode::counted);
  CHECK(*rap(ranked_from({true, true, true, true}, 4), counted) == 1.0);
  CHECK(*rap(ranked_from({}, 3), counted) == 0.0);
  CHECK_FALSE(rap(ranked_from({}, 0), counted).has_value());
  CHECK(*rap(ranked_from({false, false}, 0), counted) == 0.0);
  // Zeroed mode caps a perfect region at 10/11.
  CHECK(*rap(ranked_from({true, true}, 2), mode(ZeroRecallMode::zeroed)) == doctest::Approx(10.0 / 11.0));
}

TEST_CASE("precision_recall examples") {
  auto pr = precision_recall(ranked_from({true, true, true, true, true, true, false}, 10));
  CHECK(*pr.precision == doctest::Approx(6.0 / 7.0));
  CHECK(*pr.recall == doctest::Approx(0.6));
  pr = precision_recall(ranked_from({true, true}, 2));
  CHECK(*pr.precision == 1.0);
  CHECK(*pr.recall == 1.0);
  pr = precision_recall(ranked_from({}, 5));
  CHECK_FALSE(pr.precision.has_value());
  CHECK(*pr.recall == 0.0);
}

TEST_CASE("RAP properties on random ranked lists") {
  Rng rng(101);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = int(rng.below(15));
    std::vector<bool> tps;
    int tp = 0;
    for (int i = 0; i < n; ++i) {
      tps.push_back(rng.below(3) != 0);
      tp += tps.back();
    }
    const int n_gt = tp + int(rng.below(6));
    if (n_gt == 0) continue;
    const auto ranked = ranked_from(tps, n_gt);
    const double c = *rap(ranked, mode(ZeroRecallMode::counted));
    const double z = *rap(ranked, mode(ZeroRecallMode::zeroed));
    CHECK(c == doctest::Approx(eleven_point(tps, n_gt, false)).epsilon(1e-12));
    CHECK(z == doctest::Approx(eleven_point(tps, n_gt, true)).epsilon(1e-12));
    CHECK(c >= 0.0);
    CHECK(c <= 1.0);
    CHECK(z <= 10.0 / 11.0 + 1e-15);
    const auto p = interpolated_precision(ranked, mode(ZeroRecallMode::counted));
    CHECK(c - z == doctest::Approx(p[0] / 11.0).epsilon(1e-12));
    for (std::size_t k = 1; k < p.size(); ++k) CHECK(p[k] <= p[k - 1]);

    // Scaling scores keeps the order and the RAP.
    auto scaled = ranked;
    for (auto& o : scaled.outcomes) o.score *= 0.37;
    CHECK(*rap(scaled, mode(ZeroRecallMode::counted)) == c);
  }
}

TEST_CASE("duplicating every image leaves RAP unchanged") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RegionImageOutcomes> images;
    const int n_images = 1 + int(rng.below(4));
    for (int i = 0; i < n_images; ++i) {
      RegionImageOutcomes img{"img" + std::to_string(i), {}, 0};
      const int n = int(rng.below(5));
      int tp = 0;
      for (int k = 0; k < n; ++k) {
        // Distinct scores across the whole pool so no ties arise.
        img.detections.push_back({0.001 * double(1 + i * 100 + k * 7), rng.below(2) == 0});
        tp += img.detections.back().is_tp;
      }
      img.n_gt = tp + int(rng.below(3));
      images.push_back(img);
    }
    auto doubled = images;
    for (auto img : images) {
      img.image_id += "-copy";
      doubled.push_back(img);
    }
    const auto a = rap(compile_ranked(images), RapConfig{});
    const auto b = rap(compile_ranked(doubled), RapConfig{});
    REQUIRE(a.has_value() == b.has_value());
    if (a) CHECK(*a == doctest::Approx(*b).epsilon(1e-12));
  }
}

TEST_CASE("matching cardinalities on random boxes") {
  Rng rng(17);
  RapConfig cfg;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<BBox> truth, dets;
    for (int i = int(rng.below(6)); i > 0; --i)
      truth.push_back(gt(rng.uniform(0, 50), rng.uniform(0, 50), rng.uniform(3, 20), rng.uniform(3, 20)));
    for (int i = int(rng.below(6)); i > 0; --i)
      dets.push_back(det(rng.uniform(0, 50), rng.uniform(0, 50), rng.uniform(3, 20), rng.uniform(3, 20),
                         double(rng.below(4)) / 4.0));
    const auto m = match_region_image(truth, dets, cfg);
    CHECK(m.n_tp + m.n_fp() == int(dets.size()));
    CHECK(m.n_tp + m.n_fn() == int(truth.size()));
    CHECK(m.n_tp <= int(std::min(truth.size(), dets.size())));
    std::vector<int> used;
    for (std::size_t d = 0; d < dets.size(); ++d)
      if (m.is_tp[d]) {
        CHECK(iou(dets[d], truth[std::size_t(m.matched_gt[d])]) > 0.5);
        used.push_back(m.matched_gt[d]);
      }
    std::sort(used.begin(), used.end());
    CHECK(std::adjacent_find(used.begin(), used.end()) == used.end());
  }
}
