// Exhaustive reference for identify_hair. Everything above the geometry
// primitives is re-derived here on purpose: node enumeration, box assignment,
// matching and the interpolated-precision average.

#include <algorithm>
#include <map>
#include <set>

#include "hair/errors.hpp"
#include "hair/synth_oracle.hpp"

namespace hair {

namespace {

// Walks a box down from the root, always entering the child of largest
// overlap (first child on ties), for `depth` levels.
QuadPath descend(const Rect& extent, const Rect& box, int depth) {
  QuadPath path;
  Rect node = extent;
  for (int level = 0; level < depth; ++level) {
    const auto kids = split_quadrants(node);
    int pick = 0;
    double area = intersection_area(box, kids[0]);
    for (int q = 1; q < 4; ++q) {
      const double a = intersection_area(box, kids[std::size_t(q)]);
      if (a > area) {
        area = a;
        pick = q;
      }
    }
    path.push_back(Quadrant(pick));
    node = kids[std::size_t(pick)];
  }
  return path;
}

struct Scored {
  double score;
  std::string image_id;
  int index;
  bool tp;
};

std::optional<double> node_rap(const std::vector<const ImageRecord*>& images,
                               const std::map<std::string, std::vector<int>>& gt_in,
                               const std::map<std::string, std::vector<int>>& det_in,
                               const RapConfig& cfg) {
  std::vector<Scored> pool;
  int n_gt = 0;
  for (const ImageRecord* img : images) {
    const auto& gts = gt_in.at(img->image_id);
    const auto& dets = det_in.at(img->image_id);
    n_gt += int(gts.size());
    // Visit detections by (score desc, position asc) and let each claim the
    // best still-free ground truth.
    std::vector<int> order(dets.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = int(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return *img->detections[std::size_t(dets[std::size_t(a)])].score >
             *img->detections[std::size_t(dets[std::size_t(b)])].score;
    });
    std::set<int> taken;
    std::vector<bool> tp(dets.size(), false);
    for (int o : order) {
      const BBox& d = img->detections[std::size_t(dets[std::size_t(o)])];
      int best = -1;
      double best_iou = -1.0;
      for (std::size_t g = 0; g < gts.size(); ++g) {
        if (taken.count(int(g))) continue;
        const double v = iou(d, img->ground_truth[std::size_t(gts[g])]);
        if (v > best_iou) {
          best_iou = v;
          best = int(g);
        }
      }
      if (best >= 0 && best_iou > cfg.iou_threshold) {
        taken.insert(best);
        tp[std::size_t(o)] = true;
      }
    }
    for (std::size_t i = 0; i < dets.size(); ++i)
      pool.push_back({*img->detections[std::size_t(dets[i])].score, img->image_id, int(i), bool(tp[i])});
  }
  if (pool.empty() && n_gt == 0) return std::nullopt;
  if (n_gt == 0) return 0.0;
  std::sort(pool.begin(), pool.end(), [](const Scored& a, const Scored& b) {
    return std::tie(b.score, a.image_id, a.index) < std::tie(a.score, b.image_id, b.index);
  });

  double total = 0.0;
  for (std::size_t k = 0; k < cfg.recall_levels.size(); ++k) {
    if (k == 0 && cfg.zero_recall_mode == ZeroRecallMode::zeroed) continue;
    double best = 0.0;
    int tp = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      tp += pool[i].tp;
      if (double(tp) / double(n_gt) >= cfg.recall_levels[k] - 1e-12)
        best = std::max(best, double(tp) / double(i + 1));
    }
    total += best;
  }
  return total / double(cfg.recall_levels.size());
}

bool passes(const std::optional<double>& value, const RapConfig& cfg) {
  if (!value) return cfg.empty_region_policy == EmptyRegionPolicy::include;
  return *value > cfg.a0;
}

}  // namespace

Hair brute_force_hair(const CameraDataset& dataset, std::span<const std::string> image_ids,
                      const RapConfig& cfg, int max_depth) {
  cfg.validate();
  if (image_ids.empty()) throw ValidationError("identify_hair needs at least one image");
  if (max_depth < 0 || max_depth > max_splittable_depth(dataset.extent()))
    throw ValidationError("max depth out of range for this extent");
  const Rect extent = dataset.extent();

  std::vector<const ImageRecord*> images;
  for (const auto& id : image_ids) {
    const ImageRecord* img = dataset.find(id);
    if (!img) throw ValidationError("unknown image_id '" + id + "'");
    images.push_back(img);
  }

  // Full leaf path of every box at max_depth; a box belongs to a node iff the
  // node's path is a prefix of the box's path.
  std::map<std::string, std::vector<QuadPath>> gt_paths, det_paths;
  for (const ImageRecord* img : images) {
    for (const auto& b : img->ground_truth)
      gt_paths[img->image_id].push_back(descend(extent, b.rect(), max_depth));
    for (const auto& b : img->detections)
      det_paths[img->image_id].push_back(descend(extent, b.rect(), max_depth));
  }
  auto is_prefix = [](const QuadPath& prefix, const QuadPath& full) {
    return std::equal(prefix.begin(), prefix.end(), full.begin());
  };

  // Enumerate every node, shallow levels first.
  std::vector<QuadPath> nodes{{}};
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (int(nodes[i].size()) < max_depth)
      for (int q = 0; q < 4; ++q) {
        QuadPath child = nodes[i];
        child.push_back(Quadrant(q));
        nodes.push_back(child);
      }

  std::map<QuadPath, std::optional<double>> value;
  for (const auto& node : nodes) {
    std::map<std::string, std::vector<int>> gt_in, det_in;
    for (const ImageRecord* img : images) {
      auto& g = gt_in[img->image_id];
      auto& d = det_in[img->image_id];
      const auto& gp = gt_paths[img->image_id];
      const auto& dp = det_paths[img->image_id];
      for (std::size_t i = 0; i < gp.size(); ++i)
        if (is_prefix(node, gp[i])) g.push_back(int(i));
      for (std::size_t i = 0; i < dp.size(); ++i)
        if (is_prefix(node, dp[i])) d.push_back(int(i));
    }
    value[node] = node_rap(images, gt_in, det_in, cfg);
  }

  Hair h;
  h.camera_id = dataset.camera_id;
  h.width = dataset.width;
  h.height = dataset.height;
  h.a0 = cfg.a0;
  h.max_depth = max_depth;
  h.convention = cfg;
  h.identification_image_ids.assign(image_ids.begin(), image_ids.end());
  for (const auto& node : nodes) {
    if (!passes(value[node], cfg)) continue;
    bool ancestor_passed = false;
    for (std::size_t len = 0; len < node.size() && !ancestor_passed; ++len)
      ancestor_passed = passes(value[QuadPath(node.begin(), node.begin() + long(len))], cfg);
    if (!ancestor_passed) h.leaves.push_back({node, rect_for_path(extent, node), value[node]});
  }
  // Depth-first NW..SE order, matching identify_hair.
  std::sort(h.leaves.begin(), h.leaves.end(),
            [](const QuadrantNode& a, const QuadrantNode& b) { return a.path < b.path; });
  return h;
}

}  // namespace hair
