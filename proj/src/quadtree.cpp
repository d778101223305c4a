#include "hair/quadtree.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "hair/errors.hpp"
#include "hair/region_eval.hpp"

namespace hair {

std::string path_to_string(const QuadPath& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += '.';
    out += to_string(path[i]);
  }
  return out;
}

QuadPath parse_path(const std::string& text) {
  QuadPath path;
  if (text.empty()) return path;
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, '.')) {
    if (token == "NW") path.push_back(Quadrant::NW);
    else if (token == "NE") path.push_back(Quadrant::NE);
    else if (token == "SW") path.push_back(Quadrant::SW);
    else if (token == "SE") path.push_back(Quadrant::SE);
    else throw ValidationError("bad quadrant path '" + text + "'");
  }
  if (text.back() == '.') throw ValidationError("bad quadrant path '" + text + "'");
  return path;
}

Rect rect_for_path(const Rect& extent, const QuadPath& path) {
  Rect r = extent;
  for (Quadrant q : path) r = split_quadrants(r)[std::size_t(q)];
  return r;
}

int max_splittable_depth(const Rect& extent) {
  // The NW child always holds the floor of both sides, so it is the smallest.
  int depth = 0;
  Rect r = extent;
  while (r.w >= 2.0 && r.h >= 2.0) {
    r = split_quadrants(r)[0];
    ++depth;
  }
  return depth;
}

std::string to_string(NodeDecision decision) {
  switch (decision) {
    case NodeDecision::accepted: return "accepted";
    case NodeDecision::split: return "split";
    case NodeDecision::depth_limit: return "depth_limit";
    case NodeDecision::empty_rejected: return "empty_rejected";
  }
  return "?";
}

namespace {

// Boxes of one image currently assigned to a node, by index into the record.
struct ImageScope {
  const ImageRecord* image;
  std::vector<std::size_t> gt;
  std::vector<std::size_t> det;
};

std::optional<double> scope_rap(const std::vector<ImageScope>& scopes, const RapConfig& cfg) {
  std::vector<RegionImageOutcomes> per_image;
  per_image.reserve(scopes.size());
  std::vector<BBox> gt, det;
  for (const auto& s : scopes) {
    gt.clear();
    det.clear();
    for (auto i : s.gt) gt.push_back(s.image->ground_truth[i]);
    for (auto i : s.det) det.push_back(s.image->detections[i]);
    per_image.push_back(make_region_image_outcomes(s.image->image_id, gt, det, cfg));
  }
  return rap(compile_ranked(per_image), cfg);
}

class HairSearch {
 public:
  HairSearch(const RapConfig& cfg, int max_depth, std::vector<TraceEntry>* trace)
      : cfg_(cfg), max_depth_(max_depth), trace_(trace) {}

  void visit(const QuadPath& path, const Rect& rect, const std::vector<ImageScope>& scopes) {
    const auto value = scope_rap(scopes, cfg_);
    const bool empty = !value.has_value();
    NodeDecision decision;
    if (empty) {
      decision = cfg_.empty_region_policy == EmptyRegionPolicy::include ? NodeDecision::accepted
                                                                        : NodeDecision::empty_rejected;
    } else if (*value > cfg_.a0) {
      decision = NodeDecision::accepted;
    } else if (int(path.size()) >= max_depth_) {
      decision = NodeDecision::depth_limit;
    } else {
      decision = NodeDecision::split;
    }
    if (trace_) trace_->push_back({path, value, decision});
    if (decision == NodeDecision::accepted) leaves_.push_back({path, rect, value});
    if (decision != NodeDecision::split) return;

    const auto children = split_quadrants(rect);
    std::array<std::vector<ImageScope>, 4> child_scopes;
    for (auto& cs : child_scopes) {
      cs.reserve(scopes.size());
      for (const auto& s : scopes) cs.push_back({s.image, {}, {}});
    }
    for (std::size_t i = 0; i < scopes.size(); ++i) {
      const auto& s = scopes[i];
      for (auto g : s.gt)
        child_scopes[assign_to_region(s.image->ground_truth[g].rect(), children)][i].gt.push_back(g);
      for (auto d : s.det)
        child_scopes[assign_to_region(s.image->detections[d].rect(), children)][i].det.push_back(d);
    }
    for (std::size_t q = 0; q < 4; ++q) {
      QuadPath child = path;
      child.push_back(Quadrant(q));
      visit(child, children[q], child_scopes[q]);
    }
  }

  std::vector<QuadrantNode> take_leaves() { return std::move(leaves_); }

 private:
  const RapConfig& cfg_;
  int max_depth_;
  std::vector<TraceEntry>* trace_;
  std::vector<QuadrantNode> leaves_;
};

}  // namespace

Hair identify_hair(const CameraDataset& dataset, std::span<const std::string> image_ids,
                   const RapConfig& cfg, int max_depth, std::vector<TraceEntry>* trace) {
  cfg.validate();
  if (image_ids.empty()) throw ValidationError("identify_hair needs at least one image");
  if (max_depth < 0) throw ValidationError("max depth must be non-negative");
  const Rect extent = dataset.extent();
  if (max_depth > max_splittable_depth(extent))
    throw ValidationError("max depth " + std::to_string(max_depth) + " exceeds splittable depth " +
                          std::to_string(max_splittable_depth(extent)) + " of a " +
                          std::to_string(dataset.width) + "x" + std::to_string(dataset.height) +
                          " extent");

  std::vector<ImageScope> root;
  root.reserve(image_ids.size());
  std::set<std::string> seen;
  for (const auto& id : image_ids) {
    const ImageRecord* image = dataset.find(id);
    if (!image) throw ValidationError("unknown image_id '" + id + "'");
    if (!seen.insert(id).second) throw ValidationError("image_id '" + id + "' listed twice");
    ImageScope s{image, {}, {}};
    for (std::size_t i = 0; i < image->ground_truth.size(); ++i) s.gt.push_back(i);
    for (std::size_t i = 0; i < image->detections.size(); ++i) s.det.push_back(i);
    root.push_back(std::move(s));
  }

  HairSearch search(cfg, max_depth, trace);
  search.visit({}, extent, root);

  Hair h;
  h.camera_id = dataset.camera_id;
  h.width = dataset.width;
  h.height = dataset.height;
  h.a0 = cfg.a0;
  h.max_depth = max_depth;
  h.convention = cfg;
  h.identification_image_ids.assign(image_ids.begin(), image_ids.end());
  h.leaves = search.take_leaves();
  return h;
}

bool inside_hair(const Rect& box, const Hair& hair) {
  double inside = 0.0;
  for (const auto& leaf : hair.leaves) inside += intersection_area(box, leaf.rect);
  const double outside = intersection_area(box, hair.extent()) - inside;
  return inside >= outside;
}

HairError hair_error(const Hair& hair, std::span<const ImageRecord> eval_images,
                     const RapConfig& cfg, bool allow_overlap) {
  if (!allow_overlap) {
    std::set<std::string> ident(hair.identification_image_ids.begin(),
                                hair.identification_image_ids.end());
    for (const auto& img : eval_images)
      if (ident.count(img.image_id))
        throw ValidationError("evaluation image '" + img.image_id +
                              "' was used to identify the HAIR");
  }
  std::vector<RegionImageOutcomes> all, restricted;
  std::vector<BBox> kept;
  for (const auto& img : eval_images) {
    all.push_back(make_region_image_outcomes(img.image_id, img.ground_truth, img.detections, cfg));
    kept.clear();
    for (const auto& d : img.detections)
      if (inside_hair(d.rect(), hair)) kept.push_back(d);
    restricted.push_back(make_region_image_outcomes(img.image_id, img.ground_truth, kept, cfg));
  }
  HairError out;
  out.acc1 = rap(compile_ranked(all), cfg).value_or(0.0);
  out.acc2 = rap(compile_ranked(restricted), cfg).value_or(0.0);
  out.e = out.acc1 - out.acc2;
  return out;
}

}  // namespace hair
