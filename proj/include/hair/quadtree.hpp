#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hair/geometry.hpp"
#include "hair/types.hpp"

namespace hair {

using QuadPath = std::vector<Quadrant>;

// "SW.NE"; the root is the empty string.
std::string path_to_string(const QuadPath& path);
// Throws ValidationError on tokens outside {NW, NE, SW, SE}.
QuadPath parse_path(const std::string& text);
// Rectangle reached by splitting `extent` along `path`.
Rect rect_for_path(const Rect& extent, const QuadPath& path);
// Deepest d0 for which every node above depth d0 can still be split.
int max_splittable_depth(const Rect& extent);

struct QuadrantNode {
  QuadPath path;
  Rect rect;
  std::optional<double> rap;  // empty for a region with no evidence

  int depth() const { return int(path.size()); }

  friend bool operator==(const QuadrantNode&, const QuadrantNode&) = default;
};

struct Hair {
  std::string camera_id;
  int width = 0;
  int height = 0;
  double a0 = 0.75;
  int max_depth = 0;
  RapConfig convention;
  std::vector<std::string> identification_image_ids;
  std::vector<QuadrantNode> leaves;  // NW, NE, SW, SE depth-first order

  Rect extent() const { return {0.0, 0.0, double(width), double(height)}; }

  friend bool operator==(const Hair&, const Hair&) = default;
};

enum class NodeDecision { accepted, split, depth_limit, empty_rejected };

std::string to_string(NodeDecision decision);

struct TraceEntry {
  QuadPath path;
  std::optional<double> rap;
  NodeDecision decision;
};

// Recursive quadtree search for the high-accuracy identification region.
// Boxes are assigned hierarchically: a box assigned to a node is re-assigned
// only among that node's children. A node is accepted when its RAP strictly
// exceeds cfg.a0; an evidence-free node is accepted under the include policy
// and dropped under exclude. When `trace` is given, every visited node is
// appended in visit order.
Hair identify_hair(const CameraDataset& dataset, std::span<const std::string> image_ids,
                   const RapConfig& cfg, int max_depth, std::vector<TraceEntry>* trace = nullptr);

struct HairError {
  double acc1 = 0.0;  // RAP over the full extent
  double acc2 = 0.0;  // RAP counting only detections inside the HAIR
  double e = 0.0;     // acc1 - acc2
};

// Majority-overlap membership: a box is inside when its overlap with the
// union of leaves is at least its overlap with the rest of the extent.
bool inside_hair(const Rect& box, const Hair& hair);

// Throws ValidationError when an evaluation image was also used to identify
// the HAIR, unless allow_overlap is set. Undefined RAPs (no evidence in any
// evaluation image) count as 0.
HairError hair_error(const Hair& hair, std::span<const ImageRecord> eval_images,
                     const RapConfig& cfg, bool allow_overlap = false);

}  // namespace hair
