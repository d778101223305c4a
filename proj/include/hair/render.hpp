#pragma once

#include <optional>
#include <string>

#include "hair/density.hpp"
#include "hair/quadtree.hpp"
#include "hair/types.hpp"

namespace hair {

struct RenderOptions {
  const Hair* hair = nullptr;
  const RoadSet* roads = nullptr;
  std::optional<std::string> background;  // href of a camera frame, if any
  double iou_threshold = 0.5;
};

// SVG overlay of one image: HAIR leaves shaded red, true positives filled
// blue, missed vehicles outlined blue, false positives dashed orange.
// Throws ValidationError when the image is not in the dataset.
std::string render_svg(const CameraDataset& dataset, const std::string& image_id,
                       const RenderOptions& options = {});

}  // namespace hair
