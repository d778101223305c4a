#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hair/quadtree.hpp"
#include "hair/synth_oracle.hpp"
#include "hair/types.hpp"

namespace hair::testing {

BBox gt(double x, double y, double w, double h);
BBox det(double x, double y, double w, double h, double score);

// Three 704x480 images, 10 ground truths, detections ranked 1-6 true positive
// and rank 7 a false positive. Rank 6 is the only true positive in the top
// half; ranks 1-5 sit in the bottom half.
CameraDataset three_image_region();

// HAIR made of the two lower quadrants of the 704x480 frame.
Hair lower_half_hair(const CameraDataset& d);

// 400x300 frame; every vehicle in the bottom half is detected exactly, every
// vehicle in the top half is missed. No box crosses a midline.
CameraDataset bottom_half_perfect();

// 800x800 frame in which NE, SW and SE are perfectly detected, NW is mostly
// missed, and inside NW exactly three depth-3 cells (NW.NW.NW, NW.NE.NW,
// NW.SW.NW) are perfect while every depth-2 cell fails.
CameraDataset three_quadrant_camera();

// Random synthetic spec for property tests; `quantize` coarsens scores to
// force ties.
SynthSpec random_spec(std::uint64_t seed);
CameraDataset random_camera(std::uint64_t seed, int n_images, bool quantize_scores);

std::vector<std::string> all_ids(const CameraDataset& d);

}  // namespace hair::testing
