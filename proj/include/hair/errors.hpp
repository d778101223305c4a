#pragma once

#include <stdexcept>
#include <string>

namespace hair {

// Input data violates a domain invariant (bad boxes, unknown ids, bad files).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation could not produce a result (unsplittable node, rank-deficient
// homography, no convergence, zero road length).
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hair
