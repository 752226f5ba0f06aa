#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fivec/pentavec.hpp"

namespace fivec {

/// Axis-aligned box in the four coordinates.
struct SampleBox {
  Point lo{-0.5, -0.5, -0.5, -0.5};
  Point hi{0.5, 0.5, 0.5, 0.5};
};

/// Seeded deterministic points inside the box. If `accept` is supplied,
/// rejected draws are replaced, oversampling at most 10x before failing.
std::vector<Point> sample_points(const SampleBox& box, int count, std::uint64_t seed,
                                 const std::function<bool(const Point&)>& accept = {});

/// Halton low-discrepancy value, index >= 0, prime base.
double halton(int index, int base);

/// Deterministic quasi-random five-vectors in the open future cone of the
/// flat metric: zero fifth component, u0 > |spatial|, so g(u,u) > 0.
std::vector<FiveVector> sample_future_cone(int count, BasisDescriptor basis = {},
                                           int index_offset = 0);

}  // namespace fivec
