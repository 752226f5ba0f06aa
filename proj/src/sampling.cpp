#include "fivec/sampling.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace fivec {

namespace {

double unit_uniform(std::mt19937_64& rng) {
  // Top 53 bits to a double in [0,1); bit-identical on every platform,
  // unlike uniform_real_distribution.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<Point> sample_points(const SampleBox& box, int count, std::uint64_t seed,
                                 const std::function<bool(const Point&)>& accept) {
  std::mt19937_64 rng(seed);
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  long budget = 10L * count;
  while (static_cast<int>(out.size()) < count) {
    if (budget-- <= 0)
      throw std::runtime_error("point sampling exceeded the 10x rejection budget");
    Point p;
    for (int i = 0; i < 4; ++i) {
      auto k = static_cast<std::size_t>(i);
      p[k] = box.lo[k] + (box.hi[k] - box.lo[k]) * unit_uniform(rng);
    }
    if (accept && !accept(p)) continue;
    out.push_back(p);
  }
  return out;
}

double halton(int index, int base) {
  double f = 1.0, r = 0.0;
  for (int i = index + 1; i > 0; i /= base) {
    f /= base;
    r += f * (i % base);
  }
  return r;
}

std::vector<FiveVector> sample_future_cone(int count, BasisDescriptor basis, int index_offset) {
  std::vector<FiveVector> out;
  out.reserve(static_cast<std::size_t>(count));
  static const int bases[3] = {2, 3, 5};
  for (int k = 0; k < count; ++k) {
    int idx = k + index_offset;
    double s[3];
    double norm2 = 0.0;
    for (int i = 0; i < 3; ++i) {
      s[i] = 2.0 * halton(idx, bases[i]) - 1.0;
      norm2 += s[i] * s[i];
    }
    // strictly timelike: u0 exceeds |spatial| by a margin in (0.1, 1.1]
    double u0 = std::sqrt(norm2) + 0.1 + halton(idx, 7);
    FiveVector u({u0, s[0], s[1], s[2], 0.0}, basis);
    out.push_back(u);
  }
  return out;
}

}  // namespace fivec
