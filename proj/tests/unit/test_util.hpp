#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "awmi/raster.hpp"

namespace awmi::test {

inline Raster smooth_blobs(int size, std::uint64_t seed, int blobs = 3) {
  SyntheticSpec s;
  s.width = s.height = size;
  s.seed = seed;
  s.blob_count = blobs;
  return generate_synthetic(s);
}

inline Raster from_function(int w, int h, auto&& f) {
  Field g(w, h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) g(r, c) = f(Raster::x_of(c), Raster::y_of(r));
  }
  return Raster(std::move(g));
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * ((g() >> 11) * 0x1.0p-53);
}

}  // namespace awmi::test
