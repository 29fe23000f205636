#include <array>
#include <cmath>

#include "awmi/kernels.hpp"
#include "awmi/summation.hpp"

namespace awmi::kernels::serial {

Field convolve(const Field& src, const Field& kernel, Boundary boundary) {
  const int w = src.width(), h = src.height();
  const int kr = kernel.height() / 2, kc = kernel.width() / 2;
  Field out(w, h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int i = 0; i < kernel.height(); ++i) {
        for (int j = 0; j < kernel.width(); ++j) {
          // out(r,c) = sum_k K(k) src(p - k), k = (i - kr, j - kc)
          int sr = r - (i - kr);
          int sc = c - (j - kc);
          if (boundary == Boundary::zero) {
            if (sr < 0 || sr >= h || sc < 0 || sc >= w) continue;
          } else {
            sr = reflect_index(sr, h);
            sc = reflect_index(sc, w);
          }
          acc += kernel(i, j) * src(sr, sc);
        }
      }
      out(r, c) = acc;
    }
  }
  return out;
}

Field warp_bilinear(const Field& src, const AffineParams& inverse, int out_width, int out_height) {
  Field out(out_width, out_height);
  for (int r = 0; r < out_height; ++r) {
    for (int c = 0; c < out_width; ++c) {
      double sx = 0, sy = 0;
      inverse.apply(c + 0.5, r + 0.5, sx, sy);
      out(r, c) = bilinear_sample(src, sx, sy);
    }
  }
  return out;
}

std::vector<double> moment_sums(const MomentInputs& in, std::span<const DMKey> keys) {
  std::vector<double> out;
  out.reserve(keys.size());
  for (const DMKey& key : keys) {
    CompensatedSum acc;
    for (int r = 0; r < in.height; ++r) {
      const double dy = (r + 0.5) - in.cy;
      for (int c = 0; c < in.width; ++c) {
        const std::size_t idx = static_cast<std::size_t>(r) * in.width + c;
        const double f = in.f[idx];
        if (f == 0.0) continue;
        acc.add(dm_factor(in, idx, (c + 0.5) - in.cx, dy, key) * f);
      }
    }
    out.push_back(acc.value());
  }
  return out;
}

OracleValue tuple_sum(const TuplePoints& pts, const DCoreSpec& spec) {
  const int npts = spec.core.points();
  const std::size_t n = pts.size();
  CompensatedSum sum, mag;
  std::array<std::size_t, 3> idx{};
  std::uint64_t total = 1;
  for (int i = 0; i < npts; ++i) total *= n;
  for (std::uint64_t t = 0; t < total; ++t) {
    std::uint64_t rem = t;
    for (int i = npts - 1; i >= 0; --i) {
      idx[i] = rem % n;
      rem /= n;
    }
    double term = 1.0;
    for (const auto& pr : spec.core.primitives()) {
      const std::size_t a = idx[pr.i - 1], b = idx[pr.j - 1];
      term *= pts.x[a] * pts.y[b] - pts.x[b] * pts.y[a];
    }
    for (int i = 0; i < npts; ++i) {
      const std::size_t a = idx[i];
      term *= pts.f[a];
      for (int k = 0; k < spec.adi_powers[i]; ++k) term *= pts.adi1[a];
    }
    sum.add(term);
    mag.add(std::abs(term));
  }
  return {sum.value(), mag.value()};
}

}  // namespace awmi::kernels::serial
