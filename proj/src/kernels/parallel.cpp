#include <cmath>

#include <omp.h>

#include "awmi/kernels.hpp"
#include "awmi/summation.hpp"
#include "tuple_common.hpp"

namespace awmi::kernels::parallel {

Field convolve(const Field& src, const Field& kernel, Boundary boundary) {
  const int w = src.width(), h = src.height();
  const int kh = kernel.height(), kw = kernel.width();
  const int kr = kh / 2, kc = kw / 2;
  Field out(w, h);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < h; ++r) {
    const bool row_inside = r - kr >= 0 && r + kr < h;
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      if (row_inside && c - kc >= 0 && c + kc < w) {
        for (int i = 0; i < kh; ++i) {
          const auto src_row = src.row(r - (i - kr));
          const auto k_row = kernel.row(i);
          for (int j = 0; j < kw; ++j) acc += k_row[j] * src_row[c - (j - kc)];
        }
      } else {
        for (int i = 0; i < kh; ++i) {
          for (int j = 0; j < kw; ++j) {
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
      }
      out(r, c) = acc;
    }
  }
  return out;
}

Field warp_bilinear(const Field& src, const AffineParams& inverse, int out_width, int out_height) {
  Field out(out_width, out_height);
#pragma omp parallel for schedule(static)
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
  const std::size_t nk = keys.size();
  std::vector<CompensatedSum> rows(static_cast<std::size_t>(in.height) * nk);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < in.height; ++r) {
    CompensatedSum* acc = rows.data() + static_cast<std::size_t>(r) * nk;
    const double dy = (r + 0.5) - in.cy;
    for (int c = 0; c < in.width; ++c) {
      const std::size_t idx = static_cast<std::size_t>(r) * in.width + c;
      const double f = in.f[idx];
      if (f == 0.0) continue;
      const double dx = (c + 0.5) - in.cx;
      for (std::size_t k = 0; k < nk; ++k) acc[k].add(dm_factor(in, idx, dx, dy, keys[k]) * f);
    }
  }
  std::vector<double> out(nk);
  for (std::size_t k = 0; k < nk; ++k) {
    CompensatedSum total;
    for (int r = 0; r < in.height; ++r) total.merge(rows[static_cast<std::size_t>(r) * nk + k]);
    out[k] = total.value();
  }
  return out;
}

OracleValue tuple_sum(const TuplePoints& pts, const DCoreSpec& spec) {
  const auto shape = detail::make_shape(pts, spec);
  const std::size_t n = pts.size();
  std::vector<CompensatedSum> sums(n), mags(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t a = 0; a < n; ++a) detail::accumulate_from(pts, shape, a, sums[a], mags[a]);
  CompensatedSum sum, mag;
  for (std::size_t a = 0; a < n; ++a) {
    sum.merge(sums[a]);
    mag.merge(mags[a]);
  }
  return {sum.value(), mag.value()};
}

}  // namespace awmi::kernels::parallel
