#pragma once

#include <cmath>

#include "awmi/summation.hpp"

namespace awmi::kernels {

inline double bilinear_sample(const Field& src, double x, double y) noexcept {
  // Continuous coordinate -> fractional index of pixel centres.
  const double fx = x - 0.5;
  const double fy = y - 0.5;
  const double x0f = std::floor(fx);
  const double y0f = std::floor(fy);
  const double ax = fx - x0f;
  const double ay = fy - y0f;
  const int x0 = static_cast<int>(x0f);
  const int y0 = static_cast<int>(y0f);
  const int w = src.width();
  const int h = src.height();
  auto at = [&](int r, int c) { return (r < 0 || r >= h || c < 0 || c >= w) ? 0.0 : src(r, c); };
  if (ax == 0.0 && ay == 0.0) return at(y0, x0);
  const double top = (1.0 - ax) * at(y0, x0) + ax * at(y0, x0 + 1);
  const double bottom = (1.0 - ax) * at(y0 + 1, x0) + ax * at(y0 + 1, x0 + 1);
  return (1.0 - ay) * top + ay * bottom;
}

inline double dm_factor(const MomentInputs& in, std::size_t idx, double dx, double dy, const DMKey& k) noexcept {
  double v = ipow(dx, k.p) * ipow(dy, k.q);
  if (k.m) v *= ipow(in.fx[idx], k.m);
  if (k.n) v *= ipow(in.fy[idx], k.n);
  if (k.r) v *= ipow(in.fxx[idx], k.r);
  if (k.s) v *= ipow(in.fyy[idx], k.s);
  if (k.t) v *= ipow(in.fxy[idx], k.t);
  return v;
}

}  // namespace awmi::kernels
