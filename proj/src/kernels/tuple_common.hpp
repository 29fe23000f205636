#pragma once

// Pieces shared by the serial and parallel oracle sums.

#include <array>
#include <vector>

#include "awmi/kernels.hpp"
#include "awmi/summation.hpp"

namespace awmi::kernels::detail {

/// Primitive multiplicities for points {1,2,3}: S12, S13, S23.
struct TupleShape {
  int points = 2;
  int e12 = 0, e13 = 0, e23 = 0;
  /// slot_weight[s][i] = f_i * adi1_i^k_s
  std::array<std::vector<double>, 3> slot_weight;
};

inline TupleShape make_shape(const TuplePoints& pts, const DCoreSpec& spec) {
  TupleShape shape;
  shape.points = spec.core.points();
  for (const auto& pr : spec.core.primitives()) {
    if (pr.i == 1 && pr.j == 2) ++shape.e12;
    if (pr.i == 1 && pr.j == 3) ++shape.e13;
    if (pr.i == 2 && pr.j == 3) ++shape.e23;
  }
  for (int s = 0; s < shape.points; ++s) {
    auto& w = shape.slot_weight[s];
    w.resize(pts.size());
    const int k = spec.adi_powers[s];
    for (std::size_t i = 0; i < pts.size(); ++i) w[i] = pts.f[i] * ipow(pts.adi1[i], k);
  }
  return shape;
}

/// Adds every tuple whose first point is `a` to `sum` / `mag`.
inline void accumulate_from(const TuplePoints& pts, const TupleShape& sh, std::size_t a, CompensatedSum& sum,
                            CompensatedSum& mag) {
  const std::size_t n = pts.size();
  const double xa = pts.x[a], ya = pts.y[a];
  const double wa = sh.slot_weight[0][a];
  if (wa == 0.0) return;
  const auto& w1 = sh.slot_weight[1];
  if (sh.points == 2) {
    for (std::size_t b = 0; b < n; ++b) {
      const double s12 = xa * pts.y[b] - pts.x[b] * ya;
      const double term = ipow(s12, sh.e12) * wa * w1[b];
      sum.add(term);
      mag.add(std::abs(term));
    }
    return;
  }
  const auto& w2 = sh.slot_weight[2];
  for (std::size_t b = 0; b < n; ++b) {
    const double xb = pts.x[b], yb = pts.y[b];
    const double s12 = xa * yb - xb * ya;
    const double head = ipow(s12, sh.e12) * wa * w1[b];
    if (head == 0.0) continue;
    for (std::size_t c = 0; c < n; ++c) {
      const double xc = pts.x[c], yc = pts.y[c];
      const double s13 = xa * yc - xc * ya;
      const double s23 = xb * yc - xc * yb;
      const double term = head * ipow(s13, sh.e13) * ipow(s23, sh.e23) * w2[c];
      sum.add(term);
      mag.add(std::abs(term));
    }
  }
}

}  // namespace awmi::kernels::detail
