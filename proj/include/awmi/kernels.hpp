#pragma once

// Hot loops, each in two flavours: `serial` is the straightforward reference
// kept for testing; `parallel` is the OpenMP version the library calls.
//
// convolve and warp produce bit-identical results in both flavours (the
// per-pixel arithmetic is the same). Reductions differ only by rounding:
// the parallel flavour sums each row (or each outer tuple index) into its own
// compensated accumulator and merges them in index order, so its result does
// not depend on the thread count.

#include <cstdint>
#include <span>
#include <vector>

#include "awmi/diffops.hpp"
#include "awmi/grid.hpp"
#include "awmi/moments.hpp"
#include "awmi/oracle.hpp"

namespace awmi::kernels {

/// Per-pixel inputs of a moment reduction. Derivative fields may be empty
/// when no requested key uses them.
struct MomentInputs {
  int width = 0;
  int height = 0;
  std::span<const double> f, fx, fy, fxx, fyy, fxy;
  double cx = 0.0;  // subtracted from pixel-centre x
  double cy = 0.0;
};

/// Active pixels of an oracle sum, coordinates already centred.
struct TuplePoints {
  std::vector<double> x, y, f, adi1;
  std::size_t size() const noexcept { return f.size(); }
};

namespace serial {
Field convolve(const Field& src, const Field& kernel, Boundary boundary);
Field warp_bilinear(const Field& src, const AffineParams& inverse, int out_width, int out_height);
std::vector<double> moment_sums(const MomentInputs& in, std::span<const DMKey> keys);
OracleValue tuple_sum(const TuplePoints& pts, const DCoreSpec& spec);
}  // namespace serial

namespace parallel {
Field convolve(const Field& src, const Field& kernel, Boundary boundary);
Field warp_bilinear(const Field& src, const AffineParams& inverse, int out_width, int out_height);
std::vector<double> moment_sums(const MomentInputs& in, std::span<const DMKey> keys);
OracleValue tuple_sum(const TuplePoints& pts, const DCoreSpec& spec);
}  // namespace parallel

// Shared per-element helpers.

/// Index into [0, n) for offset `i`, reflecting about the outer pixel edges
/// (d c b a | a b c d). Requires -n <= i < 2n.
inline int reflect_index(int i, int n) noexcept {
  if (i < 0) return -i - 1;
  if (i >= n) return 2 * n - i - 1;
  return i;
}

inline double bilinear_sample(const Field& src, double x, double y) noexcept;

/// Value of one DM integrand factor set at a pixel (without f).
inline double dm_factor(const MomentInputs& in, std::size_t idx, double dx, double dy, const DMKey& k) noexcept;

}  // namespace awmi::kernels

#include "awmi/detail/kernels_inl.hpp"
