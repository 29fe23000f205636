#include "awmi/raster.hpp"

#include <cmath>
#include <string>

#include "awmi/error.hpp"
#include "awmi/kernels.hpp"

namespace awmi {

namespace {

void check_values(int width, int height, std::span<const double> values) {
  if (width < 1 || height < 1) {
    throw InvalidArgument("raster dimensions must be positive, got " + std::to_string(width) + "x" +
                          std::to_string(height));
  }
  if (values.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw InvalidArgument("raster intensity count does not match dimensions");
  }
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidArgument("raster intensities must be finite and >= 0");
  }
}

}  // namespace

Raster::Raster(int width, int height, std::vector<double> intensities) {
  check_values(width, height, intensities);
  pixels_ = Field(width, height, std::move(intensities));
}

Raster::Raster(Field intensities) : pixels_(std::move(intensities)) {
  check_values(pixels_.width(), pixels_.height(), pixels_.values());
}

Raster Raster::filled(int width, int height, double value) {
  if (width < 1 || height < 1) throw InvalidArgument("raster dimensions must be positive");
  return Raster(width, height, std::vector<double>(static_cast<std::size_t>(width) * height, value));
}

bool AffineParams::singular() const noexcept { return !(std::abs(det()) >= kSingularDeterminant); }

AffineParams AffineParams::inverse() const {
  if (singular()) throw InvalidArgument("affine transform is singular");
  const double d = det();
  AffineParams inv;
  inv.a11 = a22 / d;
  inv.a12 = -a12 / d;
  inv.a21 = -a21 / d;
  inv.a22 = a11 / d;
  inv.t1 = -(inv.a11 * t1 + inv.a12 * t2);
  inv.t2 = -(inv.a21 * t1 + inv.a22 * t2);
  return inv;
}

AffineParams AffineParams::compose(const AffineParams& o) const noexcept {
  AffineParams c;
  c.a11 = a11 * o.a11 + a12 * o.a21;
  c.a12 = a11 * o.a12 + a12 * o.a22;
  c.a21 = a21 * o.a11 + a22 * o.a21;
  c.a22 = a21 * o.a12 + a22 * o.a22;
  c.t1 = a11 * o.t1 + a12 * o.t2 + t1;
  c.t2 = a21 * o.t1 + a22 * o.t2 + t2;
  return c;
}

AffineParams AffineParams::anchored(double from_x, double from_y, double to_x, double to_y) const noexcept {
  AffineParams p = *this;
  p.t1 = to_x - (a11 * from_x + a12 * from_y);
  p.t2 = to_y - (a21 * from_x + a22 * from_y);
  return p;
}

std::vector<AffineParams> table4_transforms() {
  return {
      {0.69, -0.12, 0.21, 1.18, 0, 150},
      {0.57, 0.42, -0.42, 0.42, 160, 280},
      {0.60, -1.03, 0.52, 0.30, 50, 15},
      {1.00, -1.00, 0.00, 1.00, 100, 50},
      {1.50, 0.00, 0.00, 0.80, 30, 10},
  };
}

Raster warp_affine(const Raster& src, const AffineParams& params, int out_width, int out_height) {
  if (out_width < 1 || out_height < 1) throw InvalidArgument("warp output dimensions must be positive");
  const AffineParams inv = params.inverse();
  Field out = kernels::parallel::warp_bilinear(src.field(), inv, out_width, out_height);
  // Bilinear weights are convex, so values stay in the source range; clamp
  // away the last-ulp excursions so the Raster invariants hold exactly.
  for (double& v : out.values()) v = std::max(v, 0.0);
  return Raster(std::move(out));
}

}  // namespace awmi
