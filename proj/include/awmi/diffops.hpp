#pragma once

#include "awmi/grid.hpp"
#include "awmi/raster.hpp"

namespace awmi {

enum class Boundary { reflect, zero };

/// How the sampled Gaussian-derivative kernels are conditioned before use.
enum class KernelNormalization {
  /// Raw samples of G, dG/dx, ... at integer offsets.
  sampled,
  /// 1D factors rescaled (and the second-derivative factor re-centred) so the
  /// truncated kernels have the discrete moments of their continuous
  /// counterparts: smoothing sums to 1, d/dx maps x to 1, d2/dx2 maps 1 to 0
  /// and x^2 to 2. Polynomials of degree <= 2 are then differentiated exactly.
  moment_corrected,
};

struct DiffConfig {
  double sigma = 3.0;
  int kernel_size = 9;
  Boundary boundary = Boundary::reflect;
  KernelNormalization normalization = KernelNormalization::moment_corrected;

  /// Throws InvalidArgument unless sigma > 0 and kernel_size is odd and >= 3.
  void validate() const;
  int radius() const noexcept { return kernel_size / 2; }

  friend bool operator==(const DiffConfig&, const DiffConfig&) = default;
};

/// Raw samples of the zero-mean 2D Gaussian or one of its first/second
/// partial derivatives, kernel_size x kernel_size, centre at (radius, radius).
/// Kernel(row, col) holds the value at offset (x, y) = (col - r, row - r).
Field gaussian_kernel(int order_x, int order_y, const DiffConfig& config);

/// The kernel derivative_stack actually convolves with, after applying
/// config.normalization. Separable by construction.
Field derivative_kernel(int order_x, int order_y, const DiffConfig& config);

/// True 2D convolution (kernel flipped), output the size of the input.
/// Throws InvalidArgument if the kernel is larger than the image or has even size.
Field convolve(const Field& src, const Field& kernel, Boundary boundary);
Field convolve(const Raster& src, const Field& kernel, Boundary boundary);

struct DerivativeStack {
  Field fx, fy, fxx, fxy, fyy;
  DiffConfig config;

  int width() const noexcept { return fx.width(); }
  int height() const noexcept { return fx.height(); }
};

/// Throws InvalidArgument if the image is smaller than the kernel.
DerivativeStack derivative_stack(const Raster& src, const DiffConfig& config = {});

/// First and second partial derivatives at one point.
struct Jet {
  double fx = 0, fy = 0, fxx = 0, fxy = 0, fyy = 0;
};

struct AdiValues {
  double adi1 = 0, adi2 = 0, adi3 = 0, adi4 = 0, adi5 = 0;
};

/// Local affine differential invariants at (x, y) (coordinates already centred).
///   adi1 = x fx + y fy
///   adi2 = x^2 fxx + 2xy fxy + y^2 fyy
///   adi3 = x fy fxx + (y fy - x fx) fxy - y fx fyy
///   adi4 = fxx fyy - fxy^2
///   adi5 = fy^2 fxx - 2 fx fy fxy + fx^2 fyy
constexpr AdiValues adi_at(const Jet& j, double x, double y) noexcept {
  return {
      x * j.fx + y * j.fy,
      x * x * j.fxx + 2.0 * x * y * j.fxy + y * y * j.fyy,
      x * j.fy * j.fxx + (y * j.fy - x * j.fx) * j.fxy - y * j.fx * j.fyy,
      j.fxx * j.fyy - j.fxy * j.fxy,
      j.fy * j.fy * j.fxx - 2.0 * j.fx * j.fy * j.fxy + j.fx * j.fx * j.fyy,
  };
}

/// Residual of the dependency among the five invariants:
/// adi3^2 - adi2*adi5 + adi1^2*adi4, which vanishes identically.
constexpr double adi_syzygy(const AdiValues& a) noexcept {
  return a.adi3 * a.adi3 - a.adi2 * a.adi5 + a.adi1 * a.adi1 * a.adi4;
}

/// The relation as printed in the source literature: adi2^2 - adi5*adi3 + adi1^2*adi4.
/// Kept so tests can show it does not hold.
constexpr double adi_syzygy_as_printed(const AdiValues& a) noexcept {
  return a.adi2 * a.adi2 - a.adi5 * a.adi3 + a.adi1 * a.adi1 * a.adi4;
}

struct ADIFields {
  Field adi1, adi2, adi3, adi4, adi5;
};

struct Centroid;

/// Pointwise invariants with coordinates centred on `centroid`.
ADIFields adi_fields(const DerivativeStack& stack, const Centroid& centroid);

}  // namespace awmi
