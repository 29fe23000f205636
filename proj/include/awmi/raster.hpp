#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "awmi/grid.hpp"

namespace awmi {

/// Grayscale image with intensities in [0, 1].
///
/// Pixel (row i, col j) has continuous coordinates (x, y) = (j + 0.5, i + 0.5);
/// all integrals over the image are unit-area sums over pixel centers.
class Raster {
 public:
  /// Throws InvalidArgument if a dimension is zero, the size does not match,
  /// or a value is negative or non-finite.
  Raster(int width, int height, std::vector<double> intensities);
  explicit Raster(Field intensities);

  static Raster filled(int width, int height, double value);

  int width() const noexcept { return pixels_.width(); }
  int height() const noexcept { return pixels_.height(); }
  double operator()(int row, int col) const noexcept { return pixels_(row, col); }
  const Field& field() const noexcept { return pixels_; }
  std::span<const double> values() const noexcept { return pixels_.values(); }

  static constexpr double x_of(int col) noexcept { return col + 0.5; }
  static constexpr double y_of(int row) noexcept { return row + 0.5; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  Field pixels_;
};

/// Affine map x' = A x + T on continuous pixel coordinates.
struct AffineParams {
  double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;
  double t1 = 0.0, t2 = 0.0;

  double det() const noexcept { return a11 * a22 - a12 * a21; }
  bool singular() const noexcept;

  /// The map (x, y) -> (x', y').
  void apply(double x, double y, double& xo, double& yo) const noexcept {
    xo = a11 * x + a12 * y + t1;
    yo = a21 * x + a22 * y + t2;
  }

  AffineParams inverse() const;
  /// this ∘ other: apply `other` first.
  AffineParams compose(const AffineParams& other) const noexcept;
  /// Same linear part, translation chosen so that `from` maps onto `to`.
  AffineParams anchored(double from_x, double from_y, double to_x, double to_y) const noexcept;

  static AffineParams identity() noexcept { return {}; }
  static AffineParams translation(double tx, double ty) noexcept { return {1, 0, 0, 1, tx, ty}; }
};

inline constexpr double kSingularDeterminant = 1e-12;

/// The five affine transforms of the stability experiment (a11 a12 a21 a22 t1 t2).
std::vector<AffineParams> table4_transforms();

/// Inverse-mapping bilinear warp; samples outside `src` read as 0.
/// Throws InvalidArgument for singular params or zero output size.
Raster warp_affine(const Raster& src, const AffineParams& params, int out_width, int out_height);

// ---- file I/O -------------------------------------------------------------

/// Reads PGM (P2/P5, 8 or 16 bit) or PNG (gray, gray+alpha, RGB, RGBA; 8 or 16 bit).
/// Color is converted with luma weights (0.299, 0.587, 0.114); alpha is ignored.
/// Throws IoError.
Raster load_image(const std::filesystem::path& path);

/// Writes binary 8-bit PGM (P5), rounding intensities to 255 levels. Atomic.
void save_pgm(const Raster& raster, const std::filesystem::path& path);

/// Writes 8-bit grayscale PNG. Atomic.
void save_png(const Raster& raster, const std::filesystem::path& path);

/// Dispatches on extension (.pgm or .png).
void save_image(const Raster& raster, const std::filesystem::path& path);

// ---- synthetic images -----------------------------------------------------

enum class SyntheticKind { blob_mixture, polynomial_ramp, shape_mask };

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::blob_mixture;
  int width = 256;
  int height = 256;
  std::uint64_t seed = 1;
  /// Support is kept this fraction of min(width, height) away from every edge.
  double margin_fraction = 0.25;

  // blob_mixture: `blob_count` anisotropic Gaussians with random centre,
  // orientation and amplitude; sigma drawn from [sigma_min, sigma_max] px.
  // The 3-sigma ellipse of each blob stays inside the margin.
  int blob_count = 3;
  double sigma_min = 0.0;  // 0 -> 3% of min dimension
  double sigma_max = 0.0;  // 0 -> 5% of min dimension
  double max_aspect = 1.6;
  /// When true the first blob is isotropic and centred (seed ignored for it).
  bool centered_single = false;

  // polynomial_ramp: f = c0 + cx*x + cy*y + cxx*x^2 + cxy*x*y + cyy*y^2, clamped to [0, 1].
  double c0 = 0.5, cx = 0.001, cy = 0.0, cxx = 0.0, cxy = 0.0, cyy = 0.0;

  // shape_mask: `blob_count` random ellipses and triangles, each with its own grey
  // level in [0.3, 1] (overlaps take the brighter one), antialiased
  // by 4x4 supersampling.
};

/// Deterministic for a given spec. Throws InvalidArgument on a degenerate spec.
Raster generate_synthetic(const SyntheticSpec& spec);

}  // namespace awmi
