#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "awmi/diffops.hpp"
#include "awmi/invariants.hpp"
#include "awmi/raster.hpp"

namespace awmi {

/// Centred 2x2 determinant S(i, j) = x_i y_j - x_j y_i of points i < j (1-based).
struct PrimitiveRef {
  int i = 1;
  int j = 2;
  friend bool operator==(const PrimitiveRef&, const PrimitiveRef&) = default;
};

/// Product of primitives over `points` points.
class CoreSpec {
 public:
  /// Throws InvalidArgument unless 1 <= i < j <= points for every primitive,
  /// every point appears at least once, and 2 <= points <= 3.
  CoreSpec(int points, std::vector<PrimitiveRef> primitives);

  int points() const noexcept { return points_; }
  int primitive_count() const noexcept { return static_cast<int>(primitives_.size()); }
  const std::vector<PrimitiveRef>& primitives() const noexcept { return primitives_; }
  /// Number of primitives containing point i (1-based).
  int degree(int i) const;
  std::string describe() const;

 private:
  int points_;
  std::vector<PrimitiveRef> primitives_;
};

/// Core times prod_i (x_i fx_i + y_i fy_i)^k_i.
struct DCoreSpec {
  CoreSpec core;
  std::vector<int> adi_powers;  // one per point

  /// Throws InvalidArgument on size mismatch or negative powers.
  void validate() const;
  bool has_adi() const noexcept;
  std::string describe() const;
};

struct OracleValue {
  double value = 0.0;
  /// Sum of |term| over all tuples; the scale against which `value` is judged zero.
  double magnitude = 0.0;
};

inline constexpr std::uint64_t kDefaultTupleBudget = 100'000'000;

/// Literal N-fold sum over pixel tuples of prod S * prod f, centroid-centred
/// coordinates, zero pixels skipped. Throws InvalidArgument if
/// active^N exceeds `budget`.
OracleValue eval_core(const Raster& raster, const CoreSpec& spec, std::uint64_t budget = kDefaultTupleBudget);

/// As eval_core with the adi1 factors from `stack`.
OracleValue eval_dcore(const Raster& raster, const DerivativeStack& stack, const DCoreSpec& spec,
                       std::uint64_t budget = kDefaultTupleBudget);

/// Cores of the seven degree <= 3, order <= 3 affine moment invariants (k = 1..7).
CoreSpec ami_core(int k);
/// The eight DCores with max(m_i + n_i) <= 1 (k = 1..8).
DCoreSpec awmi_dcore(int k);

/// The Core/DCore whose integral a closed form reproduces; nullopt for AWMI2.
std::optional<DCoreSpec> oracle_spec(InvariantId id);

struct TrialResult {
  int width = 0;
  int height = 0;
  double closed_form = 0.0;
  double oracle = 0.0;
  double magnitude = 0.0;
  double rel_deviation = 0.0;
};

struct VerifyReport {
  std::string subject;
  std::string spec;
  int trials = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  double max_rel_deviation = 0.0;
  bool passed = false;
  std::vector<TrialResult> results;
};

struct VerifyOptions {
  int min_width = 10, max_width = 16;
  int min_height = 10, max_height = 12;
  DiffConfig diff;
  /// 0 selects the default: 1e-9 for two-point specs, 1e-6 for three-point specs.
  double tolerance = 0.0;
};

/// Uniform [0,1] noise raster, deterministic per seed on every platform.
Raster random_raster(int width, int height, std::uint64_t seed);

/// Closed-form numerator vs brute-force sum on `trials` random rasters.
/// Deviation is |closed - oracle| / |oracle|. Throws InvalidArgument for AWMI2.
VerifyReport verify_expansion(InvariantId id, int trials, std::uint64_t seed, const VerifyOptions& options = {});

/// Checks that a Core integrates to zero: deviation is |oracle| / magnitude.
VerifyReport verify_zero_core(int ami_index, int trials, std::uint64_t seed, const VerifyOptions& options = {});

}  // namespace awmi
