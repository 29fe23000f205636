#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "awmi/diffops.hpp"
#include "awmi/moments.hpp"

namespace awmi {

enum class InvariantId {
  AMI2,
  AMI7,
  AWMI1_1,
  AWMI1_2,
  AWMI1_3,
  AWMI1_4,
  AWMI1_5,
  AWMI1_6,
  AWMI1_7,
  AWMI1_8,
  AWMI2,
};

inline constexpr std::array kAllInvariants = {
    InvariantId::AMI2,    InvariantId::AMI7,    InvariantId::AWMI1_1, InvariantId::AWMI1_2,
    InvariantId::AWMI1_3, InvariantId::AWMI1_4, InvariantId::AWMI1_5, InvariantId::AWMI1_6,
    InvariantId::AWMI1_7, InvariantId::AWMI1_8, InvariantId::AWMI2,
};

std::string_view name(InvariantId id) noexcept;
std::optional<InvariantId> parse_invariant(std::string_view text) noexcept;
bool is_awmi1(InvariantId id) noexcept;

/// Weight of a Core/DCore: the numerator picks up |A|^(points + primitives)
/// under x' = Ax + T, so it is divided by mass^(points + primitives).
struct NormalizationRule {
  int points = 0;
  int primitives = 0;
  int exponent() const noexcept { return points + primitives; }
};

/// nullopt for AWMI2, which is a ratio of equal-weight integrals.
std::optional<NormalizationRule> normalization(InvariantId id) noexcept;

double ami2_numerator(const MomentTable& moments);
double ami7_numerator(const MomentTable& moments);
/// Throws UndefinedError if u00 <= 0.
double ami2(const MomentTable& moments);
double ami7(const MomentTable& moments);

/// Moment polynomial of AWMI1_k (k = 1..8). AWMI1_6 shares the AWMI1_3 code path.
/// Throws InvalidArgument if `id` is not an AWMI1 id.
double awmi1_numerator(InvariantId id, const DMTable& dms);
/// Numerator over (D^{00}_{00})^(N+m). Throws UndefinedError if the mass is <= 0.
double awmi1(InvariantId id, const DMTable& dms);

struct Awmi2Parts {
  double numerator = 0.0;    // integral of adi4 * f
  double denominator = 0.0;  // integral of adi5 * f
  double scale = 0.0;        // integral of |each adi5 term| * f, for the zero guard
  double mass = 0.0;         // integral of f
  /// nullopt when |denominator| <= 1e-12 * scale or < 1e-12 * mass.
  std::optional<double> value() const noexcept;
};

inline constexpr double kAwmi2Guard = 1e-12;

/// (D_{00110} - D_{00002}) / (D_{02100} - 2 D_{11001} + D_{20010}), all with p = q = 0.
Awmi2Parts awmi2_parts(const DMTable& dms);
std::optional<double> awmi2(const DMTable& dms);
/// Direct pixel sums of adi4 * f and adi5 * f, independent of the DM table.
Awmi2Parts awmi2_direct_parts(const Raster& raster, const DerivativeStack& stack);
std::optional<double> awmi2(const Raster& raster, const DerivativeStack& stack);

struct FeatureConfig {
  std::vector<InvariantId> ids = default_ids();
  DiffConfig diff;

  static std::vector<InvariantId> default_ids();  // AWMI1_1..AWMI1_8, AWMI2
  static std::vector<InvariantId> ami_ids();      // AMI2, AMI7
};

struct FeatureEntry {
  InvariantId id;
  double value = 0.0;
  bool defined = true;
};

struct FeatureVector {
  std::vector<FeatureEntry> entries;
  DiffConfig diff_config;

  std::size_t size() const noexcept { return entries.size(); }
  const FeatureEntry& operator[](std::size_t i) const { return entries[i]; }
  /// Throws InvalidArgument if absent.
  const FeatureEntry& get(InvariantId id) const;
};

/// Computes the derivative stack and DM table once, then every configured id in order.
/// Throws UndefinedError if the raster has zero mass.
FeatureVector feature_vector(const Raster& raster, const FeatureConfig& config = {});

/// sign(v) * log10(1 + |v| / 1e-12); undefined entries pass through.
FeatureVector signed_log(const FeatureVector& v);

}  // namespace awmi
