#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "awmi/invariants.hpp"
#include "awmi/raster.hpp"

namespace awmi {

/// (max - min) / (|max| + |min|) * 100. nullopt for an empty list or when
/// |max| + |min| == 0.
std::optional<double> stability_error(std::span<const double> values);

/// Mean over jointly defined components of |a - b| / (|a| + |b|); a pair of
/// zeros contributes 0. +infinity when no component is defined in both.
/// Throws InvalidArgument if the two vectors list different invariants.
double chi2_mod_distance(const FeatureVector& v1, const FeatureVector& v2);

struct LabeledFeatures {
  std::string id;
  std::string label;
  FeatureVector features;
};

struct RankedItem {
  std::string id;
  double distance = 0.0;
  bool relevant = false;
};

struct RetrievalRun {
  std::string query;
  std::vector<RankedItem> ranking;  // query excluded
  int relevant_total = 0;

  /// Relevant items among the first `rank` results.
  int hits_at(int rank) const;
  double precision_at(int rank) const;
  double recall_at(int rank) const;
};

struct PRPoint {
  double recall = 0.0;
  double precision = 0.0;
};

struct PRCurve {
  /// Mean over queries of the interpolated precision max_{r' >= r} p(r') at
  /// recall r = 0.0, 0.1, ..., 1.0.
  std::vector<PRPoint> interpolated;
  /// Mean (recall, precision) at each rank cutoff 1..N-1.
  std::vector<PRPoint> by_rank;

  /// Interpolated precision at one of the 11 standard levels.
  double precision_at_recall(double recall) const;
};

inline constexpr const char* kPrAveraging = "11-point interpolated precision, averaged over queries";

struct RetrievalResult {
  PRCurve curve;
  std::vector<RetrievalRun> runs;
  int skipped = 0;
};

/// Ranks every item against every other (query excluded from its own list).
/// Ties are broken by position in `items`. Throws InvalidArgument unless there
/// are >= 2 labels and every label has >= 2 items.
RetrievalResult retrieve(std::span<const LabeledFeatures> items);

struct DatasetEntry {
  std::string id;     // "<class>/<file>"
  std::string label;  // class directory name
  std::filesystem::path path;
};

/// Lists `<root>/<class>/<image>.{png,pgm}` in sorted order. Throws IoError if
/// root is not a directory or holds no images.
std::vector<DatasetEntry> scan_dataset(const std::filesystem::path& root);

/// Loads, extracts features (in parallel) and retrieves. Unreadable images are
/// skipped and counted.
RetrievalResult run_retrieval(const std::filesystem::path& root, const FeatureConfig& config);

struct LabeledRaster {
  std::string id;
  std::string label;
  Raster raster;
};

/// Extracts features for every raster in parallel; order preserved.
std::vector<LabeledFeatures> extract_all(std::span<const LabeledRaster> items, const FeatureConfig& config);

struct SyntheticDatasetSpec {
  int classes = 20;
  int size = 192;
  std::uint64_t seed = 1;
  SyntheticKind kind = SyntheticKind::shape_mask;
  int shapes_per_class = 4;
};

/// `classes` procedural blob-mixture bases, each with its identity variant and
/// the five fixed affine variants warped about the frame centre.
std::vector<LabeledRaster> synthetic_dataset(const SyntheticDatasetSpec& spec);

/// Writes a dataset as `<root>/<label>/<name>.png`.
void write_dataset(std::span<const LabeledRaster> items, const std::filesystem::path& root);

struct StabilityRow {
  std::string image;
  InvariantId id;
  std::vector<double> values;  // original, then one per transform
  std::vector<bool> defined;
  std::optional<double> error_pct;
};

struct StabilityReport {
  std::vector<std::string> variants;  // "identity", "T1", ...
  std::vector<StabilityRow> rows;
  std::vector<std::string> warnings;

  /// Largest error for `id` across images; nullopt if any was undefined.
  std::optional<double> worst_error(InvariantId id) const;
};

/// How a transform's linear part is placed in the output frame.
enum class Anchor {
  /// Use the parameters verbatim.
  literal,
  /// Keep A, drop T, map the source centroid to the output frame centre.
  centroid_to_center,
};

struct StabilityOptions {
  Anchor anchor = Anchor::centroid_to_center;
  /// A variant warns when its mass differs from |det A| * mass by more than this
  /// fraction. Hard edges lose about 0.2% to bilinear resampling.
  double mass_tolerance = 1e-2;
};

/// Returns the warp actually applied for `params` under `anchor`.
AffineParams placed_transform(const Raster& src, const AffineParams& params, Anchor anchor);

StabilityReport run_stability(std::span<const LabeledRaster> bases, std::span<const AffineParams> transforms,
                              const FeatureConfig& config, const StabilityOptions& options = {});

}  // namespace awmi
