#include "awmi/retrieval.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <set>

#include "awmi/error.hpp"
#include "awmi/moments.hpp"
#include "awmi/report.hpp"

namespace awmi {

namespace fs = std::filesystem;

std::optional<double> stability_error(std::span<const double> values) {
  if (values.empty()) return std::nullopt;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double denom = std::abs(*hi) + std::abs(*lo);
  if (!(denom > 0.0)) return std::nullopt;
  return (*hi - *lo) / denom * 100.0;
}

double chi2_mod_distance(const FeatureVector& v1, const FeatureVector& v2) {
  if (v1.size() != v2.size()) throw InvalidArgument("feature vectors differ in length");
  double total = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < v1.size(); ++i) {
    if (v1[i].id != v2[i].id) throw InvalidArgument("feature vectors list different invariants");
    if (!v1[i].defined || !v2[i].defined) continue;
    const double a = v1[i].value, b = v2[i].value;
    const double denom = std::abs(a) + std::abs(b);
    total += denom > 0.0 ? std::abs(a - b) / denom : 0.0;
    ++count;
  }
  if (count == 0) return std::numeric_limits<double>::infinity();
  return total / count;
}

int RetrievalRun::hits_at(int rank) const {
  int hits = 0;
  const int n = std::min<int>(rank, static_cast<int>(ranking.size()));
  for (int i = 0; i < n; ++i) hits += ranking[i].relevant;
  return hits;
}

double RetrievalRun::precision_at(int rank) const { return rank > 0 ? static_cast<double>(hits_at(rank)) / rank : 0.0; }

double RetrievalRun::recall_at(int rank) const {
  return relevant_total > 0 ? static_cast<double>(hits_at(rank)) / relevant_total : 0.0;
}

double PRCurve::precision_at_recall(double recall) const {
  for (const auto& p : interpolated) {
    if (std::abs(p.recall - recall) < 1e-9) return p.precision;
  }
  throw InvalidArgument("recall level not on the 11-point grid");
}

RetrievalResult retrieve(std::span<const LabeledFeatures> items) {
  std::map<std::string, int> per_label;
  for (const auto& it : items) ++per_label[it.label];
  if (per_label.size() < 2) throw InvalidArgument("retrieval needs at least two classes");
  for (const auto& [label, n] : per_label) {
    if (n < 2) throw InvalidArgument("class '" + label + "' has fewer than two images");
  }
  const int n = static_cast<int>(items.size());
  RetrievalResult res;
  res.runs.resize(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (int q = 0; q < n; ++q) {
    std::vector<std::pair<double, int>> order;
    order.reserve(n - 1);
    for (int j = 0; j < n; ++j) {
      if (j != q) order.emplace_back(chi2_mod_distance(items[q].features, items[j].features), j);
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first || (a.first == b.first && a.second < b.second); });
    RetrievalRun& run = res.runs[q];
    run.query = items[q].id;
    run.relevant_total = per_label.at(items[q].label) - 1;
    for (const auto& [d, j] : order) run.ranking.push_back({items[j].id, d, items[j].label == items[q].label});
  }

  const int cutoffs = n - 1;
  std::vector<double> prec_sum(cutoffs, 0.0), rec_sum(cutoffs, 0.0);
  std::vector<double> interp_sum(11, 0.0);
  for (const RetrievalRun& run : res.runs) {
    std::vector<double> prec(cutoffs), rec(cutoffs);
    int hits = 0;
    for (int r = 1; r <= cutoffs; ++r) {
      hits += run.ranking[r - 1].relevant;
      prec[r - 1] = static_cast<double>(hits) / r;
      rec[r - 1] = static_cast<double>(hits) / run.relevant_total;
      prec_sum[r - 1] += prec[r - 1];
      rec_sum[r - 1] += rec[r - 1];
    }
    for (int l = 0; l <= 10; ++l) {
      const double level = l / 10.0;
      double best = 0.0;
      for (int r = 0; r < cutoffs; ++r) {
        if (rec[r] >= level - 1e-12) best = std::max(best, prec[r]);
      }
      interp_sum[l] += best;
    }
  }
  for (int r = 0; r < cutoffs; ++r) res.curve.by_rank.push_back({rec_sum[r] / n, prec_sum[r] / n});
  for (int l = 0; l <= 10; ++l) res.curve.interpolated.push_back({l / 10.0, interp_sum[l] / n});
  return res;
}

std::vector<DatasetEntry> scan_dataset(const fs::path& root) {
  if (!fs::is_directory(root)) throw IoError("dataset root is not a directory: " + root.string());
  std::vector<DatasetEntry> out;
  std::vector<fs::path> classes;
  for (const auto& e : fs::directory_iterator(root)) {
    if (e.is_directory()) classes.push_back(e.path());
  }
  std::sort(classes.begin(), classes.end());
  for (const auto& cls : classes) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(cls)) {
      if (!e.is_regular_file()) continue;
      std::string ext = e.path().extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
      if (ext == ".png" || ext == ".pgm") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    const std::string label = cls.filename().string();
    for (const auto& f : files) out.push_back({label + "/" + f.filename().string(), label, f});
  }
  if (out.empty()) throw IoError("no images found under " + root.string());
  return out;
}

std::vector<LabeledFeatures> extract_all(std::span<const LabeledRaster> items, const FeatureConfig& config) {
  const int n = static_cast<int>(items.size());
  std::vector<LabeledFeatures> out(n);
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < n; ++i) {
    try {
      out[i] = {items[i].id, items[i].label, feature_vector(items[i].raster, config)};
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

RetrievalResult run_retrieval(const fs::path& root, const FeatureConfig& config) {
  const auto entries = scan_dataset(root);
  std::vector<LabeledRaster> images;
  int skipped = 0;
  for (const auto& e : entries) {
    try {
      images.push_back({e.id, e.label, load_image(e.path)});
    } catch (const IoError&) {
      ++skipped;
    }
  }
  const auto feats = extract_all(images, config);
  RetrievalResult res = retrieve(feats);
  res.skipped = skipped;
  return res;
}

std::vector<LabeledRaster> synthetic_dataset(const SyntheticDatasetSpec& spec) {
  if (spec.classes < 2) throw InvalidArgument("synthetic dataset needs at least two classes");
  std::vector<LabeledRaster> out;
  const auto transforms = table4_transforms();
  for (int c = 0; c < spec.classes; ++c) {
    SyntheticSpec s;
    s.kind = spec.kind;
    s.width = s.height = spec.size;
    s.seed = spec.seed * 1000003ULL + static_cast<std::uint64_t>(c);
    s.blob_count = spec.shapes_per_class;
    const Raster base = generate_synthetic(s);
    char label[32];
    std::snprintf(label, sizeof label, "class_%02d", c);
    out.push_back({std::string(label) + "/v0", label, base});
    for (std::size_t t = 0; t < transforms.size(); ++t) {
      const AffineParams p = placed_transform(base, transforms[t], Anchor::centroid_to_center);
      out.push_back({std::string(label) + "/v" + std::to_string(t + 1), label,
                     warp_affine(base, p, base.width(), base.height())});
    }
  }
  return out;
}

void write_dataset(std::span<const LabeledRaster> items, const fs::path& root) {
  for (const auto& it : items) {
    const fs::path dir = root / it.label;
    fs::create_directories(dir);
    const std::string leaf = it.id.substr(it.id.find('/') + 1);
    save_png(it.raster, dir / (leaf + ".png"));
  }
}

std::optional<double> StabilityReport::worst_error(InvariantId id) const {
  std::optional<double> worst;
  for (const auto& row : rows) {
    if (row.id != id) continue;
    if (!row.error_pct) return std::nullopt;
    worst = std::max(worst.value_or(0.0), *row.error_pct);
  }
  return worst;
}

AffineParams placed_transform(const Raster& src, const AffineParams& params, Anchor anchor) {
  if (anchor == Anchor::literal) return params;
  const Centroid c = centroid(src);
  return params.anchored(c.x, c.y, 0.5 * src.width(), 0.5 * src.height());
}

namespace {

/// True when the warp maps part of the source support (pixels above 1e-6 of
/// the peak) outside the output frame.
bool support_clipped(const Raster& src, const AffineParams& p, int out_w, int out_h) {
  const double floor = 1e-6 * *std::max_element(src.values().begin(), src.values().end());
  for (int r = 0; r < src.height(); ++r) {
    for (int c = 0; c < src.width(); ++c) {
      if (!(src(r, c) > floor)) continue;
      double u = 0.0, v = 0.0;
      p.apply(Raster::x_of(c), Raster::y_of(r), u, v);
      if (u < 0.0 || v < 0.0 || u > out_w || v > out_h) return true;
    }
  }
  return false;
}

}  // namespace

StabilityReport run_stability(std::span<const LabeledRaster> bases, std::span<const AffineParams> transforms,
                              const FeatureConfig& config, const StabilityOptions& options) {
  for (const auto& t : transforms) {
    if (t.singular()) throw InvalidArgument("stability transform is singular");
  }
  StabilityReport rep;
  rep.variants.push_back("identity");
  for (std::size_t t = 0; t < transforms.size(); ++t) rep.variants.push_back("T" + std::to_string(t + 1));

  for (const auto& base : bases) {
    std::vector<LabeledRaster> variants{{base.id, base.label, base.raster}};
    const double mass = geometric_moment(base.raster, 0, 0);
    const int w = base.raster.width(), h = base.raster.height();
    for (std::size_t t = 0; t < transforms.size(); ++t) {
      const AffineParams p = placed_transform(base.raster, transforms[t], options.anchor);
      const std::string tag = base.id + " " + rep.variants[t + 1] + ": ";
      if (support_clipped(base.raster, p, w, h)) rep.warnings.push_back(tag + "warped support leaves the frame");
      Raster warped = warp_affine(base.raster, p, w, h);
      const double expected = std::abs(p.det()) * mass;
      const double got = geometric_moment(warped, 0, 0);
      if (std::abs(got - expected) > options.mass_tolerance * expected) {
        rep.warnings.push_back(tag + "warped mass " + format_double(got) + " differs from |det A| * mass " +
                               format_double(expected));
      }
      variants.push_back({base.id, base.label, std::move(warped)});
    }
    const auto feats = extract_all(variants, config);
    for (std::size_t k = 0; k < config.ids.size(); ++k) {
      StabilityRow row;
      row.image = base.id;
      row.id = config.ids[k];
      bool all_defined = true;
      for (const auto& f : feats) {
        row.values.push_back(f.features[k].value);
        row.defined.push_back(f.features[k].defined);
        all_defined = all_defined && f.features[k].defined;
      }
      if (all_defined) row.error_pct = stability_error(row.values);
      rep.rows.push_back(std::move(row));
    }
  }
  return rep;
}

}  // namespace awmi
