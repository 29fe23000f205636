// awmi: command-line front end for feature extraction, warping, oracle
// verification and the stability / retrieval experiments.

#include <omp.h>

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "awmi/error.hpp"
#include "awmi/invariants.hpp"
#include "awmi/moments.hpp"
#include "awmi/oracle.hpp"
#include "awmi/raster.hpp"
#include "awmi/report.hpp"
#include "awmi/retrieval.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace awmi;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitVerify = 3;

struct VerifyFailed {};

struct CommonOptions {
  double sigma = 3.0;
  int kernel_size = 9;
  std::string boundary = "reflect";
  std::string kernel_norm = "moment-corrected";
  int jobs = 0;
  std::string format = "csv";
  std::string features = "awmi";
  bool signed_log = false;
  std::string output_dir;
  std::uint64_t seed = 1;
};

struct RunConfig {
  std::string subcommand;
  CommonOptions common;
  std::vector<std::string> inputs;
  json extra = json::object();

  json to_json() const {
    json j;
    j["subcommand"] = subcommand;
    j["inputs"] = inputs;
    j["diff"] = {{"sigma", common.sigma},
                 {"kernel_size", common.kernel_size},
                 {"boundary", common.boundary},
                 {"kernel_normalization", common.kernel_norm}};
    j["features"] = common.features;
    j["signed_log"] = common.signed_log;
    j["seed"] = common.seed;
    j["output_dir"] = common.output_dir;
    j["format"] = common.format;
    for (const auto& [k, v] : extra.items()) j[k] = v;
    return j;
  }
};

DiffConfig diff_config(const CommonOptions& o) {
  DiffConfig d;
  d.sigma = o.sigma;
  d.kernel_size = o.kernel_size;
  d.boundary = o.boundary == "zero" ? Boundary::zero : Boundary::reflect;
  d.normalization =
      o.kernel_norm == "sampled" ? KernelNormalization::sampled : KernelNormalization::moment_corrected;
  d.validate();
  return d;
}

std::vector<InvariantId> feature_ids(const std::string& set) {
  if (set == "awmi") return FeatureConfig::default_ids();
  if (set == "ami") return FeatureConfig::ami_ids();
  auto ids = FeatureConfig::ami_ids();
  for (auto id : FeatureConfig::default_ids()) ids.push_back(id);
  return ids;
}

std::vector<std::string> metadata_lines(const RunConfig& rc) {
  return {"awmi " + std::string(kVersion), "run_config: " + rc.to_json().dump(), "seed: " + std::to_string(rc.common.seed)};
}

json metadata_json(const RunConfig& rc) {
  return {{"tool", "awmi"}, {"version", std::string(kVersion)}, {"run_config", rc.to_json()}, {"seed", rc.common.seed}};
}

/// A table rendered either as CSV (with "# " metadata) or as JSON rows.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  json extra_meta = json::object();

  std::string render(const RunConfig& rc) const {
    if (rc.common.format == "json") {
      json j;
      j["metadata"] = metadata_json(rc);
      for (const auto& [k, v] : extra_meta.items()) j["metadata"][k] = v;
      j["columns"] = columns;
      j["rows"] = rows;
      return j.dump(2) + "\n";
    }
    CsvWriter w;
    for (auto& line : metadata_lines(rc)) w.metadata(std::move(line));
    for (const auto& [k, v] : extra_meta.items()) w.metadata(k + ": " + (v.is_string() ? v.get<std::string>() : v.dump()));
    w.header(columns);
    for (const auto& r : rows) w.row(r);
    return w.str();
  }
};

void emit(const RunConfig& rc, const Table& table, const std::string& filename) {
  const std::string text = table.render(rc);
  if (rc.common.output_dir.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(rc.common.output_dir);
  fs::path name = filename;
  if (rc.common.format == "json") name.replace_extension(".json");
  const fs::path out = fs::path(rc.common.output_dir) / name;
  write_atomic(out, text);
  std::cerr << "wrote " << out.string() << "\n";
}

void ensure_parent(const fs::path& file) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
}

std::string value_field(const FeatureEntry& e) { return e.defined ? format_double(e.value) : ""; }

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw InvalidArgument("not a number: '" + token + "'");
    }
  }
  return out;
}

AffineParams params_from(const std::vector<double>& v) {
  if (v.size() != 6) throw InvalidArgument("an affine transform needs six numbers a11,a12,a21,a22,t1,t2");
  AffineParams p{v[0], v[1], v[2], v[3], v[4], v[5]};
  if (p.singular()) throw InvalidArgument("affine transform is singular");
  return p;
}

std::vector<AffineParams> parse_transforms(const std::string& text) {
  if (text == "table4") return table4_transforms();
  std::vector<AffineParams> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ';')) {
    if (!item.empty()) out.push_back(params_from(parse_numbers(item)));
  }
  if (out.empty()) throw InvalidArgument("no transforms given");
  return out;
}

// ---- subcommands ------------------------------------------------------------

void cmd_features(const RunConfig& rc) {
  FeatureConfig cfg;
  cfg.ids = feature_ids(rc.common.features);
  cfg.diff = diff_config(rc.common);
  std::vector<LabeledRaster> images;
  for (const auto& in : rc.inputs) images.push_back({in, "", load_image(in)});
  const auto feats = extract_all(images, cfg);
  Table t;
  t.columns.push_back("image");
  for (auto id : cfg.ids) t.columns.emplace_back(name(id));
  for (const auto& f : feats) {
    const FeatureVector v = rc.common.signed_log ? signed_log(f.features) : f.features;
    std::vector<std::string> row{f.id};
    for (const auto& e : v.entries) row.push_back(value_field(e));
    t.rows.push_back(std::move(row));
  }
  emit(rc, t, "features.csv");
}

void cmd_warp(const RunConfig& rc, const std::string& affine, const std::string& output, int width, int height,
              bool centroid_anchor) {
  const Raster src = load_image(rc.inputs.at(0));
  const AffineParams given = params_from(parse_numbers(affine));
  const AffineParams p = placed_transform(src, given, centroid_anchor ? Anchor::centroid_to_center : Anchor::literal);
  const Raster out = warp_affine(src, p, width > 0 ? width : src.width(), height > 0 ? height : src.height());
  ensure_parent(output);
  save_image(out, output);
  std::cerr << "wrote " << output << "\n";
}

void cmd_moments(const RunConfig& rc, int max_order) {
  const Raster img = load_image(rc.inputs.at(0));
  const auto m = MomentTable::build(img, max_order);
  const DiffConfig diff = diff_config(rc.common);
  const auto dms = DMTable::build(img, derivative_stack(img, diff));
  json j;
  j["metadata"] = metadata_json(rc);
  j["image"] = rc.inputs.at(0);
  j["m00"] = m.m00();
  j["centroid"] = {m.centroid().x, m.centroid().y};
  json central = json::object();
  for (int order = 0; order <= max_order; ++order) {
    for (int q = 0; q <= order; ++q) central["u" + std::to_string(order - q) + std::to_string(q)] = m.u(order - q, q);
  }
  j["central"] = central;
  json dm = json::object();
  for (const auto& key : DMTable::standard_keys()) dm[key.label()] = dms.at(key);
  j["differential"] = dm;
  const std::string text = j.dump(2) + "\n";
  if (rc.common.output_dir.empty()) {
    std::cout << text;
  } else {
    fs::create_directories(rc.common.output_dir);
    write_atomic(fs::path(rc.common.output_dir) / "moments.json", text);
  }
}

void cmd_verify(const RunConfig& rc, const std::string& subject, int trials) {
  VerifyOptions opts;
  opts.diff = diff_config(rc.common);
  std::vector<VerifyReport> reports;
  auto run_one = [&](const std::string& s) {
    if (s == "AMI1" || s == "AMI3" || s == "AMI6") {
      reports.push_back(verify_zero_core(s[3] - '0', trials, rc.common.seed, opts));
    } else if (auto id = parse_invariant(s); id && oracle_spec(*id)) {
      reports.push_back(verify_expansion(*id, trials, rc.common.seed, opts));
    } else {
      throw InvalidArgument("no oracle for '" + s + "'");
    }
  };
  if (subject == "all") {
    for (auto id : kAllInvariants) {
      if (oracle_spec(id)) run_one(std::string(name(id)));
    }
    for (const char* z : {"AMI1", "AMI3", "AMI6"}) run_one(z);
  } else {
    run_one(subject);
  }
  Table t;
  t.columns = {"subject", "trial", "width", "height", "closed_form", "oracle", "magnitude", "rel_deviation", "tolerance", "passed"};
  bool ok = true;
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < r.results.size(); ++i) {
      const auto& tr = r.results[i];
      t.rows.push_back({r.subject, std::to_string(i), std::to_string(tr.width), std::to_string(tr.height),
                        format_double(tr.closed_form), format_double(tr.oracle), format_double(tr.magnitude),
                        format_double(tr.rel_deviation), format_double(r.tolerance),
                        tr.rel_deviation <= r.tolerance ? "1" : "0"});
    }
    std::cerr << (r.passed ? "PASS " : "FAIL ") << r.subject << " (" << r.spec << "): max rel deviation "
              << format_double(r.max_rel_deviation) << " tol " << format_double(r.tolerance) << "\n";
    ok = ok && r.passed;
  }
  emit(rc, t, "verify.csv");
  if (!ok) throw VerifyFailed{};
}

void cmd_stability(const RunConfig& rc, const std::string& transforms, int synthetic, int size, bool literal) {
  FeatureConfig cfg;
  cfg.ids = feature_ids(rc.common.features);
  cfg.diff = diff_config(rc.common);
  std::vector<LabeledRaster> bases;
  for (const auto& in : rc.inputs) bases.push_back({in, "", load_image(in)});
  for (int i = 0; i < synthetic; ++i) {
    SyntheticSpec s;
    s.width = s.height = size;
    s.seed = rc.common.seed + static_cast<std::uint64_t>(i);
    bases.push_back({"synthetic_" + std::to_string(i), "", generate_synthetic(s)});
  }
  if (bases.empty()) throw InvalidArgument("stability needs --input images or --synthetic N");
  const auto ts = parse_transforms(transforms);
  StabilityOptions opts;
  opts.anchor = literal ? Anchor::literal : Anchor::centroid_to_center;
  const auto rep = run_stability(bases, ts, cfg, opts);
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
  Table t;
  t.columns = {"image", "invariant"};
  for (const auto& v : rep.variants) t.columns.push_back(v);
  t.columns.push_back("error_pct");
  for (const auto& row : rep.rows) {
    std::vector<std::string> r{row.image, std::string(name(row.id))};
    for (std::size_t k = 0; k < row.values.size(); ++k) r.push_back(row.defined[k] ? format_double(row.values[k]) : "");
    r.push_back(row.error_pct ? format_double(*row.error_pct) : "");
    t.rows.push_back(std::move(r));
  }
  t.extra_meta["anchor"] = literal ? "literal" : "centroid_to_center";
  t.extra_meta["warnings"] = static_cast<int>(rep.warnings.size());
  emit(rc, t, "stability.csv");
}

void cmd_retrieve(const RunConfig& rc, std::string dataset, int classes, int size) {
  const DiffConfig diff = diff_config(rc.common);
  std::vector<LabeledRaster> images;
  int skipped = 0;
  if (dataset.empty()) {
    if (const char* env = std::getenv("AWMI_DATASET_ROOT")) dataset = env;
  }
  if (dataset.empty() || dataset == "synthetic") {
    SyntheticDatasetSpec ds;
    ds.classes = classes;
    ds.size = size;
    ds.seed = rc.common.seed;
    images = synthetic_dataset(ds);
  } else {
    for (const auto& e : scan_dataset(dataset)) {
      try {
        images.push_back({e.id, e.label, load_image(e.path)});
      } catch (const IoError& err) {
        std::cerr << "warning: skipped " << e.path.string() << ": " << err.what() << "\n";
        ++skipped;
      }
    }
  }
  std::vector<std::string> methods;
  if (rc.common.features != "ami") methods.push_back("awmi");
  if (rc.common.features != "awmi") methods.push_back("ami");
  Table t;
  t.columns = {"recall", "precision", "method"};
  t.extra_meta["pr_averaging"] = kPrAveraging;
  t.extra_meta["dataset"] = dataset.empty() ? "synthetic" : dataset;
  t.extra_meta["images"] = static_cast<int>(images.size());
  t.extra_meta["skipped"] = skipped;
  for (const auto& m : methods) {
    FeatureConfig cfg;
    cfg.ids = feature_ids(m);
    cfg.diff = diff;
    auto feats = extract_all(images, cfg);
    if (rc.common.signed_log) {
      for (auto& f : feats) f.features = signed_log(f.features);
    }
    const auto res = retrieve(feats);
    for (const auto& p : res.curve.interpolated) t.rows.push_back({format_double(p.recall), format_double(p.precision), m});
    std::cerr << m << ": precision at recall 0.5 = " << format_double(res.curve.precision_at_recall(0.5)) << "\n";
  }
  emit(rc, t, "pr_curve.csv");
}

void cmd_synth(const RunConfig& rc, const std::string& kind, const std::string& output, int size, int classes) {
  if (kind == "dataset") {
    SyntheticDatasetSpec ds;
    ds.classes = classes;
    ds.size = size;
    ds.seed = rc.common.seed;
    write_dataset(synthetic_dataset(ds), output);
    std::cerr << "wrote dataset under " << output << "\n";
    return;
  }
  SyntheticSpec s;
  s.width = s.height = size;
  s.seed = rc.common.seed;
  s.kind = kind == "ramp" ? SyntheticKind::polynomial_ramp
           : kind == "shapes" ? SyntheticKind::shape_mask
                              : SyntheticKind::blob_mixture;
  ensure_parent(output);
  save_image(generate_synthetic(s), output);
  std::cerr << "wrote " << output << "\n";
}

void add_common(CLI::App* sub, CommonOptions& o, bool with_features) {
  sub->add_option("--sigma", o.sigma, "Gaussian derivative scale in pixels")->check(CLI::PositiveNumber);
  sub->add_option("--kernel-size", o.kernel_size, "odd kernel width");
  sub->add_option("--boundary", o.boundary, "border handling")->check(CLI::IsMember({"reflect", "zero"}));
  sub->add_option("--kernel-norm", o.kernel_norm, "derivative kernel normalization")
      ->check(CLI::IsMember({"sampled", "moment-corrected"}));
  sub->add_option("--jobs", o.jobs, "worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);
  sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--output-dir", o.output_dir, "directory for output files (default: stdout)");
  sub->add_option("--seed", o.seed, "random seed");
  if (with_features) {
    sub->add_option("--features", o.features, "invariant set")->check(CLI::IsMember({"awmi", "ami", "both"}));
    sub->add_flag("--signed-log", o.signed_log, "apply sign(v) log10(1 + |v| / 1e-12) to feature values");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Affine weighted moment invariants of grayscale images"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  RunConfig rc;
  CommonOptions& o = rc.common;

  auto* features = app.add_subcommand("features", "compute invariants of images");
  features->add_option("inputs", rc.inputs, "PGM or PNG images")->required()->check(CLI::ExistingFile);
  add_common(features, o, true);

  std::string single_input, affine, output;
  int out_w = 0, out_h = 0;
  bool centroid_anchor = false;
  auto* warp = app.add_subcommand("warp", "apply an affine transform x' = A x + T");
  warp->add_option("input", single_input, "source image")->required()->check(CLI::ExistingFile);
  warp->add_option("output", output, "destination (.png or .pgm)")->required();
  warp->add_option("--affine", affine, "a11,a12,a21,a22,t1,t2")->required();
  warp->add_option("--width", out_w, "output width (default: source width)");
  warp->add_option("--height", out_h, "output height (default: source height)");
  warp->add_flag("--centroid-anchor", centroid_anchor, "apply A about the centroid and place it at the frame centre");
  add_common(warp, o, false);

  int max_order = 3;
  auto* moments = app.add_subcommand("moments", "central and differential moments as JSON");
  moments->add_option("input", single_input, "image")->required()->check(CLI::ExistingFile);
  moments->add_option("--max-order", max_order, "highest central moment order")->check(CLI::Range(0, 12));
  add_common(moments, o, false);

  std::string subject = "all";
  int trials = 20;
  auto* verify = app.add_subcommand("verify", "check closed forms against brute-force Core/DCore sums");
  verify->add_option("--invariant", subject, "AMI2, AMI7, AWMI1_1..AWMI1_8, AMI1/3/6 (zero cores) or all");
  verify->add_option("--trials", trials, "random rasters per subject")->check(CLI::PositiveNumber);
  add_common(verify, o, false);

  std::string transforms = "table4";
  int synthetic = 0, size = 512;
  bool literal = false;
  auto* stability = app.add_subcommand("stability", "relative spread of invariants across affine variants");
  stability->add_option("--input", rc.inputs, "base images")->check(CLI::ExistingFile);
  stability->add_option("--transforms", transforms, "'table4' or 'a11,a12,a21,a22,t1,t2;...'");
  stability->add_option("--synthetic", synthetic, "also generate N smooth blob images")->check(CLI::NonNegativeNumber);
  stability->add_option("--size", size, "synthetic image size")->check(CLI::Range(16, 8192));
  stability->add_flag("--literal", literal, "apply transforms about the origin instead of the centroid");
  add_common(stability, o, true);

  std::string dataset;
  int classes = 20, rsize = 192;
  auto* retrieve_cmd = app.add_subcommand("retrieve", "precision-recall of chi-square ranking");
  retrieve_cmd->add_option("--dataset", dataset,
                           "<root>/<class>/<image> tree, or 'synthetic' (default: $AWMI_DATASET_ROOT, else synthetic)");
  retrieve_cmd->add_option("--classes", classes, "synthetic classes")->check(CLI::Range(2, 1000));
  retrieve_cmd->add_option("--size", rsize, "synthetic image size")->check(CLI::Range(32, 4096));
  add_common(retrieve_cmd, o, true);

  std::string kind = "blob";
  int ssize = 256, sclasses = 20;
  auto* synth = app.add_subcommand("synth", "write a synthetic image or retrieval dataset");
  synth->add_option("--kind", kind, "image kind")->check(CLI::IsMember({"blob", "ramp", "shapes", "dataset"}));
  synth->add_option("output", output, "image path, or dataset root for --kind dataset")->required();
  synth->add_option("--size", ssize, "image size")->check(CLI::Range(16, 8192));
  synth->add_option("--classes", sclasses, "dataset classes")->check(CLI::Range(2, 1000));
  add_common(synth, o, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  rc.subcommand = sub->get_name();
  if (!single_input.empty()) rc.inputs.push_back(single_input);
  if (o.jobs > 0) omp_set_num_threads(o.jobs);

  try {
    if (sub == features) {
      cmd_features(rc);
    } else if (sub == warp) {
      rc.extra["affine"] = affine;
      cmd_warp(rc, affine, output, out_w, out_h, centroid_anchor);
    } else if (sub == moments) {
      rc.extra["max_order"] = max_order;
      cmd_moments(rc, max_order);
    } else if (sub == verify) {
      rc.extra["invariant"] = subject;
      rc.extra["trials"] = trials;
      cmd_verify(rc, subject, trials);
    } else if (sub == stability) {
      rc.extra["transforms"] = transforms;
      rc.extra["synthetic"] = synthetic;
      rc.extra["size"] = size;
      rc.extra["anchor"] = literal ? "literal" : "centroid_to_center";
      cmd_stability(rc, transforms, synthetic, size, literal);
    } else if (sub == retrieve_cmd) {
      rc.extra["dataset"] = dataset;
      rc.extra["classes"] = classes;
      rc.extra["size"] = rsize;
      cmd_retrieve(rc, dataset, classes, rsize);
    } else if (sub == synth) {
      cmd_synth(rc, kind, output, ssize, sclasses);
    }
  } catch (const VerifyFailed&) {
    return kExitVerify;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
