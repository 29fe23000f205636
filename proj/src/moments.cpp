#include "awmi/moments.hpp"

#include <string>

#include "awmi/error.hpp"
#include "awmi/kernels.hpp"

namespace awmi {

namespace {

kernels::MomentInputs inputs_of(const Raster& raster, double cx, double cy) {
  kernels::MomentInputs in;
  in.width = raster.width();
  in.height = raster.height();
  in.f = raster.values();
  in.cx = cx;
  in.cy = cy;
  return in;
}

kernels::MomentInputs inputs_of(const Raster& raster, const DerivativeStack& stack, const Centroid& c) {
  if (stack.width() != raster.width() || stack.height() != raster.height()) {
    throw InvalidArgument("derivative stack does not match raster dimensions");
  }
  auto in = inputs_of(raster, c.x, c.y);
  in.fx = stack.fx.values();
  in.fy = stack.fy.values();
  in.fxx = stack.fxx.values();
  in.fyy = stack.fyy.values();
  in.fxy = stack.fxy.values();
  return in;
}

Centroid centroid_with_mass(const Raster& raster, double& mass) {
  const DMKey keys[] = {{0, 0}, {1, 0}, {0, 1}};
  const auto v = kernels::parallel::moment_sums(inputs_of(raster, 0.0, 0.0), keys);
  mass = v[0];
  if (!(mass > 0.0)) throw UndefinedError("centroid undefined: raster has zero mass");
  return {v[1] / mass, v[2] / mass};
}

}  // namespace

double geometric_moment(const Raster& raster, int p, int q) {
  if (p < 0 || q < 0) throw InvalidArgument("moment orders must be nonnegative");
  const DMKey key{p, q};
  return kernels::parallel::moment_sums(inputs_of(raster, 0.0, 0.0), {&key, 1})[0];
}

Centroid centroid(const Raster& raster) {
  double mass = 0.0;
  return centroid_with_mass(raster, mass);
}

double central_moment(const Raster& raster, int p, int q) {
  if (p < 0 || q < 0) throw InvalidArgument("moment orders must be nonnegative");
  const Centroid c = centroid(raster);
  const DMKey key{p, q};
  return kernels::parallel::moment_sums(inputs_of(raster, c.x, c.y), {&key, 1})[0];
}

MomentTable MomentTable::build(const Raster& raster, int max_order) {
  if (max_order < 0) throw InvalidArgument("moment order must be nonnegative");
  MomentTable t;
  t.max_order_ = max_order;
  t.centroid_ = centroid_with_mass(raster, t.m00_);
  std::vector<DMKey> keys;
  for (int o = 0; o <= max_order; ++o) {
    for (int q = 0; q <= o; ++q) keys.push_back({o - q, q});
  }
  t.values_ = kernels::parallel::moment_sums(inputs_of(raster, t.centroid_.x, t.centroid_.y), keys);
  return t;
}

double MomentTable::u(int p, int q) const {
  if (p < 0 || q < 0 || p + q > max_order_) {
    throw InvalidArgument("central moment u" + std::to_string(p) + std::to_string(q) + " not in table");
  }
  const int o = p + q;
  return values_[static_cast<std::size_t>(o * (o + 1) / 2 + q)];
}

std::string DMKey::label() const {
  std::string out = "D" + std::to_string(p) + std::to_string(q) + "_" + std::to_string(m) + std::to_string(n);
  if (!first_order()) out += std::to_string(r) + std::to_string(s) + std::to_string(t);
  return out;
}

double dm_first(const Raster& raster, const DerivativeStack& stack, const DMKey& key) {
  if (!key.first_order()) throw InvalidArgument("dm_first called with second-derivative powers");
  return dm_second(raster, stack, key);
}

double dm_second(const Raster& raster, const DerivativeStack& stack, const DMKey& key) {
  if (!key.valid()) throw InvalidArgument("differential moment indices must be nonnegative");
  const Centroid c = centroid(raster);
  return kernels::parallel::moment_sums(inputs_of(raster, stack, c), {&key, 1})[0];
}

const std::vector<DMKey>& DMTable::standard_keys() {
  static const std::vector<DMKey> keys = [] {
    std::vector<DMKey> k;
    for (int o = 0; o <= 3; ++o) {
      for (int q = 0; q <= o; ++q) {
        k.push_back({o - q, q, 0, 0});
        k.push_back({o - q, q, 1, 0});
        k.push_back({o - q, q, 0, 1});
      }
    }
    // fxx fyy, fxy^2, fy^2 fxx, fx fy fxy, fx^2 fyy
    k.push_back({0, 0, 0, 0, 1, 1, 0});
    k.push_back({0, 0, 0, 0, 0, 0, 2});
    k.push_back({0, 0, 0, 2, 1, 0, 0});
    k.push_back({0, 0, 1, 1, 0, 0, 1});
    k.push_back({0, 0, 2, 0, 0, 1, 0});
    return k;
  }();
  return keys;
}

DMTable DMTable::build(const Raster& raster, const DerivativeStack& stack) {
  return build(raster, stack, standard_keys());
}

DMTable DMTable::build(const Raster& raster, const DerivativeStack& stack, std::span<const DMKey> keys) {
  for (const auto& k : keys) {
    if (!k.valid()) throw InvalidArgument("differential moment indices must be nonnegative");
  }
  DMTable t;
  t.centroid_ = centroid_with_mass(raster, t.mass_);
  t.config_ = stack.config;
  const auto vals = kernels::parallel::moment_sums(inputs_of(raster, stack, t.centroid_), keys);
  for (std::size_t i = 0; i < keys.size(); ++i) t.values_[keys[i]] = vals[i];
  return t;
}

double DMTable::at(const DMKey& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw InvalidArgument("differential moment " + key.label() + " not in table");
  return it->second;
}

}  // namespace awmi
