#include "awmi/invariants.hpp"

#include <cmath>
#include <string>

#include "awmi/error.hpp"
#include "awmi/summation.hpp"

namespace awmi {

namespace {

struct IdInfo {
  InvariantId id;
  std::string_view name;
};

constexpr IdInfo kNames[] = {
    {InvariantId::AMI2, "AMI2"},       {InvariantId::AMI7, "AMI7"},       {InvariantId::AWMI1_1, "AWMI1_1"},
    {InvariantId::AWMI1_2, "AWMI1_2"}, {InvariantId::AWMI1_3, "AWMI1_3"}, {InvariantId::AWMI1_4, "AWMI1_4"},
    {InvariantId::AWMI1_5, "AWMI1_5"}, {InvariantId::AWMI1_6, "AWMI1_6"}, {InvariantId::AWMI1_7, "AWMI1_7"},
    {InvariantId::AWMI1_8, "AWMI1_8"}, {InvariantId::AWMI2, "AWMI2"},
};

double normalized(double numerator, double mass, int exponent) {
  if (!(mass > 0.0)) throw UndefinedError("invariant undefined: zero image mass");
  return numerator / std::pow(mass, exponent);
}

// Two-point cores (weight N + m = 4).

double awmi1_1(const DMTable& D) {
  return D(0, 2, 0, 0) * D(2, 1, 0, 1) + D(0, 2, 0, 0) * D(3, 0, 1, 0) + D(0, 3, 0, 1) * D(2, 0, 0, 0) -
         2 * D(1, 1, 0, 0) * D(1, 2, 0, 1) - 2 * D(1, 1, 0, 0) * D(2, 1, 1, 0) + D(1, 2, 1, 0) * D(2, 0, 0, 0);
}

// Full integral of DCore2; the literature's table lists half of it.
double awmi1_2(const DMTable& D) {
  const double d12_01 = D(1, 2, 0, 1), d21_10 = D(2, 1, 1, 0);
  return 2 * D(0, 3, 0, 1) * D(2, 1, 0, 1) + 2 * D(0, 3, 0, 1) * D(3, 0, 1, 0) - 2 * d12_01 * d12_01 -
         4 * d12_01 * d21_10 + 2 * D(1, 2, 1, 0) * D(2, 1, 0, 1) + 2 * D(1, 2, 1, 0) * D(3, 0, 1, 0) -
         2 * d21_10 * d21_10;
}

// Three points, two primitives (weight 5).

double awmi1_3(const DMTable& D) {
  const double d02_00 = D(0, 2, 0, 0), d11_01 = D(1, 1, 0, 1), d20_10 = D(2, 0, 1, 0);
  const double d02_01 = D(0, 2, 0, 1), d20_00 = D(2, 0, 0, 0), d11_00 = D(1, 1, 0, 0), d11_10 = D(1, 1, 1, 0);
  return d02_00 * d11_01 * d11_01 + 2 * d02_00 * d11_01 * d20_10 + d02_00 * d20_10 * d20_10 +
         d02_01 * d02_01 * d20_00 - 2 * d02_01 * d11_00 * d11_01 - 2 * d02_01 * d11_00 * d20_10 +
         2 * d02_01 * d11_10 * d20_00 - 2 * d11_00 * d11_01 * d11_10 - 2 * d11_00 * d11_10 * d20_10 +
         d11_10 * d11_10 * d20_00;
}

double awmi1_4(const DMTable& D) {
  const double a = D(0, 2, 0, 1), b = D(1, 1, 0, 1), c = D(1, 1, 1, 0), e = D(2, 0, 1, 0);
  const double d21_01 = D(2, 1, 0, 1), d30_10 = D(3, 0, 1, 0), d12_01 = D(1, 2, 0, 1), d21_10 = D(2, 1, 1, 0);
  const double d03_01 = D(0, 3, 0, 1), d12_10 = D(1, 2, 1, 0);
  return a * a * d21_01 + a * a * d30_10 - 2 * a * b * d12_01 - 2 * a * b * d21_10 + 2 * a * c * d21_01 +
         2 * a * c * d30_10 - 2 * a * d12_01 * e - 2 * a * e * d21_10 + d03_01 * b * b + 2 * d03_01 * b * e +
         d03_01 * e * e + b * b * d12_10 - 2 * b * c * d12_01 - 2 * b * c * d21_10 + 2 * b * d12_10 * e +
         c * c * d21_01 + c * c * d30_10 - 2 * c * d12_01 * e - 2 * c * e * d21_10 + d12_10 * e * e;
}

// Three points, three primitives (weight 6).

double awmi1_5(const DMTable& D) {
  const double d02_00 = D(0, 2, 0, 0), d02_01 = D(0, 2, 0, 1), d30_00 = D(3, 0, 0, 0), d11_01 = D(1, 1, 0, 1);
  const double d21_00 = D(2, 1, 0, 0), d11_10 = D(1, 1, 1, 0), d20_10 = D(2, 0, 1, 0), d11_00 = D(1, 1, 0, 0);
  const double d12_00 = D(1, 2, 0, 0), d20_00 = D(2, 0, 0, 0), d03_00 = D(0, 3, 0, 0);
  return d02_00 * d02_01 * d30_00 - d02_00 * d11_01 * d21_00 + d02_00 * d11_10 * d30_00 -
         d02_00 * d20_10 * d21_00 - 2 * d02_01 * d11_00 * d21_00 + d02_01 * d12_00 * d20_00 -
         d03_00 * d11_01 * d20_00 - d03_00 * d20_00 * d20_10 + 2 * d11_00 * d11_01 * d12_00 -
         2 * d11_00 * d11_10 * d21_00 + 2 * d11_00 * d12_00 * d20_10 + d11_10 * d12_00 * d20_00;
}

double awmi1_7(const DMTable& D) {
  const double d02_01 = D(0, 2, 0, 1), d03_01 = D(0, 3, 0, 1), d30_00 = D(3, 0, 0, 0), d12_00 = D(1, 2, 0, 0);
  const double d21_01 = D(2, 1, 0, 1), d30_10 = D(3, 0, 1, 0), d12_01 = D(1, 2, 0, 1), d21_00 = D(2, 1, 0, 0);
  const double d12_10 = D(1, 2, 1, 0), d21_10 = D(2, 1, 1, 0), d03_00 = D(0, 3, 0, 0), d11_01 = D(1, 1, 0, 1);
  const double d20_10 = D(2, 0, 1, 0), d11_10 = D(1, 1, 1, 0);
  return d02_01 * d03_01 * d30_00 + d02_01 * d12_00 * d21_01 + d02_01 * d12_00 * d30_10 -
         2 * d02_01 * d12_01 * d21_00 + d02_01 * d12_10 * d30_00 - 2 * d02_01 * d21_00 * d21_10 -
         d03_00 * d11_01 * d21_01 - d03_00 * d11_01 * d30_10 - d03_00 * d20_10 * d21_01 -
         d03_00 * d20_10 * d30_10 - d03_01 * d11_01 * d21_00 + d03_01 * d11_10 * d30_00 -
         d03_01 * d20_10 * d21_00 + 2 * d11_01 * d12_00 * d12_01 + 2 * d11_01 * d12_00 * d21_10 -
         d11_01 * d12_10 * d21_00 + d11_10 * d12_00 * d21_01 + d11_10 * d12_00 * d30_10 -
         2 * d11_10 * d12_01 * d21_00 + d11_10 * d12_10 * d30_00 - 2 * d11_10 * d21_00 * d21_10 +
         2 * d12_00 * d12_01 * d20_10 + 2 * d12_00 * d20_10 * d21_10 - d12_10 * d20_10 * d21_00;
}

// Three points, four primitives (weight 7).

double awmi1_8(const DMTable& D) {
  const double d03_00 = D(0, 3, 0, 0), d12_01 = D(1, 2, 0, 1), d30_00 = D(3, 0, 0, 0), d21_00 = D(2, 1, 0, 0);
  const double d21_01 = D(2, 1, 0, 1), d30_10 = D(3, 0, 1, 0), d21_10 = D(2, 1, 1, 0), d03_01 = D(0, 3, 0, 1);
  const double d12_00 = D(1, 2, 0, 0), d12_10 = D(1, 2, 1, 0);
  return -2 * d03_00 * d12_01 * d30_00 + 2 * d03_00 * d21_00 * d21_01 + 2 * d03_00 * d21_00 * d30_10 -
         2 * d03_00 * d21_10 * d30_00 + 2 * d03_01 * d12_00 * d30_00 - 2 * d03_01 * d21_00 * d21_00 -
         2 * d12_00 * d12_00 * d21_01 - 2 * d12_00 * d12_00 * d30_10 + 2 * d12_00 * d12_01 * d21_00 +
         2 * d12_00 * d12_10 * d30_00 + 2 * d12_00 * d21_00 * d21_10 - 2 * d12_10 * d21_00 * d21_00;
}

}  // namespace

std::string_view name(InvariantId id) noexcept {
  for (const auto& n : kNames) {
    if (n.id == id) return n.name;
  }
  return "?";
}

std::optional<InvariantId> parse_invariant(std::string_view text) noexcept {
  for (const auto& n : kNames) {
    if (n.name == text) return n.id;
  }
  return std::nullopt;
}

bool is_awmi1(InvariantId id) noexcept {
  return id != InvariantId::AMI2 && id != InvariantId::AMI7 && id != InvariantId::AWMI2;
}

std::optional<NormalizationRule> normalization(InvariantId id) noexcept {
  switch (id) {
    case InvariantId::AMI2:
      return NormalizationRule{2, 2};
    case InvariantId::AMI7:
      return NormalizationRule{3, 4};
    case InvariantId::AWMI1_1:
    case InvariantId::AWMI1_2:
      return NormalizationRule{2, 2};
    case InvariantId::AWMI1_3:
    case InvariantId::AWMI1_4:
      return NormalizationRule{3, 2};
    // AWMI1_6 is evaluated with the AWMI1_3 polynomial, so it carries that weight.
    case InvariantId::AWMI1_6:
      return NormalizationRule{3, 2};
    case InvariantId::AWMI1_5:
    case InvariantId::AWMI1_7:
      return NormalizationRule{3, 3};
    case InvariantId::AWMI1_8:
      return NormalizationRule{3, 4};
    case InvariantId::AWMI2:
      return std::nullopt;
  }
  return std::nullopt;
}

double ami2_numerator(const MomentTable& u) { return 2 * u.u(0, 2) * u.u(2, 0) - 2 * u.u(1, 1) * u.u(1, 1); }

double ami7_numerator(const MomentTable& u) {
  const double u02 = u.u(0, 2), u12 = u.u(1, 2), u30 = u.u(3, 0), u21 = u.u(2, 1);
  const double u03 = u.u(0, 3), u11 = u.u(1, 1), u20 = u.u(2, 0);
  return 2 * u02 * u12 * u30 - 2 * u02 * u21 * u21 - 2 * u03 * u11 * u30 + 2 * u03 * u20 * u21 +
         2 * u11 * u12 * u21 - 2 * u12 * u12 * u20;
}

double ami2(const MomentTable& u) { return normalized(ami2_numerator(u), u.m00(), 4); }
double ami7(const MomentTable& u) { return normalized(ami7_numerator(u), u.m00(), 7); }

double awmi1_numerator(InvariantId id, const DMTable& dms) {
  switch (id) {
    case InvariantId::AWMI1_1:
      return awmi1_1(dms);
    case InvariantId::AWMI1_2:
      return awmi1_2(dms);
    case InvariantId::AWMI1_3:
    case InvariantId::AWMI1_6:
      return awmi1_3(dms);
    case InvariantId::AWMI1_4:
      return awmi1_4(dms);
    case InvariantId::AWMI1_5:
      return awmi1_5(dms);
    case InvariantId::AWMI1_7:
      return awmi1_7(dms);
    case InvariantId::AWMI1_8:
      return awmi1_8(dms);
    default:
      throw InvalidArgument(std::string(name(id)) + " is not a first-order AWMI");
  }
}

double awmi1(InvariantId id, const DMTable& dms) {
  return normalized(awmi1_numerator(id, dms), dms.mass(), normalization(id)->exponent());
}

std::optional<double> Awmi2Parts::value() const noexcept {
  if (!(std::abs(denominator) > kAwmi2Guard * scale) || std::abs(denominator) < kAwmi2Guard * mass) return std::nullopt;
  return numerator / denominator;
}

Awmi2Parts awmi2_parts(const DMTable& D) {
  const double fxx_fyy = D.at({0, 0, 0, 0, 1, 1, 0});
  const double fxy2 = D.at({0, 0, 0, 0, 0, 0, 2});
  const double fy2_fxx = D.at({0, 0, 0, 2, 1, 0, 0});
  const double fx_fy_fxy = D.at({0, 0, 1, 1, 0, 0, 1});
  const double fx2_fyy = D.at({0, 0, 2, 0, 0, 1, 0});
  Awmi2Parts parts;
  parts.numerator = fxx_fyy - fxy2;
  parts.denominator = fy2_fxx - 2 * fx_fy_fxy + fx2_fyy;
  parts.scale = std::abs(fy2_fxx) + 2 * std::abs(fx_fy_fxy) + std::abs(fx2_fyy);
  parts.mass = D.mass();
  return parts;
}

Awmi2Parts awmi2_direct_parts(const Raster& raster, const DerivativeStack& stack) {
  if (stack.width() != raster.width() || stack.height() != raster.height()) {
    throw InvalidArgument("derivative stack does not match the raster");
  }
  // adi4 and adi5 carry no coordinates, so the centroid drops out.
  CompensatedSum num, den, scale, mass;
  for (int r = 0; r < raster.height(); ++r) {
    for (int c = 0; c < raster.width(); ++c) {
      const double f = raster(r, c);
      const Jet j{stack.fx(r, c), stack.fy(r, c), stack.fxx(r, c), stack.fxy(r, c), stack.fyy(r, c)};
      const AdiValues a = adi_at(j, 0.0, 0.0);
      num += a.adi4 * f;
      den += a.adi5 * f;
      scale += (std::abs(j.fy * j.fy * j.fxx) + 2 * std::abs(j.fx * j.fy * j.fxy) + std::abs(j.fx * j.fx * j.fyy)) * f;
      mass += f;
    }
  }
  return {num.value(), den.value(), scale.value(), mass.value()};
}

std::optional<double> awmi2(const DMTable& dms) { return awmi2_parts(dms).value(); }

std::optional<double> awmi2(const Raster& raster, const DerivativeStack& stack) {
  return awmi2_direct_parts(raster, stack).value();
}

std::vector<InvariantId> FeatureConfig::default_ids() {
  return {InvariantId::AWMI1_1, InvariantId::AWMI1_2, InvariantId::AWMI1_3, InvariantId::AWMI1_4, InvariantId::AWMI1_5,
          InvariantId::AWMI1_6, InvariantId::AWMI1_7, InvariantId::AWMI1_8, InvariantId::AWMI2};
}

std::vector<InvariantId> FeatureConfig::ami_ids() { return {InvariantId::AMI2, InvariantId::AMI7}; }

const FeatureEntry& FeatureVector::get(InvariantId id) const {
  for (const auto& e : entries) {
    if (e.id == id) return e;
  }
  throw InvalidArgument(std::string(name(id)) + " not in feature vector");
}

FeatureVector feature_vector(const Raster& raster, const FeatureConfig& config) {
  bool need_moments = false, need_dms = false;
  for (InvariantId id : config.ids) {
    (id == InvariantId::AMI2 || id == InvariantId::AMI7 ? need_moments : need_dms) = true;
  }
  std::optional<MomentTable> moments;
  std::optional<DMTable> dms;
  if (need_moments) moments = MomentTable::build(raster, 3);
  if (need_dms) dms = DMTable::build(raster, derivative_stack(raster, config.diff));

  FeatureVector out;
  out.diff_config = config.diff;
  for (InvariantId id : config.ids) {
    FeatureEntry e{id, 0.0, true};
    if (id == InvariantId::AMI2) {
      e.value = ami2(*moments);
    } else if (id == InvariantId::AMI7) {
      e.value = ami7(*moments);
    } else if (id == InvariantId::AWMI2) {
      const auto v = awmi2(*dms);
      e.defined = v.has_value();
      e.value = v.value_or(0.0);
    } else {
      e.value = awmi1(id, *dms);
    }
    out.entries.push_back(e);
  }
  return out;
}

FeatureVector signed_log(const FeatureVector& v) {
  FeatureVector out = v;
  for (auto& e : out.entries) {
    if (e.defined) e.value = std::copysign(std::log10(1.0 + std::abs(e.value) / 1e-12), e.value);
  }
  return out;
}

}  // namespace awmi
