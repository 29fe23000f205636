#include <gtest/gtest.h>

#include <cmath>

#include "awmi/error.hpp"
#include "awmi/invariants.hpp"
#include "awmi/oracle.hpp"
#include "test_util.hpp"

using namespace awmi;

namespace {

Raster triangle() {
  Field f(5, 5, 0.0);
  f(2, 2) = f(2, 3) = f(3, 2) = 1.0;
  return Raster(std::move(f));
}

Raster scaled(const Raster& r, double k) {
  Field f = r.field();
  for (double& v : f.values()) v *= k;
  return Raster(std::move(f));
}

}  // namespace

TEST(CoreSpec, Validation) {
  EXPECT_THROW(CoreSpec(1, {{1, 1}}), InvalidArgument);
  EXPECT_THROW(CoreSpec(4, {{1, 2}, {3, 4}}), InvalidArgument);
  EXPECT_THROW(CoreSpec(3, {{1, 2}}), InvalidArgument);  // point 3 unused
  EXPECT_THROW(CoreSpec(2, {{1, 1}}), InvalidArgument);
  EXPECT_THROW(CoreSpec(2, {{1, 3}}), InvalidArgument);
  EXPECT_NO_THROW(CoreSpec(2, {{1, 2}, {1, 2}}));
  EXPECT_THROW((DCoreSpec{ami_core(2), {1}}).validate(), InvalidArgument);
}

TEST(Oracle, Ami2CoreOnTriangle) {
  const auto v = eval_core(triangle(), ami_core(2));
  EXPECT_NEAR(v.value, 2.0 / 3.0, 1e-14);
  EXPECT_GT(v.magnitude, 0.0);
}

TEST(Oracle, SinglePrimitiveCancels) {
  const Raster r = random_raster(10, 10, 5);
  const auto v = eval_core(r, ami_core(1));
  EXPECT_LE(std::abs(v.value), 1e-12 * v.magnitude);
}

TEST(Oracle, ZeroCores) {
  for (int k : {1, 3, 6}) {
    const auto rep = verify_zero_core(k, 5, 11);
    EXPECT_TRUE(rep.passed) << k;
  }
}

TEST(Oracle, ConstantRasterWithAdiPowers) {
  const Raster r = Raster::filled(12, 12, 1.0);
  const auto s = derivative_stack(r);
  for (int k = 1; k <= 8; ++k) {
    const auto v = eval_dcore(r, s, awmi_dcore(k));
    EXPECT_LE(std::abs(v.value), 1e-9) << k;
  }
}

TEST(Oracle, IntensityHomogeneity) {
  // Each point contributes f, and each ADI1 power one more factor of f.
  const Raster r = random_raster(10, 10, 8);
  const double k = 1.7;
  const Raster rk = scaled(r, k);
  const auto s = derivative_stack(r), sk = derivative_stack(rk);
  for (int i = 1; i <= 8; ++i) {
    const DCoreSpec spec = awmi_dcore(i);
    int degree = spec.core.points();
    for (int p : spec.adi_powers) degree += p;
    const auto a = eval_dcore(r, s, spec), b = eval_dcore(rk, sk, spec);
    const double kd = std::pow(k, degree);
    EXPECT_LE(std::abs(b.value - kd * a.value), 1e-10 * kd * a.magnitude) << spec.describe();
    EXPECT_LE(test::rel(b.magnitude, kd * a.magnitude), 1e-10);
  }
}

TEST(Oracle, TranslationByPadding) {
  const Raster r = random_raster(10, 10, 12);
  Field padded(14, 13, 0.0);
  for (int row = 0; row < 10; ++row) {
    for (int c = 0; c < 10; ++c) padded(row + 3, c + 2) = r(row, c);
  }
  const auto a = eval_core(r, ami_core(7)), b = eval_core(Raster(std::move(padded)), ami_core(7));
  EXPECT_LE(std::abs(a.value - b.value), 1e-10 * a.magnitude);
}

TEST(Oracle, PointRelabellingSymmetry) {
  // Swapping points 2 and 3 of S12 S13^2 gives S13 S12^2, a different Core
  // whose sum over all tuples nonetheless matches after relabelling back.
  const Raster r = random_raster(10, 10, 13);
  const CoreSpec a(3, {{1, 2}, {1, 3}, {1, 3}});
  const CoreSpec b(3, {{1, 3}, {1, 2}, {1, 2}});
  const auto va = eval_core(r, a), vb = eval_core(r, b);
  EXPECT_LE(std::abs(va.value - vb.value), 1e-10 * va.magnitude);
}

TEST(Oracle, BudgetEnforced) {
  const Raster r = random_raster(16, 12, 1);
  EXPECT_THROW(eval_core(r, ami_core(7), 1000), InvalidArgument);
}

TEST(Oracle, ExpansionAmi2) {
  const auto rep = verify_expansion(InvariantId::AMI2, 20, 3);
  EXPECT_TRUE(rep.passed);
  EXPECT_LE(rep.max_rel_deviation, 1e-9);
}

TEST(Oracle, ExpansionThreePointSmall) {
  VerifyOptions opt;
  opt.max_width = 12;
  opt.max_height = 10;
  const auto rep = verify_expansion(InvariantId::AWMI1_4, 10, 4, opt);
  EXPECT_TRUE(rep.passed);
  EXPECT_LE(rep.max_rel_deviation, 1e-6);
}

TEST(Oracle, ReportsAreDeterministic) {
  const auto a = verify_expansion(InvariantId::AWMI1_1, 4, 7), b = verify_expansion(InvariantId::AWMI1_1, 4, 7);
  ASSERT_EQ(a.results.size(), b.results.size());
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    EXPECT_EQ(a.results[i].oracle, b.results[i].oracle);
    EXPECT_EQ(a.results[i].closed_form, b.results[i].closed_form);
  }
}

TEST(Oracle, NoSpecForRatio) { EXPECT_FALSE(oracle_spec(InvariantId::AWMI2).has_value()); }
