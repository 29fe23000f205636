#include <gtest/gtest.h>

#include <cmath>

#include "awmi/error.hpp"
#include "awmi/moments.hpp"
#include "test_util.hpp"

using namespace awmi;

namespace {

/// Unit pixels at centred offsets (0,0), (1,0), (0,1) inside a 5x5 frame.
Raster triangle() {
  Field f(5, 5, 0.0);
  f(2, 2) = f(2, 3) = f(3, 2) = 1.0;
  return Raster(std::move(f));
}

}  // namespace

TEST(Moments, Geometric) {
  EXPECT_EQ(geometric_moment(Raster::filled(7, 3, 1.0), 0, 0), 21.0);
  Field f(4, 2, 0.0);
  f(0, 2) = 1.0;
  const Raster one(std::move(f));
  EXPECT_EQ(geometric_moment(one, 1, 0), 2.5);
  EXPECT_EQ(geometric_moment(one, 0, 1), 0.5);
  const Raster blob = test::smooth_blobs(40, 2);
  double total = 0.0;
  for (double v : blob.values()) total += v;
  EXPECT_NEAR(geometric_moment(blob, 0, 0), total, 1e-12 * total);
}

TEST(Moments, CentralOfTriangle) {
  const Raster t = triangle();
  const double u00 = 3.0;
  EXPECT_NEAR(central_moment(t, 2, 0), 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(central_moment(t, 0, 2), 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(central_moment(t, 1, 1), -1.0 / 3.0, 1e-14);
  EXPECT_LE(std::abs(central_moment(t, 1, 0)) / u00, 1e-12);
  EXPECT_LE(std::abs(central_moment(t, 0, 1)) / u00, 1e-12);
}

TEST(Moments, FirstCentralMomentsVanish) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Raster r = test::smooth_blobs(48, seed);
    const auto m = MomentTable::build(r);
    EXPECT_LE(std::abs(m.u(1, 0)) / m.m00(), 1e-12);
    EXPECT_LE(std::abs(m.u(0, 1)) / m.m00(), 1e-12);
  }
}

TEST(Moments, SymmetricBlobOddMomentsVanish) {
  const Raster r = test::from_function(41, 31, [](double x, double y) {
    const double dx = x - 20.5, dy = y - 15.5;
    return std::exp(-(dx * dx / 40 + dy * dy / 20));
  });
  const auto m = MomentTable::build(r);
  EXPECT_LE(std::abs(m.u(3, 0)) / m.m00(), 1e-12);
  EXPECT_LE(std::abs(m.u(1, 1)) / m.m00(), 1e-12);
}

TEST(Moments, TranslationInvariance) {
  const Raster r = test::smooth_blobs(64, 3);
  Field shifted(64, 64, 0.0);
  for (int row = 0; row + 5 < 64; ++row) {
    for (int c = 0; c + 7 < 64; ++c) shifted(row + 5, c + 7) = r(row, c);
  }
  const auto a = MomentTable::build(r), b = MomentTable::build(Raster(std::move(shifted)));
  for (int p = 0; p <= 3; ++p) {
    for (int q = 0; p + q <= 3; ++q) EXPECT_NEAR(a.u(p, q), b.u(p, q), 1e-9 * a.m00() * 100) << p << q;
  }
}

TEST(Moments, ZeroMassThrows) {
  EXPECT_THROW(centroid(Raster::filled(3, 3, 0.0)), UndefinedError);
  EXPECT_THROW(MomentTable::build(Raster::filled(3, 3, 0.0)), UndefinedError);
}

TEST(Moments, TableOrderChecked) {
  const auto m = MomentTable::build(triangle(), 2);
  EXPECT_THROW(m.u(2, 1), InvalidArgument);
}

TEST(DMKey, LabelsAndValidity) {
  EXPECT_EQ((DMKey{1, 0, 1, 0}).label(), "D10_10");
  EXPECT_EQ((DMKey{0, 0, 0, 0, 1, 1, 0}).label(), "D00_00110");
  EXPECT_TRUE((DMKey{1, 0, 1, 0}).first_order());
  EXPECT_FALSE((DMKey{0, 0, 0, 0, 0, 0, 1}).first_order());
  EXPECT_FALSE((DMKey{-1, 0}).valid());
}

TEST(DMTable, StandardKeys) {
  const auto& keys = DMTable::standard_keys();
  EXPECT_EQ(keys.size(), 35u);
}

TEST(DMTable, ZeroKeyIsMass) {
  const Raster r = test::smooth_blobs(48, 4);
  const auto s = derivative_stack(r);
  const auto t = DMTable::build(r, s);
  EXPECT_LE(test::rel(t(0, 0, 0, 0), geometric_moment(r, 0, 0)), 1e-12);
  EXPECT_LE(test::rel(dm_first(r, s, {}), geometric_moment(r, 0, 0)), 1e-12);
}

TEST(DMTable, ConstantRasterDerivativeKeysVanish) {
  const Raster r = Raster::filled(24, 24, 0.5);
  const auto t = DMTable::build(r, derivative_stack(r));
  for (const auto& k : DMTable::standard_keys()) {
    if (k.m + k.n + k.r + k.s + k.t >= 1) EXPECT_LE(std::abs(t.at(k)), 1e-12) << k.label();
  }
  EXPECT_LE(std::abs(t.at({0, 0, 0, 0, 1, 1, 0}) - t.at({0, 0, 0, 0, 0, 0, 2})), 1e-12);
}

TEST(DMTable, MatchesDirectLoops) {
  const Raster r = test::smooth_blobs(48, 5);
  const auto s = derivative_stack(r);
  const Centroid c = centroid(r);
  double d1010 = 0, d00110 = 0, d2000 = 0;
  for (int row = 0; row < 48; ++row) {
    for (int col = 0; col < 48; ++col) {
      const double x = Raster::x_of(col) - c.x, y = Raster::y_of(row) - c.y, f = r(row, col);
      d1010 += x * s.fx(row, col) * f;
      d00110 += s.fxx(row, col) * s.fyy(row, col) * f;
      d2000 += x * x * f;
    }
  }
  const auto t = DMTable::build(r, s);
  EXPECT_LE(test::rel(t(1, 0, 1, 0), d1010), 1e-12);
  EXPECT_LE(test::rel(dm_first(r, s, {1, 0, 1, 0}), d1010), 1e-12);
  EXPECT_LE(test::rel(t.at({0, 0, 0, 0, 1, 1, 0}), d00110), 1e-12);
  EXPECT_LE(test::rel(dm_second(r, s, {0, 0, 0, 0, 1, 1, 0}), d00110), 1e-12);
  EXPECT_LE(test::rel(dm_second(r, s, {2, 0, 0, 0, 0, 0, 0}), central_moment(r, 2, 0)), 1e-12);
  EXPECT_LE(test::rel(d2000, central_moment(r, 2, 0)), 1e-12);
}

TEST(DMTable, MissingKeyThrows) {
  const Raster r = test::smooth_blobs(32, 6);
  const auto t = DMTable::build(r, derivative_stack(r));
  EXPECT_THROW(t.at({4, 0, 1, 0}), InvalidArgument);
}
