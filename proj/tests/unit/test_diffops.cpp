#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "awmi/diffops.hpp"
#include "awmi/error.hpp"
#include "awmi/moments.hpp"
#include "test_util.hpp"

using namespace awmi;

namespace {

double sum(const Field& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s;
}

double max_abs(const Field& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

/// Cubic-plus-quadratic family with exact derivatives.
struct Poly {
  double c[10];  // 1, x, y, x2, xy, y2, x3, x2y, xy2, y3
  double f(double x, double y) const {
    return c[0] + c[1] * x + c[2] * y + c[3] * x * x + c[4] * x * y + c[5] * y * y + c[6] * x * x * x +
           c[7] * x * x * y + c[8] * x * y * y + c[9] * y * y * y;
  }
  Jet jet(double x, double y) const {
    return {c[1] + 2 * c[3] * x + c[4] * y + 3 * c[6] * x * x + 2 * c[7] * x * y + c[8] * y * y,
            c[2] + c[4] * x + 2 * c[5] * y + c[7] * x * x + 2 * c[8] * x * y + 3 * c[9] * y * y,
            2 * c[3] + 6 * c[6] * x + 2 * c[7] * y,
            c[4] + 2 * c[7] * x + 2 * c[8] * y,
            2 * c[5] + 2 * c[8] * x + 6 * c[9] * y};
  }
};

/// Quartic in x, y with exact derivatives, coefficients c[i][j] for x^i y^j.
struct Quartic {
  double c[5][5] = {};
  double eval(double x, double y, int dx, int dy) const {
    double s = 0.0;
    for (int i = 0; i <= 4; ++i) {
      for (int j = 0; i + j <= 4; ++j) {
        if (i < dx || j < dy) continue;
        double k = 1.0;
        for (int t = 0; t < dx; ++t) k *= i - t;
        for (int t = 0; t < dy; ++t) k *= j - t;
        s += c[i][j] * k * std::pow(x, i - dx) * std::pow(y, j - dy);
      }
    }
    return s;
  }
  Jet jet(double x, double y) const {
    return {eval(x, y, 1, 0), eval(x, y, 0, 1), eval(x, y, 2, 0), eval(x, y, 1, 1), eval(x, y, 0, 2)};
  }
};

}  // namespace

TEST(GaussianKernel, RawSamples) {
  const DiffConfig cfg;
  const Field g = gaussian_kernel(0, 0, cfg);
  EXPECT_NEAR(g(4, 4), 1.0 / (2 * std::numbers::pi * 9), 1e-15);
  EXPECT_NEAR(g(4, 4), 0.017684, 1e-6);

  const Field gx = gaussian_kernel(1, 0, cfg);
  for (int r = 0; r < 9; ++r) EXPECT_EQ(gx(r, 4), 0.0);
  EXPECT_LE(std::abs(sum(gx)), 1e-12);

  const Field gxx = gaussian_kernel(2, 0, cfg);
  for (int r = 0; r < 9; ++r) {
    EXPECT_LE(std::abs(gxx(r, 1)), 1e-15);
    EXPECT_LE(std::abs(gxx(r, 7)), 1e-15);
  }
  EXPECT_THROW(gaussian_kernel(2, 1, cfg), InvalidArgument);
  EXPECT_THROW(gaussian_kernel(-1, 0, cfg), InvalidArgument);
}

TEST(GaussianKernel, RawSamplesAreTruncated) {
  // The literal 9x9 samples at sigma 3 lose a quarter of the smoother's mass;
  // this is what the moment correction repairs.
  const Field g = gaussian_kernel(0, 0, DiffConfig{});
  EXPECT_NEAR(sum(g), 0.754, 0.002);
}

TEST(GaussianKernel, MomentCorrectedProfiles) {
  const DiffConfig cfg;
  EXPECT_NEAR(sum(derivative_kernel(0, 0, cfg)), 1.0, 1e-14);
  const Field kx = derivative_kernel(1, 0, cfg), kxx = derivative_kernel(2, 0, cfg), kxy = derivative_kernel(1, 1, cfg);
  double m1 = 0, m0xx = 0, m2xx = 0, mxy = 0;
  for (int r = 0; r < 9; ++r) {
    for (int c = 0; c < 9; ++c) {
      const double x = c - 4, y = r - 4;
      m1 += x * kx(r, c);
      m0xx += kxx(r, c);
      m2xx += x * x * kxx(r, c);
      mxy += x * y * kxy(r, c);
    }
  }
  // Convolution flips the kernel, so these moments make a linear ramp's
  // slope and a quadratic's curvature come out exact.
  EXPECT_NEAR(m1, -1.0, 1e-14);
  EXPECT_NEAR(m0xx, 0.0, 1e-14);
  EXPECT_NEAR(m2xx, 2.0, 1e-14);
  EXPECT_NEAR(mxy, 1.0, 1e-14);
}

TEST(GaussianKernel, SampledModeMatchesRaw) {
  DiffConfig cfg;
  cfg.normalization = KernelNormalization::sampled;
  for (int ox = 0; ox <= 2; ++ox) {
    for (int oy = 0; ox + oy <= 2; ++oy) {
      const Field a = gaussian_kernel(ox, oy, cfg), b = derivative_kernel(ox, oy, cfg);
      for (std::size_t i = 0; i < a.values().size(); ++i) EXPECT_NEAR(a.values()[i], b.values()[i], 1e-16);
    }
  }
}

TEST(Convolve, UnitKernelIsIdentity) {
  const Raster img = test::smooth_blobs(32, 1);
  const Field one(1, 1, 1.0);
  for (auto b : {Boundary::reflect, Boundary::zero}) EXPECT_EQ(convolve(img, one, b), img.field());
}

TEST(Convolve, ConstantImageZeroSumKernel) {
  const Raster img = Raster::filled(30, 20, 0.7);
  for (int ox = 0; ox <= 2; ++ox) {
    const Field k = derivative_kernel(ox, ox == 0 ? 1 : 0, DiffConfig{});
    EXPECT_LE(max_abs(convolve(img, k, Boundary::reflect)), 1e-12);
  }
}

TEST(Convolve, ImpulseGivesFlippedKernel) {
  Field imp(21, 21, 0.0);
  imp(10, 10) = 1.0;
  Field k(3, 3);
  for (int i = 0; i < 9; ++i) k.values()[i] = i + 1;
  const Field out = convolve(imp, k, Boundary::zero);
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) EXPECT_EQ(out(10 + dr, 10 + dc), k(1 + dr, 1 + dc));
  }
  EXPECT_EQ(out(10, 11), k(1, 2));
}

TEST(Convolve, TrueConvolutionFlip) {
  Field imp(9, 9, 0.0);
  imp(4, 4) = 1.0;
  Field k(3, 3, 0.0);
  k(0, 2) = 1.0;  // offset (x, y) = (+1, -1)
  const Field out = convolve(imp, k, Boundary::zero);
  EXPECT_EQ(out(3, 5), 1.0);
}

TEST(Convolve, RejectsBadKernels) {
  const Field img(5, 5, 1.0);
  EXPECT_THROW(convolve(img, Field(7, 7, 1.0), Boundary::reflect), InvalidArgument);
  EXPECT_THROW(convolve(img, Field(2, 2, 1.0), Boundary::reflect), InvalidArgument);
}

TEST(DerivativeStack, RampGradientInterior) {
  const Raster ramp = test::from_function(64, 48, [](double x, double) { return 0.001 * x; });
  const auto s = derivative_stack(ramp);
  for (int r = 4; r < 44; ++r) {
    for (int c = 4; c < 60; ++c) {
      ASSERT_LE(std::abs(s.fx(r, c) - 0.001) / 0.001, 1e-6);
      ASSERT_LE(std::abs(s.fy(r, c)), 1e-12);
      ASSERT_LE(std::abs(s.fxx(r, c)), 1e-12);
      ASSERT_LE(std::abs(s.fxy(r, c)), 1e-12);
      ASSERT_LE(std::abs(s.fyy(r, c)), 1e-12);
    }
  }
}

TEST(DerivativeStack, ConstantIsZero) {
  const auto s = derivative_stack(Raster::filled(20, 20, 0.3));
  for (const Field* f : {&s.fx, &s.fy, &s.fxx, &s.fxy, &s.fyy}) EXPECT_LE(max_abs(*f), 1e-12);
}

TEST(DerivativeStack, QuadraticInterior) {
  const double c = 1e-4;
  const Raster q = test::from_function(64, 40, [&](double x, double) { return c * x * x; });
  const auto s = derivative_stack(q);
  for (int r = 4; r < 36; ++r) {
    for (int col = 4; col < 60; ++col) {
      ASSERT_LE(std::abs(s.fxx(r, col) - 2 * c) / (2 * c), 1e-3);
      const double x = Raster::x_of(col);
      ASSERT_LE(std::abs(s.fx(r, col) - 2 * c * x) / (2 * c * x), 1e-3);
    }
  }
}

TEST(DerivativeStack, TooSmall) { EXPECT_THROW(derivative_stack(Raster::filled(8, 20, 1.0)), InvalidArgument); }

TEST(Adi, WorkedExample) {
  const AdiValues a = adi_at({2, 4, 2, 0, 2}, 1, 2);
  EXPECT_EQ(a.adi1, 10);
  EXPECT_EQ(a.adi2, 10);
  EXPECT_EQ(a.adi3, 0);
  EXPECT_EQ(a.adi4, 4);
  EXPECT_EQ(a.adi5, 40);
}

TEST(Adi, Homogeneity) {
  const Jet j{0.3, -0.7, 1.1, 0.4, -0.9};
  const double lam = 2.5;
  const AdiValues a = adi_at(j, 0.8, -1.3);
  const AdiValues b = adi_at({lam * j.fx, lam * j.fy, lam * j.fxx, lam * j.fxy, lam * j.fyy}, 0.8, -1.3);
  EXPECT_NEAR(b.adi1, lam * a.adi1, 1e-12);
  EXPECT_NEAR(b.adi2, lam * a.adi2, 1e-12);
  EXPECT_NEAR(b.adi4, lam * lam * a.adi4, 1e-12);
  EXPECT_NEAR(b.adi5, lam * lam * lam * a.adi5, 1e-12);
}

TEST(Adi, FieldsOfConstantAreZero) {
  const Raster r = Raster::filled(20, 20, 1.0);
  const auto f = adi_fields(derivative_stack(r), centroid(r));
  for (const Field* x : {&f.adi1, &f.adi2, &f.adi3, &f.adi4, &f.adi5}) EXPECT_LE(max_abs(*x), 1e-12);
}

TEST(Adi, FieldsMatchPointwise) {
  const Raster r = test::smooth_blobs(48, 8);
  const auto s = derivative_stack(r);
  const Centroid c = centroid(r);
  const auto f = adi_fields(s, c);
  for (int row : {5, 20, 33}) {
    for (int col : {7, 24, 40}) {
      const AdiValues a = adi_at({s.fx(row, col), s.fy(row, col), s.fxx(row, col), s.fxy(row, col), s.fyy(row, col)},
                                 Raster::x_of(col) - c.x, Raster::y_of(row) - c.y);
      EXPECT_EQ(f.adi3(row, col), a.adi3);
      EXPECT_EQ(f.adi5(row, col), a.adi5);
    }
  }
}

TEST(Adi, SyzygyAgainstFiniteDifferences) {
  // Independent check of the dependency: derivatives from central differences
  // of a smooth closed-form function, not from any analytic formula.
  auto f = [](double x, double y) { return std::exp(-0.3 * x * x + 0.2 * x * y - 0.1 * y * y) * (1 + 0.5 * x); };
  const double h = 1e-3;
  double printed = 0.0;
  for (double x : {-0.7, 0.2, 1.1}) {
    for (double y : {-0.4, 0.6, 1.3}) {
      Jet j;
      j.fx = (f(x + h, y) - f(x - h, y)) / (2 * h);
      j.fy = (f(x, y + h) - f(x, y - h)) / (2 * h);
      j.fxx = (f(x + h, y) - 2 * f(x, y) + f(x - h, y)) / (h * h);
      j.fyy = (f(x, y + h) - 2 * f(x, y) + f(x, y - h)) / (h * h);
      j.fxy = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4 * h * h);
      const AdiValues a = adi_at(j, x, y);
      const double scale = a.adi3 * a.adi3 + std::abs(a.adi2 * a.adi5) + std::abs(a.adi1 * a.adi1 * a.adi4);
      EXPECT_LE(std::abs(adi_syzygy(a)), 1e-5 * scale);
      printed = std::max(printed, std::abs(adi_syzygy_as_printed(a)) / scale);
    }
  }
  EXPECT_GT(printed, 0.1);
}

TEST(Adi, SyzygyOnRandomQuartics) {
  std::mt19937_64 g(17);
  for (int trial = 0; trial < 50; ++trial) {
    Quartic q;
    for (int i = 0; i <= 4; ++i) {
      for (int j = 0; i + j <= 4; ++j) q.c[i][j] = test::uniform(g, -1, 1);
    }
    const double x = test::uniform(g, -2, 2), y = test::uniform(g, -2, 2);
    const AdiValues a = adi_at(q.jet(x, y), x, y);
    const double scale = a.adi3 * a.adi3 + std::abs(a.adi2 * a.adi5) + std::abs(a.adi1 * a.adi1 * a.adi4);
    EXPECT_LE(std::abs(adi_syzygy(a)), 1e-9 * scale);
  }
}

TEST(Adi, RelativeInvarianceUnderAffineMaps) {
  // g(x') = f(A^-1 x') about the origin: adi1, adi2 are preserved; adi3 scales
  // by 1/det A and adi4, adi5 by 1/det^2 at corresponding points.
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 10; ++trial) {
    Poly p;
    for (double& c : p.c) c = test::uniform(gen, -1, 1);
    double a11, a12, a21, a22, det;
    do {
      a11 = test::uniform(gen, -2, 2);
      a12 = test::uniform(gen, -2, 2);
      a21 = test::uniform(gen, -2, 2);
      a22 = test::uniform(gen, -2, 2);
      det = a11 * a22 - a12 * a21;
    } while (std::abs(det) < 0.2);
    const double i11 = a22 / det, i12 = -a12 / det, i21 = -a21 / det, i22 = a11 / det;
    const double x = test::uniform(gen, -1, 1), y = test::uniform(gen, -1, 1);
    const double xp = a11 * x + a12 * y, yp = a21 * x + a22 * y;
    const Jet jf = p.jet(x, y);
    // Chain rule: grad g = B^T grad f, hess g = B^T H B with B = A^-1.
    Jet jg;
    jg.fx = i11 * jf.fx + i21 * jf.fy;
    jg.fy = i12 * jf.fx + i22 * jf.fy;
    jg.fxx = i11 * i11 * jf.fxx + 2 * i11 * i21 * jf.fxy + i21 * i21 * jf.fyy;
    jg.fyy = i12 * i12 * jf.fxx + 2 * i12 * i22 * jf.fxy + i22 * i22 * jf.fyy;
    jg.fxy = i11 * i12 * jf.fxx + (i11 * i22 + i21 * i12) * jf.fxy + i21 * i22 * jf.fyy;
    const AdiValues a = adi_at(jf, x, y), b = adi_at(jg, xp, yp);
    EXPECT_LE(test::rel(b.adi1, a.adi1), 1e-9);
    EXPECT_LE(test::rel(b.adi2, a.adi2), 1e-9);
    EXPECT_LE(test::rel(b.adi3, a.adi3 / det), 1e-9);
    EXPECT_LE(test::rel(b.adi4, a.adi4 / (det * det)), 1e-9);
    EXPECT_LE(test::rel(b.adi5, a.adi5 / (det * det)), 1e-9);
  }
}
