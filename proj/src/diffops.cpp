#include "awmi/diffops.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "awmi/error.hpp"
#include "awmi/kernels.hpp"
#include "awmi/moments.hpp"

namespace awmi {

namespace {

void check_orders(int ox, int oy) {
  if (ox < 0 || oy < 0 || ox + oy > 2) {
    throw InvalidArgument("unsupported Gaussian derivative order (" + std::to_string(ox) + ", " +
                          std::to_string(oy) + ")");
  }
}

// Moment-corrected 1D profile of order 0, 1 or 2 (see KernelNormalization).
std::vector<double> corrected_profile(int order, double sigma, int radius) {
  const int n = 2 * radius + 1;
  std::vector<double> e(n), out(n);
  double s0 = 0, s2 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    const double k = i - radius;
    e[i] = std::exp(-k * k / (2.0 * sigma * sigma));
    s0 += e[i];
    s2 += k * k * e[i];
    s4 += k * k * k * k * e[i];
  }
  for (int i = 0; i < n; ++i) {
    const double k = i - radius;
    switch (order) {
      case 0:
        out[i] = e[i] / s0;
        break;
      case 1:
        out[i] = -k * e[i] / s2;
        break;
      default: {
        const double c = s2 / s0;
        out[i] = (k * k - c) * e[i] / ((s4 - c * s2) / 2.0);
      }
    }
  }
  return out;
}

}  // namespace

void DiffConfig::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("sigma must be positive");
  if (kernel_size < 3 || kernel_size % 2 == 0) throw InvalidArgument("kernel size must be odd and >= 3");
}

Field gaussian_kernel(int order_x, int order_y, const DiffConfig& config) {
  config.validate();
  check_orders(order_x, order_y);
  const int r = config.radius();
  const double s2 = config.sigma * config.sigma;
  const double base = 1.0 / (2.0 * std::numbers::pi * s2);
  Field k(config.kernel_size, config.kernel_size);
  for (int row = 0; row < config.kernel_size; ++row) {
    for (int col = 0; col < config.kernel_size; ++col) {
      const double x = col - r, y = row - r;
      const double g = base * std::exp(-(x * x + y * y) / (2.0 * s2));
      double v = g;
      if (order_x == 1 && order_y == 0) v = -x / s2 * g;
      if (order_x == 0 && order_y == 1) v = -y / s2 * g;
      if (order_x == 2) v = (x * x - s2) / (s2 * s2) * g;
      if (order_x == 1 && order_y == 1) v = x * y / (s2 * s2) * g;
      if (order_y == 2) v = (y * y - s2) / (s2 * s2) * g;
      k(row, col) = v;
    }
  }
  return k;
}

Field derivative_kernel(int order_x, int order_y, const DiffConfig& config) {
  if (config.normalization == KernelNormalization::sampled) return gaussian_kernel(order_x, order_y, config);
  config.validate();
  check_orders(order_x, order_y);
  const int r = config.radius();
  const auto px = corrected_profile(order_x, config.sigma, r);
  const auto py = corrected_profile(order_y, config.sigma, r);
  Field k(config.kernel_size, config.kernel_size);
  for (int row = 0; row < config.kernel_size; ++row) {
    for (int col = 0; col < config.kernel_size; ++col) k(row, col) = px[col] * py[row];
  }
  return k;
}

Field convolve(const Field& src, const Field& kernel, Boundary boundary) {
  if (kernel.width() % 2 == 0 || kernel.height() % 2 == 0) throw InvalidArgument("kernel size must be odd");
  if (kernel.width() > src.width() || kernel.height() > src.height()) {
    throw InvalidArgument("kernel larger than image");
  }
  return kernels::parallel::convolve(src, kernel, boundary);
}

Field convolve(const Raster& src, const Field& kernel, Boundary boundary) {
  return convolve(src.field(), kernel, boundary);
}

DerivativeStack derivative_stack(const Raster& src, const DiffConfig& config) {
  config.validate();
  if (src.width() < config.kernel_size || src.height() < config.kernel_size) {
    throw InvalidArgument("image " + std::to_string(src.width()) + "x" + std::to_string(src.height()) +
                          " is smaller than the " + std::to_string(config.kernel_size) + "-pixel kernel");
  }
  auto run = [&](int ox, int oy) { return convolve(src.field(), derivative_kernel(ox, oy, config), config.boundary); };
  DerivativeStack s;
  s.fx = run(1, 0);
  s.fy = run(0, 1);
  s.fxx = run(2, 0);
  s.fxy = run(1, 1);
  s.fyy = run(0, 2);
  s.config = config;
  return s;
}

ADIFields adi_fields(const DerivativeStack& stack, const Centroid& centroid) {
  const int w = stack.width(), h = stack.height();
  ADIFields out{Field(w, h), Field(w, h), Field(w, h), Field(w, h), Field(w, h)};
#pragma omp parallel for schedule(static)
  for (int r = 0; r < h; ++r) {
    const double y = Raster::y_of(r) - centroid.y;
    for (int c = 0; c < w; ++c) {
      const double x = Raster::x_of(c) - centroid.x;
      const Jet j{stack.fx(r, c), stack.fy(r, c), stack.fxx(r, c), stack.fxy(r, c), stack.fyy(r, c)};
      const AdiValues a = adi_at(j, x, y);
      out.adi1(r, c) = a.adi1;
      out.adi2(r, c) = a.adi2;
      out.adi3(r, c) = a.adi3;
      out.adi4(r, c) = a.adi4;
      out.adi5(r, c) = a.adi5;
    }
  }
  return out;
}

}  // namespace awmi
