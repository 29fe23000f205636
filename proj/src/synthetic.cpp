#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "awmi/error.hpp"
#include "awmi/raster.hpp"

namespace awmi {

namespace {

// std::mt19937_64's output sequence is fixed by the standard; distributions
// are not, so values are derived from raw draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 eng_;
};

struct Blob {
  double cx, cy, amp;
  // inverse covariance entries
  double ixx, ixy, iyy;
};

Field render_blobs(int w, int h, const std::vector<Blob>& blobs) {
  Field out(w, h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const double x = Raster::x_of(c), y = Raster::y_of(r);
      double v = 0.0;
      for (const Blob& b : blobs) {
        const double dx = x - b.cx, dy = y - b.cy;
        v += b.amp * std::exp(-0.5 * (b.ixx * dx * dx + 2.0 * b.ixy * dx * dy + b.iyy * dy * dy));
      }
      out(r, c) = v;
    }
  }
  return out;
}

Raster blob_mixture(const SyntheticSpec& spec) {
  if (spec.blob_count < 1) throw InvalidArgument("blob mixture needs at least one blob");
  const double s = std::min(spec.width, spec.height);
  const double support = 0.5 * s - spec.margin_fraction * s;  // radius available around the centre
  const double smin = spec.sigma_min > 0 ? spec.sigma_min : 0.03 * s;
  const double smax = spec.sigma_max > 0 ? spec.sigma_max : 0.05 * s;
  if (smin > smax || support <= 0) throw InvalidArgument("degenerate blob mixture spec");
  const double fcx = 0.5 * spec.width, fcy = 0.5 * spec.height;

  Rng rng(spec.seed);
  std::vector<Blob> blobs;
  for (int i = 0; i < spec.blob_count; ++i) {
    if (i == 0 && spec.centered_single) {
      const double sg = 0.5 * (smin + smax);
      blobs.push_back({fcx, fcy, 1.0, 1.0 / (sg * sg), 0.0, 1.0 / (sg * sg)});
      continue;
    }
    const double sigma = rng.uniform(smin, smax);
    const double aspect = rng.uniform(1.0, std::max(1.0, spec.max_aspect));
    const double theta = rng.uniform(0.0, std::numbers::pi);
    const double amp = rng.uniform(0.4, 1.0);
    const double major = sigma * std::sqrt(aspect), minor = sigma / std::sqrt(aspect);
    const double reach = support - 3.0 * major;
    if (reach < 0) throw InvalidArgument("blob does not fit inside the margin; reduce sigma or margin");
    const double rad = reach * std::sqrt(rng.uniform());
    const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double ct = std::cos(theta), st = std::sin(theta);
    const double a = 1.0 / (major * major), b = 1.0 / (minor * minor);
    blobs.push_back({fcx + rad * std::cos(phi), fcy + rad * std::sin(phi), amp, a * ct * ct + b * st * st,
                     (a - b) * ct * st, a * st * st + b * ct * ct});
  }
  Field f = render_blobs(spec.width, spec.height, blobs);
  const double peak = *std::max_element(f.values().begin(), f.values().end());
  for (double& v : f.values()) v /= peak;
  return Raster(std::move(f));
}

Raster ramp(const SyntheticSpec& spec) {
  Field f(spec.width, spec.height);
  for (int r = 0; r < spec.height; ++r) {
    for (int c = 0; c < spec.width; ++c) {
      const double x = Raster::x_of(c), y = Raster::y_of(r);
      const double v = spec.c0 + spec.cx * x + spec.cy * y + spec.cxx * x * x + spec.cxy * x * y + spec.cyy * y * y;
      f(r, c) = std::clamp(v, 0.0, 1.0);
    }
  }
  return Raster(std::move(f));
}

struct Shape {
  bool ellipse;
  double cx, cy, a, b, theta;  // ellipse
  double px[3], py[3];         // triangle
  double level;
};

bool inside(const Shape& sh, double x, double y) {
  if (sh.ellipse) {
    const double dx = x - sh.cx, dy = y - sh.cy;
    const double ct = std::cos(sh.theta), st = std::sin(sh.theta);
    const double u = (ct * dx + st * dy) / sh.a, v = (-st * dx + ct * dy) / sh.b;
    return u * u + v * v <= 1.0;
  }
  auto edge = [&](int i, int j) {
    return (sh.px[j] - sh.px[i]) * (y - sh.py[i]) - (sh.py[j] - sh.py[i]) * (x - sh.px[i]);
  };
  const double e0 = edge(0, 1), e1 = edge(1, 2), e2 = edge(2, 0);
  return (e0 >= 0 && e1 >= 0 && e2 >= 0) || (e0 <= 0 && e1 <= 0 && e2 <= 0);
}

Raster shape_mask(const SyntheticSpec& spec) {
  if (spec.blob_count < 1) throw InvalidArgument("shape mask needs at least one shape");
  const double s = std::min(spec.width, spec.height);
  const double support = 0.5 * s - spec.margin_fraction * s;
  if (support <= 0) throw InvalidArgument("degenerate shape mask spec");
  const double fcx = 0.5 * spec.width, fcy = 0.5 * spec.height;
  Rng rng(spec.seed);
  std::vector<Shape> shapes;
  for (int i = 0; i < spec.blob_count; ++i) {
    Shape sh{};
    sh.ellipse = rng.uniform() < 0.5;
    sh.level = rng.uniform(0.3, 1.0);
    const double size = rng.uniform(0.25, 0.5) * support;
    const double rad = (support - size) * std::sqrt(rng.uniform());
    const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double cx = fcx + rad * std::cos(phi), cy = fcy + rad * std::sin(phi);
    if (sh.ellipse) {
      sh.cx = cx;
      sh.cy = cy;
      sh.a = size;
      sh.b = size * rng.uniform(0.4, 1.0);
      sh.theta = rng.uniform(0.0, std::numbers::pi);
    } else {
      for (int k = 0; k < 3; ++k) {
        const double ang = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double rr = size * rng.uniform(0.5, 1.0);
        sh.px[k] = cx + rr * std::cos(ang);
        sh.py[k] = cy + rr * std::sin(ang);
      }
    }
    shapes.push_back(sh);
  }
  constexpr int kSub = 4;
  Field f(spec.width, spec.height);
  for (int r = 0; r < spec.height; ++r) {
    for (int c = 0; c < spec.width; ++c) {
      double acc = 0.0;
      for (int i = 0; i < kSub; ++i) {
        for (int j = 0; j < kSub; ++j) {
          const double x = c + (j + 0.5) / kSub, y = r + (i + 0.5) / kSub;
          double v = 0.0;
          for (const Shape& sh : shapes) {
            if (inside(sh, x, y)) v = std::max(v, sh.level);
          }
          acc += v;
        }
      }
      f(r, c) = acc / (kSub * kSub);
    }
  }
  return Raster(std::move(f));
}

}  // namespace

Raster generate_synthetic(const SyntheticSpec& spec) {
  if (spec.width < 1 || spec.height < 1) throw InvalidArgument("synthetic image needs positive dimensions");
  if (!(spec.margin_fraction >= 0.0 && spec.margin_fraction < 0.5)) {
    throw InvalidArgument("margin fraction must lie in [0, 0.5)");
  }
  switch (spec.kind) {
    case SyntheticKind::blob_mixture:
      return blob_mixture(spec);
    case SyntheticKind::polynomial_ramp:
      return ramp(spec);
    case SyntheticKind::shape_mask:
      return shape_mask(spec);
  }
  throw InvalidArgument("unknown synthetic kind");
}

}  // namespace awmi
