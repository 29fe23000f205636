#pragma once

#include <compare>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "awmi/diffops.hpp"
#include "awmi/raster.hpp"

namespace awmi {

struct Centroid {
  double x = 0.0;
  double y = 0.0;
};

/// m_pq = sum x^p y^q f over pixel centres.
double geometric_moment(const Raster& raster, int p, int q);

/// Throws UndefinedError if m00 <= 0.
Centroid centroid(const Raster& raster);

/// u_pq about the intensity centroid. Throws UndefinedError if m00 <= 0.
double central_moment(const Raster& raster, int p, int q);

/// Central moments up to a fixed order, computed in one pass.
class MomentTable {
 public:
  static MomentTable build(const Raster& raster, int max_order = 3);

  /// Throws InvalidArgument if p + q exceeds the table order.
  double u(int p, int q) const;
  double m00() const noexcept { return m00_; }
  const Centroid& centroid() const noexcept { return centroid_; }
  int max_order() const noexcept { return max_order_; }

 private:
  int max_order_ = 0;
  double m00_ = 0.0;
  Centroid centroid_;
  std::vector<double> values_;  // triangular, index (p+q)(p+q+1)/2 + q
};

/// Index of a differential moment
///   D^{pq}_{mnrst} = sum (x-xc)^p (y-yc)^q fx^m fy^n fxx^r fyy^s fxy^t f.
/// First-order moments have r = s = t = 0.
struct DMKey {
  int p = 0, q = 0;
  int m = 0, n = 0;
  int r = 0, s = 0, t = 0;

  bool first_order() const noexcept { return r == 0 && s == 0 && t == 0; }
  bool geometric() const noexcept { return m == 0 && n == 0 && first_order(); }
  bool valid() const noexcept { return p >= 0 && q >= 0 && m >= 0 && n >= 0 && r >= 0 && s >= 0 && t >= 0; }
  std::string label() const;

  auto operator<=>(const DMKey&) const = default;
};

/// Throws InvalidArgument if key has second-order powers; UndefinedError if m00 <= 0.
double dm_first(const Raster& raster, const DerivativeStack& stack, const DMKey& key);
double dm_second(const Raster& raster, const DerivativeStack& stack, const DMKey& key);

/// Differential moments of one raster, evaluated once and cached by key.
class DMTable {
 public:
  /// Every key referenced by the closed-form invariants: first-order keys with
  /// p+q <= 3 and m+n <= 1, plus the five second-order keys of the AWMI2 ratio.
  static const std::vector<DMKey>& standard_keys();

  static DMTable build(const Raster& raster, const DerivativeStack& stack);
  static DMTable build(const Raster& raster, const DerivativeStack& stack, std::span<const DMKey> keys);

  /// Throws InvalidArgument if the key was not computed.
  double at(const DMKey& key) const;
  double operator()(int p, int q, int m, int n) const { return at({p, q, m, n}); }
  bool contains(const DMKey& key) const { return values_.contains(key); }

  double mass() const noexcept { return mass_; }
  const Centroid& centroid() const noexcept { return centroid_; }
  const DiffConfig& config() const noexcept { return config_; }

 private:
  std::map<DMKey, double> values_;
  double mass_ = 0.0;
  Centroid centroid_;
  DiffConfig config_;
};

}  // namespace awmi
