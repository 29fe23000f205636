#pragma once

#include <cmath>

namespace awmi {

// Neumaier's variant of Kahan summation; robust when addends exceed the running sum.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double initial) : sum_(initial) {}

  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double v) noexcept {
    add(v);
    return *this;
  }

  void merge(const CompensatedSum& other) noexcept {
    add(other.sum_);
    add(other.comp_);
  }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double ipow(double base, int exp) noexcept {
  double r = 1.0;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace awmi
