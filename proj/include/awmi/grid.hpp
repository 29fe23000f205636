#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace awmi {

/// Dense row-major 2D array. Row index first, matching image (row, col) access.
template <class T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {}
  Grid(int width, int height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    assert(data_.size() == static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(int row, int col) noexcept { return data_[index(row, col)]; }
  const T& operator()(int row, int col) const noexcept { return data_[index(row, col)]; }

  std::span<T> row(int r) noexcept { return {data_.data() + index(r, 0), static_cast<std::size_t>(width_)}; }
  std::span<const T> row(int r) const noexcept {
    return {data_.data() + index(r, 0), static_cast<std::size_t>(width_)};
  }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t index(int row, int col) const noexcept {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using Field = Grid<double>;

}  // namespace awmi
