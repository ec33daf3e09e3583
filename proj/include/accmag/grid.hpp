#pragma once

#include <cassert>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace accmag {

using Complex = std::complex<double>;

/// Row-major 2-D raster of samples.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t height, std::size_t width, T fill = T{})
      : height_(height), width_(width), data_(height * width, fill) {}

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t y, std::size_t x) {
    assert(y < height_ && x < width_);
    return data_[y * width_ + x];
  }
  const T& operator()(std::size_t y, std::size_t x) const {
    assert(y < height_ && x < width_);
    return data_[y * width_ + x];
  }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }
  std::vector<T>& storage() { return data_; }
  const std::vector<T>& storage() const { return data_; }

  bool same_shape(const Grid& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<T> data_;
};

using RealGrid = Grid<double>;
using ComplexGrid = Grid<Complex>;

}  // namespace accmag
