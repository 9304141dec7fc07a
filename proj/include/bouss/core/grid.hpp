#pragma once

#include <cassert>
#include <vector>

namespace bouss {

/// Dense 2D array with a ghost frame. Local indices run over
/// [-ng, nx+ng) x [-ng, ny+ng); storage is row-major with x fastest.
template <class T>
class Grid2D {
 public:
  Grid2D() = default;
  Grid2D(int nx, int ny, int ng, T fill = T{})
      : nx_(nx), ny_(ny), ng_(ng), data_(std::size_t(nx + 2 * ng) * std::size_t(ny + 2 * ng), fill) {}

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int ng() const { return ng_; }
  int stride() const { return nx_ + 2 * ng_; }

  T& operator()(int i, int j) {
    assert(i >= -ng_ && i < nx_ + ng_ && j >= -ng_ && j < ny_ + ng_);
    return data_[std::size_t(j + ng_) * stride() + std::size_t(i + ng_)];
  }
  const T& operator()(int i, int j) const {
    assert(i >= -ng_ && i < nx_ + ng_ && j >= -ng_ && j < ny_ + ng_);
    return data_[std::size_t(j + ng_) * stride() + std::size_t(i + ng_)];
  }

  bool in_range(int i, int j) const { return i >= -ng_ && i < nx_ + ng_ && j >= -ng_ && j < ny_ + ng_; }

  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }
  std::vector<T>& raw() { return data_; }
  const std::vector<T>& raw() const { return data_; }

 private:
  int nx_ = 0;
  int ny_ = 0;
  int ng_ = 0;
  std::vector<T> data_;
};

}  // namespace bouss
