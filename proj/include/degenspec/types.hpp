#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace degenspec {

/// Flat list of points in R^d, stored contiguously with stride d.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(int dim) : dim_(dim) {}
  PointCloud(int dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
    if (dim_ <= 0 || coords_.size() % static_cast<std::size_t>(dim_) != 0) {
      throw std::invalid_argument("PointCloud: coordinate count is not a multiple of the dimension");
    }
  }

  int dim() const { return dim_; }
  std::size_t size() const { return dim_ > 0 ? coords_.size() / static_cast<std::size_t>(dim_) : 0; }
  bool empty() const { return coords_.empty(); }

  std::span<const double> operator[](std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  std::span<double> operator[](std::size_t i) {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }

  void push_back(std::span<const double> p) {
    if (static_cast<int>(p.size()) != dim_) throw std::invalid_argument("PointCloud: dimension mismatch");
    coords_.insert(coords_.end(), p.begin(), p.end());
  }
  void reserve(std::size_t n) { coords_.reserve(n * static_cast<std::size_t>(dim_)); }

  const std::vector<double>& coords() const { return coords_; }

 private:
  int dim_ = 0;
  std::vector<double> coords_;
};

}  // namespace degenspec
