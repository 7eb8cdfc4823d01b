#pragma once

#include <cassert>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <vector>

namespace taskplan {

// Dense row-major n-d array. Thin container: layers index into raw data
// with explicit dims, this only owns storage and shape.
template <class T>
struct Tensor {
  std::vector<int64_t> shape;
  std::vector<T> data;

  Tensor() = default;
  explicit Tensor(std::vector<int64_t> s) : shape(std::move(s)) {
    data.assign(static_cast<size_t>(numel_of(shape)), T(0));
  }
  Tensor(std::initializer_list<int64_t> s) : Tensor(std::vector<int64_t>(s)) {}

  static int64_t numel_of(const std::vector<int64_t>& s) {
    int64_t n = 1;
    for (int64_t d : s) n *= d;
    return n;
  }

  int64_t numel() const { return static_cast<int64_t>(data.size()); }
  T* ptr() { return data.data(); }
  const T* ptr() const { return data.data(); }
  int64_t dim(int i) const { return shape[static_cast<size_t>(i)]; }

  void fill(T v) { std::fill(data.begin(), data.end(), v); }
  void zero() { fill(T(0)); }

  T& at(int64_t i) { return data[static_cast<size_t>(i)]; }
  T& at(int64_t i, int64_t j) {
    return data[static_cast<size_t>(i * shape[1] + j)];
  }
  T& at(int64_t i, int64_t j, int64_t k) {
    return data[static_cast<size_t>((i * shape[1] + j) * shape[2] + k)];
  }
  T& at(int64_t i, int64_t j, int64_t k, int64_t l) {
    return data[static_cast<size_t>(((i * shape[1] + j) * shape[2] + k) * shape[3] + l)];
  }
  const T& at(int64_t i) const { return data[static_cast<size_t>(i)]; }
  const T& at(int64_t i, int64_t j) const {
    return data[static_cast<size_t>(i * shape[1] + j)];
  }
  const T& at(int64_t i, int64_t j, int64_t k) const {
    return data[static_cast<size_t>((i * shape[1] + j) * shape[2] + k)];
  }
  const T& at(int64_t i, int64_t j, int64_t k, int64_t l) const {
    return data[static_cast<size_t>(((i * shape[1] + j) * shape[2] + k) * shape[3] + l)];
  }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }
};

using TensorF = Tensor<float>;
using TensorD = Tensor<double>;
using TensorU8 = Tensor<uint8_t>;
using TensorI32 = Tensor<int32_t>;

}  // namespace taskplan
