#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace subp {

// Dense row-major float tensor. Shapes are small (desk-scale CNNs), so
// everything lives in one contiguous vector and indexing is explicit.
struct Tensor {
  std::vector<int> shape;
  std::vector<float> data;

  Tensor() = default;
  explicit Tensor(std::vector<int> s);

  static Tensor zeros(std::vector<int> s) { return Tensor(std::move(s)); }

  int dim(std::size_t i) const { return shape.at(i); }
  int rank() const { return static_cast<int>(shape.size()); }
  std::size_t size() const { return data.size(); }

  float* ptr() { return data.data(); }
  const float* ptr() const { return data.data(); }

  // 2D / 4D accessors used by tests and reference paths; kernels index raw.
  float& at2(int i, int j);
  float at2(int i, int j) const;
  float& at4(int a, int b, int c, int d);
  float at4(int a, int b, int c, int d) const;

  std::string shape_str() const;
};

std::size_t shape_product(const std::vector<int>& shape);

// Throws InvariantError if any entry is NaN/inf. `what` names the tensor.
void check_finite(const Tensor& t, const std::string& what);

}  // namespace subp
