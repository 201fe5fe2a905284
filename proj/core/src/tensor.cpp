#include "subp/tensor.hpp"

#include <cmath>
#include <sstream>

#include "subp/error.hpp"

namespace subp {

std::size_t shape_product(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int d : shape) {
    if (d < 0) throw ShapeError("negative dimension in shape");
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

Tensor::Tensor(std::vector<int> s) : shape(std::move(s)) {
  data.assign(shape_product(shape), 0.0f);
}

float& Tensor::at2(int i, int j) {
  return data[static_cast<std::size_t>(i) * shape[1] + j];
}

float Tensor::at2(int i, int j) const {
  return data[static_cast<std::size_t>(i) * shape[1] + j];
}

float& Tensor::at4(int a, int b, int c, int d) {
  return data[((static_cast<std::size_t>(a) * shape[1] + b) * shape[2] + c) * shape[3] + d];
}

float Tensor::at4(int a, int b, int c, int d) const {
  return data[((static_cast<std::size_t>(a) * shape[1] + b) * shape[2] + c) * shape[3] + d];
}

std::string Tensor::shape_str() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ",";
    os << shape[i];
  }
  os << ")";
  return os.str();
}

void check_finite(const Tensor& t, const std::string& what) {
  for (float v : t.data) {
    if (!std::isfinite(v)) {
      throw InvariantError(what + ": non-finite value encountered");
    }
  }
}

}  // namespace subp
