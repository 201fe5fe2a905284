#include "subp/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "subp/error.hpp"

namespace subp {

namespace {

void check_labels(const Tensor& logits, const std::vector<int>& labels) {
  if (logits.rank() != 2) throw ShapeError("logits must be (B x classes)");
  const int batch = logits.dim(0);
  const int classes = logits.dim(1);
  if (static_cast<int>(labels.size()) != batch) {
    throw ShapeError("labels length != batch size");
  }
  if (batch < 1) throw InputError("batch size must be >= 1");
  for (int y : labels) {
    if (y < 0 || y >= classes) {
      throw InputError("label " + std::to_string(y) + " out of range [0," +
                       std::to_string(classes) + ")");
    }
  }
}

}  // namespace

double smoothed_cross_entropy(const Tensor& logits,
                              const std::vector<int>& labels,
                              float smoothing) {
  check_labels(logits, labels);
  const int batch = logits.dim(0);
  const int classes = logits.dim(1);
  const double eps = smoothing;
  const double off = eps / classes;

  double total = 0.0;
  for (int b = 0; b < batch; ++b) {
    const float* row = logits.ptr() + static_cast<std::size_t>(b) * classes;
    float mx = *std::max_element(row, row + classes);
    double lse = 0.0;
    for (int c = 0; c < classes; ++c) lse += std::exp(double(row[c]) - mx);
    lse = std::log(lse) + mx;
    // loss_b = -sum_c q_c * log p_c with q_c = (1-eps)*[c==y] + eps/K
    double s = 0.0;
    for (int c = 0; c < classes; ++c) {
      double q = off + (c == labels[b] ? 1.0 - eps : 0.0);
      s += q * (lse - double(row[c]));
    }
    total += s;
  }
  return total / batch;
}

Tensor smoothed_cross_entropy_grad(const Tensor& logits,
                                   const std::vector<int>& labels,
                                   float smoothing) {
  check_labels(logits, labels);
  const int batch = logits.dim(0);
  const int classes = logits.dim(1);
  const double eps = smoothing;
  const double off = eps / classes;

  Tensor grad(logits.shape);
  for (int b = 0; b < batch; ++b) {
    const float* row = logits.ptr() + static_cast<std::size_t>(b) * classes;
    float* grow = grad.ptr() + static_cast<std::size_t>(b) * classes;
    float mx = *std::max_element(row, row + classes);
    double denom = 0.0;
    for (int c = 0; c < classes; ++c) denom += std::exp(double(row[c]) - mx);
    for (int c = 0; c < classes; ++c) {
      double p = std::exp(double(row[c]) - mx) / denom;
      double q = off + (c == labels[b] ? 1.0 - eps : 0.0);
      grow[c] = static_cast<float>((p - q) / batch);
    }
  }
  return grad;
}

std::vector<int> argmax_rows(const Tensor& logits) {
  if (logits.rank() != 2) throw ShapeError("logits must be (B x classes)");
  const int batch = logits.dim(0);
  const int classes = logits.dim(1);
  std::vector<int> out(batch);
  for (int b = 0; b < batch; ++b) {
    const float* row = logits.ptr() + static_cast<std::size_t>(b) * classes;
    int best = 0;
    for (int c = 1; c < classes; ++c) {
      if (row[c] > row[best]) best = c;
    }
    out[b] = best;
  }
  return out;
}

}  // namespace subp
