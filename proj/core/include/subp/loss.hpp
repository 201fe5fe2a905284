#pragma once

#include <vector>

#include "subp/tensor.hpp"

namespace subp {

// Label-smoothed softmax cross entropy, averaged over the batch.
// logits: (B x num_classes). Throws InputError on out-of-range labels.
double smoothed_cross_entropy(const Tensor& logits,
                              const std::vector<int>& labels, float smoothing);

// dLoss/dlogits for the averaged loss above: (softmax - target) / B.
Tensor smoothed_cross_entropy_grad(const Tensor& logits,
                                   const std::vector<int>& labels,
                                   float smoothing);

// Row-wise argmax; ties resolve to the lowest class index.
std::vector<int> argmax_rows(const Tensor& logits);

}  // namespace subp
