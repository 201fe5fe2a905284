#pragma once

#include <string>
#include <utility>
#include <vector>

#include "subp/conv.hpp"
#include "subp/rng.hpp"
#include "subp/tensor.hpp"

namespace subp {

// TinyNet-k: k blocks of [conv 3x3 (stride 1, pad 1) -> relu], then global
// average pooling and a linear classifier. channels[i] is the i-th conv's
// output channel count; the first conv reads the image channels.
struct TinyNetConfig {
  int image_channels = 3;
  int image_size = 12;
  int num_classes = 8;
  std::vector<int> channels = {8, 16, 16};
};

struct TinyNet {
  TinyNetConfig cfg;
  std::vector<ConvLayerParams> convs;
  Tensor fc_weights;  // (num_classes, channels.back())
  std::vector<float> fc_bias;

  int num_convs() const { return static_cast<int>(convs.size()); }
  static TinyNet init(const TinyNetConfig& cfg, Rng& rng);
  std::string conv_name(int i) const { return "conv" + std::to_string(i + 1); }
};

// Logits for a batch (B, C, H, W) -> (B, num_classes).
Tensor model_forward(const TinyNet& net, const Tensor& batch);

// Forward + smoothed cross entropy. Returns (loss, logits).
std::pair<double, Tensor> model_forward_loss(const TinyNet& net,
                                             const Tensor& batch,
                                             const std::vector<int>& labels,
                                             float smoothing);

struct ModelGrads {
  std::vector<Tensor> conv_weights;
  std::vector<std::vector<float>> conv_bias;
  Tensor fc_weights;
  std::vector<float> fc_bias;
};

// Forward + backward in one pass; fills `grads` (resized as needed) and
// returns the loss.
double model_loss_and_grads(const TinyNet& net, const Tensor& batch,
                            const std::vector<int>& labels, float smoothing,
                            ModelGrads& grads);

}  // namespace subp
