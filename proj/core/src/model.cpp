#include "subp/model.hpp"

#include <cmath>

#include "subp/error.hpp"
#include "subp/loss.hpp"

namespace subp {

namespace {

void relu_inplace(Tensor& t) {
  for (float& v : t.data) {
    if (v < 0.0f) v = 0.0f;
  }
}

// (B, C, H, W) -> (B, C)
Tensor global_avg_pool(const Tensor& x) {
  const int b = x.dim(0), c = x.dim(1);
  const int hw = x.dim(2) * x.dim(3);
  Tensor out({b, c});
  const float inv = 1.0f / hw;
  for (int i = 0; i < b; ++i) {
    for (int j = 0; j < c; ++j) {
      const float* src = x.ptr() + (static_cast<std::size_t>(i) * c + j) * hw;
      float acc = 0.0f;
      for (int t = 0; t < hw; ++t) acc += src[t];
      out.at2(i, j) = acc * inv;
    }
  }
  return out;
}

Tensor linear_forward(const Tensor& w, const std::vector<float>& bias,
                      const Tensor& x) {
  const int b = x.dim(0), in = x.dim(1), out_n = w.dim(0);
  if (w.dim(1) != in) throw ShapeError("linear input width mismatch");
  Tensor out({b, out_n});
  matmul_abt(x.ptr(), b, in, w.ptr(), out_n, out.ptr());
  for (int i = 0; i < b; ++i) {
    for (int j = 0; j < out_n; ++j) out.at2(i, j) += bias[j];
  }
  return out;
}

}  // namespace

TinyNet TinyNet::init(const TinyNetConfig& cfg, Rng& rng) {
  if (cfg.channels.empty()) throw ConfigError("channels list must be non-empty");
  TinyNet net;
  net.cfg = cfg;
  int in_ch = cfg.image_channels;
  for (int c_out : cfg.channels) {
    ConvLayerParams layer;
    layer.weights = Tensor({c_out, in_ch, 3, 3});
    layer.bias.assign(c_out, 0.0f);
    layer.stride = 1;
    layer.padding = 1;
    const double limit = std::sqrt(6.0 / (in_ch * 9));
    for (float& v : layer.weights.data) {
      v = static_cast<float>(rng.uniform(-limit, limit));
    }
    net.convs.push_back(std::move(layer));
    in_ch = c_out;
  }
  net.fc_weights = Tensor({cfg.num_classes, cfg.channels.back()});
  const double limit = std::sqrt(6.0 / cfg.channels.back());
  for (float& v : net.fc_weights.data) {
    v = static_cast<float>(rng.uniform(-limit, limit));
  }
  net.fc_bias.assign(cfg.num_classes, 0.0f);
  return net;
}

Tensor model_forward(const TinyNet& net, const Tensor& batch) {
  Tensor x = batch;
  for (const ConvLayerParams& conv : net.convs) {
    x = conv2d_forward(conv, x);
    relu_inplace(x);
  }
  Tensor pooled = global_avg_pool(x);
  return linear_forward(net.fc_weights, net.fc_bias, pooled);
}

std::pair<double, Tensor> model_forward_loss(const TinyNet& net,
                                             const Tensor& batch,
                                             const std::vector<int>& labels,
                                             float smoothing) {
  Tensor logits = model_forward(net, batch);
  double loss = smoothed_cross_entropy(logits, labels, smoothing);
  return {loss, std::move(logits)};
}

double model_loss_and_grads(const TinyNet& net, const Tensor& batch,
                            const std::vector<int>& labels, float smoothing,
                            ModelGrads& grads) {
  const int layers = net.num_convs();

  // Forward, caching each conv input and post-relu activation.
  std::vector<Tensor> inputs;  // inputs[i] feeds convs[i]
  inputs.reserve(layers);
  Tensor x = batch;
  std::vector<Tensor> preact(layers);
  for (int i = 0; i < layers; ++i) {
    inputs.push_back(x);
    preact[i] = conv2d_forward(net.convs[i], x);
    x = preact[i];
    relu_inplace(x);
  }
  const Tensor& last_act = x;
  Tensor pooled = global_avg_pool(last_act);
  Tensor logits = linear_forward(net.fc_weights, net.fc_bias, pooled);
  const double loss = smoothed_cross_entropy(logits, labels, smoothing);

  // Backward.
  Tensor dlogits = smoothed_cross_entropy_grad(logits, labels, smoothing);
  const int b = pooled.dim(0);
  const int feat = pooled.dim(1);
  const int classes = net.cfg.num_classes;

  grads.fc_weights = Tensor(net.fc_weights.shape);
  grads.fc_bias.assign(classes, 0.0f);
  Tensor dpooled({b, feat});
  for (int i = 0; i < b; ++i) {
    for (int c = 0; c < classes; ++c) {
      const float g = dlogits.at2(i, c);
      grads.fc_bias[c] += g;
      for (int f = 0; f < feat; ++f) {
        grads.fc_weights.at2(c, f) += g * pooled.at2(i, f);
        dpooled.at2(i, f) += g * net.fc_weights.at2(c, f);
      }
    }
  }

  // GAP backward: spread evenly over spatial positions.
  const int h = last_act.dim(2), w = last_act.dim(3);
  const int hw = h * w;
  Tensor dact({b, feat, h, w});
  const float inv = 1.0f / hw;
  for (int i = 0; i < b; ++i) {
    for (int f = 0; f < feat; ++f) {
      const float g = dpooled.at2(i, f) * inv;
      float* dst = dact.ptr() + (static_cast<std::size_t>(i) * feat + f) * hw;
      for (int t = 0; t < hw; ++t) dst[t] = g;
    }
  }

  grads.conv_weights.resize(layers);
  grads.conv_bias.resize(layers);
  Tensor dcur = std::move(dact);
  for (int i = layers - 1; i >= 0; --i) {
    // relu gate on the pre-activation sign
    const float* pre = preact[i].ptr();
    float* dp = dcur.ptr();
    for (std::size_t t = 0; t < dcur.size(); ++t) {
      if (pre[t] <= 0.0f) dp[t] = 0.0f;
    }
    ConvGrads g = conv2d_backward(net.convs[i], inputs[i], dcur);
    grads.conv_weights[i] = std::move(g.weights);
    grads.conv_bias[i] = std::move(g.bias);
    dcur = std::move(g.input);
  }
  return loss;
}

}  // namespace subp
