#include "subp/conv.hpp"

#include <cstring>

#include "subp/error.hpp"

namespace subp {

Conv2dDims conv2d_dims(const std::vector<int>& input_shape,
                       const std::vector<int>& weight_shape, int stride,
                       int padding) {
  if (input_shape.size() != 4) throw ShapeError("conv input must be NCHW");
  if (weight_shape.size() != 4) {
    throw ShapeError("conv weights must be (C_out, C_in, Kh, Kw)");
  }
  if (stride < 1) throw ShapeError("stride must be >= 1");
  if (padding < 0) throw ShapeError("padding must be >= 0");

  Conv2dDims d{};
  d.batch = input_shape[0];
  d.in_ch = input_shape[1];
  d.in_h = input_shape[2];
  d.in_w = input_shape[3];
  d.out_ch = weight_shape[0];
  d.kh = weight_shape[2];
  d.kw = weight_shape[3];
  d.stride = stride;
  d.padding = padding;

  if (weight_shape[1] != d.in_ch) {
    throw ShapeError("conv channel mismatch: input has " +
                     std::to_string(d.in_ch) + " channels, weights expect " +
                     std::to_string(weight_shape[1]));
  }
  int eff_h = d.in_h + 2 * padding;
  int eff_w = d.in_w + 2 * padding;
  if (eff_h < d.kh || eff_w < d.kw) {
    throw ShapeError("kernel larger than padded input");
  }
  d.out_h = (eff_h - d.kh) / stride + 1;
  d.out_w = (eff_w - d.kw) / stride + 1;
  d.patches = d.batch * d.out_h * d.out_w;
  d.patch_len = d.in_ch * d.kh * d.kw;
  return d;
}

Tensor im2col(const Tensor& input, int kh, int kw, int stride, int padding) {
  if (input.rank() != 4) throw ShapeError("im2col input must be NCHW");
  Conv2dDims d = conv2d_dims(input.shape, {1, input.shape[1], kh, kw}, stride,
                             padding);

  Tensor cols({d.patches, d.patch_len});
  const float* in = input.ptr();
  float* out = cols.ptr();
  const std::size_t chan_stride = static_cast<std::size_t>(d.in_h) * d.in_w;
  const std::size_t img_stride = static_cast<std::size_t>(d.in_ch) * chan_stride;

  std::size_t row = 0;
  for (int b = 0; b < d.batch; ++b) {
    for (int oh = 0; oh < d.out_h; ++oh) {
      for (int ow = 0; ow < d.out_w; ++ow, ++row) {
        float* dst = out + row * d.patch_len;
        const int h0 = oh * stride - padding;
        const int w0 = ow * stride - padding;
        for (int c = 0; c < d.in_ch; ++c) {
          const float* src = in + b * img_stride + c * chan_stride;
          for (int r = 0; r < kh; ++r) {
            const int h = h0 + r;
            for (int s = 0; s < kw; ++s, ++dst) {
              const int w = w0 + s;
              *dst = (h >= 0 && h < d.in_h && w >= 0 && w < d.in_w)
                         ? src[static_cast<std::size_t>(h) * d.in_w + w]
                         : 0.0f;
            }
          }
        }
      }
    }
  }
  return cols;
}

Tensor col2im(const Tensor& cols, const Conv2dDims& d) {
  Tensor image({d.batch, d.in_ch, d.in_h, d.in_w});
  const float* src = cols.ptr();
  float* out = image.ptr();
  const std::size_t chan_stride = static_cast<std::size_t>(d.in_h) * d.in_w;
  const std::size_t img_stride = static_cast<std::size_t>(d.in_ch) * chan_stride;

  std::size_t row = 0;
  for (int b = 0; b < d.batch; ++b) {
    for (int oh = 0; oh < d.out_h; ++oh) {
      for (int ow = 0; ow < d.out_w; ++ow, ++row) {
        const float* patch = src + row * d.patch_len;
        const int h0 = oh * d.stride - d.padding;
        const int w0 = ow * d.stride - d.padding;
        for (int c = 0; c < d.in_ch; ++c) {
          float* dst = out + b * img_stride + c * chan_stride;
          for (int r = 0; r < d.kh; ++r) {
            const int h = h0 + r;
            for (int s = 0; s < d.kw; ++s, ++patch) {
              const int w = w0 + s;
              if (h >= 0 && h < d.in_h && w >= 0 && w < d.in_w) {
                dst[static_cast<std::size_t>(h) * d.in_w + w] += *patch;
              }
            }
          }
        }
      }
    }
  }
  return image;
}

void matmul_abt(const float* a, int m, int k, const float* b, int n,
                float* out) {
  for (int i = 0; i < m; ++i) {
    const float* __restrict ai = a + static_cast<std::size_t>(i) * k;
    float* __restrict oi = out + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) {
      const float* __restrict bj = b + static_cast<std::size_t>(j) * k;
      float acc = 0.0f;
      for (int t = 0; t < k; ++t) acc += ai[t] * bj[t];
      oi[j] = acc;
    }
  }
}

Tensor conv2d_forward(const ConvLayerParams& params, const Tensor& input) {
  Conv2dDims d = conv2d_dims(input.shape, params.weights.shape, params.stride,
                             params.padding);
  if (static_cast<int>(params.bias.size()) != d.out_ch) {
    throw ShapeError("conv bias length != C_out");
  }

  Tensor cols = im2col(input, d.kh, d.kw, d.stride, d.padding);
  Tensor flat({d.patches, d.out_ch});
  matmul_abt(cols.ptr(), d.patches, d.patch_len, params.weights.ptr(), d.out_ch,
             flat.ptr());

  Tensor out({d.batch, d.out_ch, d.out_h, d.out_w});
  float* dst = out.ptr();
  const float* src = flat.ptr();
  const int hw = d.out_h * d.out_w;
  for (int b = 0; b < d.batch; ++b) {
    for (int c = 0; c < d.out_ch; ++c) {
      const float bias = params.bias[c];
      for (int i = 0; i < hw; ++i) {
        dst[(static_cast<std::size_t>(b) * d.out_ch + c) * hw + i] =
            src[(static_cast<std::size_t>(b) * hw + i) * d.out_ch + c] + bias;
      }
    }
  }
  return out;
}

ConvGrads conv2d_backward(const ConvLayerParams& params, const Tensor& input,
                          const Tensor& grad_out) {
  Conv2dDims d = conv2d_dims(input.shape, params.weights.shape, params.stride,
                             params.padding);
  const std::vector<int> expect = {d.batch, d.out_ch, d.out_h, d.out_w};
  if (grad_out.shape != expect) {
    throw ShapeError("grad_out shape " + grad_out.shape_str() +
                     " does not match conv output");
  }

  // grad_out as a (patches x C_out) matrix in im2col row order.
  Tensor gflat({d.patches, d.out_ch});
  {
    const float* src = grad_out.ptr();
    float* dst = gflat.ptr();
    const int hw = d.out_h * d.out_w;
    for (int b = 0; b < d.batch; ++b) {
      for (int c = 0; c < d.out_ch; ++c) {
        for (int i = 0; i < hw; ++i) {
          dst[(static_cast<std::size_t>(b) * hw + i) * d.out_ch + c] =
              src[(static_cast<std::size_t>(b) * d.out_ch + c) * hw + i];
        }
      }
    }
  }

  Tensor cols = im2col(input, d.kh, d.kw, d.stride, d.padding);

  ConvGrads g;
  // grad_W (C_out x patch_len) = gflat^T (C_out x P) * cols (P x patch_len).
  g.weights = Tensor(params.weights.shape);
  {
    float* gw = g.weights.ptr();
    const float* gf = gflat.ptr();
    const float* cl = cols.ptr();
    for (int p = 0; p < d.patches; ++p) {
      const float* grow = gf + static_cast<std::size_t>(p) * d.out_ch;
      const float* crow = cl + static_cast<std::size_t>(p) * d.patch_len;
      for (int c = 0; c < d.out_ch; ++c) {
        const float gv = grow[c];
        if (gv == 0.0f) continue;
        float* wrow = gw + static_cast<std::size_t>(c) * d.patch_len;
        for (int t = 0; t < d.patch_len; ++t) wrow[t] += gv * crow[t];
      }
    }
  }

  g.bias.assign(d.out_ch, 0.0f);
  {
    const float* gf = gflat.ptr();
    for (int p = 0; p < d.patches; ++p) {
      for (int c = 0; c < d.out_ch; ++c) {
        g.bias[c] += gf[static_cast<std::size_t>(p) * d.out_ch + c];
      }
    }
  }

  // grad_cols (P x patch_len) = gflat (P x C_out) * W (C_out x patch_len),
  // then scatter back to image space.
  Tensor gcols({d.patches, d.patch_len});
  {
    const float* gf = gflat.ptr();
    const float* w = params.weights.ptr();
    float* gc = gcols.ptr();
    for (int p = 0; p < d.patches; ++p) {
      const float* grow = gf + static_cast<std::size_t>(p) * d.out_ch;
      float* crow = gc + static_cast<std::size_t>(p) * d.patch_len;
      for (int c = 0; c < d.out_ch; ++c) {
        const float gv = grow[c];
        if (gv == 0.0f) continue;
        const float* wrow = w + static_cast<std::size_t>(c) * d.patch_len;
        for (int t = 0; t < d.patch_len; ++t) crow[t] += gv * wrow[t];
      }
    }
  }
  g.input = col2im(gcols, d);
  return g;
}

}  // namespace subp
