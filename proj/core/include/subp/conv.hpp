#pragma once

#include <vector>

#include "subp/tensor.hpp"

namespace subp {

struct ConvLayerParams {
  Tensor weights;           // (C_out, C_in, Kh, Kw)
  std::vector<float> bias;  // C_out
  int stride = 1;
  int padding = 0;
};

struct Conv2dDims {
  int batch, in_ch, in_h, in_w;
  int out_ch, kh, kw;
  int stride, padding;
  int out_h, out_w;
  int patches;     // batch * out_h * out_w
  int patch_len;   // in_ch * kh * kw
};

// Validates shapes and computes output geometry. Throws ShapeError.
Conv2dDims conv2d_dims(const std::vector<int>& input_shape,
                       const std::vector<int>& weight_shape, int stride,
                       int padding);

// Lowers NCHW input to a (patches x C_in*Kh*Kw) matrix. Row r holds one
// receptive field; rows run batch-major then output row then output column.
// Within a row, all Kh*Kw taps of input channel 0 come first, then channel 1,
// and so on. Block-sparse matmul relies on this exact column order.
Tensor im2col(const Tensor& input, int kh, int kw, int stride, int padding);

// Scatters patch-space gradients back to an NCHW image (adjoint of im2col).
Tensor col2im(const Tensor& cols, const Conv2dDims& d);

// out (m x n) = a (m x k) * b (n x k)^T. Accumulation runs over ascending k.
void matmul_abt(const float* a, int m, int k, const float* b, int n,
                float* out);

Tensor conv2d_forward(const ConvLayerParams& params, const Tensor& input);

struct ConvGrads {
  Tensor weights;
  std::vector<float> bias;
  Tensor input;
};

ConvGrads conv2d_backward(const ConvLayerParams& params, const Tensor& input,
                          const Tensor& grad_out);

}  // namespace subp
