#pragma once

#include <cstdint>
#include <vector>

#include "subp/block_mask.hpp"
#include "subp/model.hpp"

namespace subp {

// FLOPs with one multiply-accumulate counted as one operation, for a single
// input image. Convs contribute C_out*C_in*Kh*Kw*H_out*W_out, the classifier
// C_out*C_in; pooling and relu are not counted.
//
// conv_masks, when given, must have one entry per conv layer (nullptr for a
// dense layer); a masked layer contributes kept_blocks * N * Kh * Kw * H * W.
std::uint64_t count_flops(const TinyNet& net);
std::uint64_t count_flops(const TinyNet& net,
                          const std::vector<const BlockMask*>& conv_masks);

}  // namespace subp
