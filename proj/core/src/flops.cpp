#include "subp/flops.hpp"

#include "subp/error.hpp"

namespace subp {

std::uint64_t count_flops(const TinyNet& net) {
  std::vector<const BlockMask*> none(net.convs.size(), nullptr);
  return count_flops(net, none);
}

std::uint64_t count_flops(const TinyNet& net,
                          const std::vector<const BlockMask*>& conv_masks) {
  if (conv_masks.size() != net.convs.size()) {
    throw InputError("conv_masks must have one entry per conv layer");
  }
  std::uint64_t total = 0;
  std::vector<int> shape = {1, net.cfg.image_channels, net.cfg.image_size,
                            net.cfg.image_size};
  for (std::size_t i = 0; i < net.convs.size(); ++i) {
    const ConvLayerParams& c = net.convs[i];
    Conv2dDims d = conv2d_dims(shape, c.weights.shape, c.stride, c.padding);
    const std::uint64_t spatial =
        static_cast<std::uint64_t>(d.out_h) * d.out_w;
    if (conv_masks[i] != nullptr) {
      const BlockMask& m = *conv_masks[i];
      const std::uint64_t per_block =
          static_cast<std::uint64_t>(m.part.n) * m.part.kh * m.part.kw;
      total += static_cast<std::uint64_t>(m.total_count()) * per_block * spatial;
    } else {
      total += static_cast<std::uint64_t>(d.out_ch) * d.in_ch * d.kh * d.kw *
               spatial;
    }
    shape = {1, d.out_ch, d.out_h, d.out_w};
  }
  total += static_cast<std::uint64_t>(net.fc_weights.dim(0)) *
           net.fc_weights.dim(1);
  return total;
}

}  // namespace subp
