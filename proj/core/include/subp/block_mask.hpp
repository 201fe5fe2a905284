#pragma once

#include <optional>
#include <string>
#include <vector>

#include "subp/tensor.hpp"

namespace subp {

// 1xN block view of a conv weight tensor: N consecutive output channels
// sharing one input-channel index form a block. Row group j covers output
// channels [j*N, (j+1)*N); column k is the input channel.
struct BlockPartition {
  int n = 1;
  int num_row_groups = 0;
  int num_cols = 0;
  int kh = 1;
  int kw = 1;

  int block_len() const { return n * kh * kw; }
  int total_blocks() const { return num_row_groups * num_cols; }
};

// Throws ConfigError (naming the layer and listing usable N values) when
// C_out is not divisible by n.
BlockPartition make_partition(const std::vector<int>& weight_shape, int n,
                              const std::string& layer_name = "");

struct BlockMask {
  BlockPartition part;
  std::vector<std::uint8_t> bits;  // row-group-major, num_row_groups * num_cols

  static BlockMask ones(const BlockPartition& p);
  static BlockMask zeros(const BlockPartition& p);

  std::uint8_t get(int j, int k) const {
    return bits[static_cast<std::size_t>(j) * part.num_cols + k];
  }
  void set(int j, int k, std::uint8_t v) {
    bits[static_cast<std::size_t>(j) * part.num_cols + k] = v;
  }

  int row_count(int j) const;
  int total_count() const;
  // Kept count shared by all row groups, or nullopt when counts differ.
  std::optional<int> uniform_kept() const;
};

// Number of blocks each row group keeps at prune rate p: ceil(C_in * (1-p)).
int kept_per_group(int c_in, double p);

// Flattens block (j,k): output-channel-major, then kernel row, then kernel
// column. BSR values use this exact order.
std::vector<float> vectorize_block(const BlockPartition& part,
                                   const Tensor& weights, int j, int k);

// Non-destructive mask application: returns a copy with every weight in
// block (j,k) multiplied by the mask bit.
Tensor apply_mask(const Tensor& weights, const BlockMask& mask);

// Verifies every row group keeps exactly ceil(C_in*(1-p)) blocks and returns
// that count. Throws InvariantError listing offending row groups.
int assert_uniform(const BlockMask& mask, double p);

}  // namespace subp
