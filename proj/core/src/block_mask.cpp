#include "subp/block_mask.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "subp/error.hpp"

namespace subp {

BlockPartition make_partition(const std::vector<int>& weight_shape, int n,
                              const std::string& layer_name) {
  if (weight_shape.size() != 4) {
    throw ShapeError("block partition expects (C_out, C_in, Kh, Kw) weights");
  }
  const int c_out = weight_shape[0];
  const int c_in = weight_shape[1];
  if (n < 1) throw ConfigError("block height N must be >= 1");
  if (c_out < 1 || c_in < 1) throw ShapeError("conv dims must be >= 1");
  if (c_out % n != 0) {
    std::ostringstream os;
    if (!layer_name.empty()) os << layer_name << ": ";
    os << "C_out=" << c_out << " is not divisible by N=" << n
       << "; usable N values:";
    for (int d = 1; d <= c_out && d <= 64; ++d) {
      if (c_out % d == 0) os << " " << d;
    }
    throw ConfigError(os.str());
  }
  BlockPartition p;
  p.n = n;
  p.num_row_groups = c_out / n;
  p.num_cols = c_in;
  p.kh = weight_shape[2];
  p.kw = weight_shape[3];
  return p;
}

BlockMask BlockMask::ones(const BlockPartition& p) {
  BlockMask m;
  m.part = p;
  m.bits.assign(static_cast<std::size_t>(p.total_blocks()), 1);
  return m;
}

BlockMask BlockMask::zeros(const BlockPartition& p) {
  BlockMask m;
  m.part = p;
  m.bits.assign(static_cast<std::size_t>(p.total_blocks()), 0);
  return m;
}

int BlockMask::row_count(int j) const {
  const std::size_t base = static_cast<std::size_t>(j) * part.num_cols;
  int c = 0;
  for (int k = 0; k < part.num_cols; ++k) c += bits[base + k];
  return c;
}

int BlockMask::total_count() const {
  return std::accumulate(bits.begin(), bits.end(), 0);
}

std::optional<int> BlockMask::uniform_kept() const {
  if (part.num_row_groups == 0) return std::nullopt;
  const int first = row_count(0);
  for (int j = 1; j < part.num_row_groups; ++j) {
    if (row_count(j) != first) return std::nullopt;
  }
  return first;
}

int kept_per_group(int c_in, double p) {
  // Tiny slack keeps float-borne p values (e.g. 0.3f) from bumping the ceil.
  const double x = static_cast<double>(c_in) * (1.0 - p);
  return static_cast<int>(std::ceil(x - 1e-9));
}

std::vector<float> vectorize_block(const BlockPartition& part,
                                   const Tensor& weights, int j, int k) {
  if (j < 0 || j >= part.num_row_groups || k < 0 || k >= part.num_cols) {
    throw InputError("block index (" + std::to_string(j) + "," +
                     std::to_string(k) + ") out of range");
  }
  const int kh = part.kh, kw = part.kw, n = part.n;
  std::vector<float> out(static_cast<std::size_t>(part.block_len()));
  std::size_t idx = 0;
  for (int t = 0; t < n; ++t) {
    const int co = j * n + t;
    for (int r = 0; r < kh; ++r) {
      for (int s = 0; s < kw; ++s) {
        out[idx++] = weights.at4(co, k, r, s);
      }
    }
  }
  return out;
}

Tensor apply_mask(const Tensor& weights, const BlockMask& mask) {
  const BlockPartition& p = mask.part;
  if (weights.rank() != 4 || weights.dim(0) != p.n * p.num_row_groups ||
      weights.dim(1) != p.num_cols || weights.dim(2) != p.kh ||
      weights.dim(3) != p.kw) {
    throw ShapeError("mask partition does not match weight shape " +
                     weights.shape_str());
  }
  Tensor out = weights;
  const int khw = p.kh * p.kw;
  for (int j = 0; j < p.num_row_groups; ++j) {
    for (int k = 0; k < p.num_cols; ++k) {
      if (mask.get(j, k)) continue;
      for (int t = 0; t < p.n; ++t) {
        float* dst = out.ptr() +
                     (static_cast<std::size_t>(j * p.n + t) * p.num_cols + k) *
                         khw;
        for (int e = 0; e < khw; ++e) dst[e] = 0.0f;
      }
    }
  }
  return out;
}

int assert_uniform(const BlockMask& mask, double p) {
  const int want = kept_per_group(mask.part.num_cols, p);
  std::vector<int> bad;
  for (int j = 0; j < mask.part.num_row_groups; ++j) {
    if (mask.row_count(j) != want) bad.push_back(j);
  }
  if (!bad.empty()) {
    std::ostringstream os;
    os << "mask violates uniform sparsity: expected " << want
       << " kept blocks per row group, offending row groups:";
    for (int j : bad) os << " " << j << "(" << mask.row_count(j) << ")";
    throw InvariantError(os.str());
  }
  return want;
}

}  // namespace subp
