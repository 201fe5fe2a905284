#pragma once

#include <cstddef>
#include <vector>

namespace subp {

struct SgdConfig {
  float peak_lr = 0.05f;
  int warmup_epochs = 2;
  int total_epochs = 60;
  float momentum = 0.875f;
  float weight_decay = 3e-5f;
  float label_smoothing = 0.1f;

  void validate() const;  // throws ConfigError
};

// Linear warmup from 0 to peak_lr over warmup_epochs, then cosine decay to 0
// at total_epochs. epoch_fraction is continuous epochs elapsed.
double learning_rate(const SgdConfig& cfg, double epoch_fraction);

// One parameter tensor participating in an update. `mask`, when non-null,
// points at a same-length 0/1 buffer; masked-out entries receive no gradient,
// no weight decay and no parameter movement.
struct ParamSlot {
  float* value = nullptr;
  const float* grad = nullptr;
  const float* mask = nullptr;
  std::size_t n = 0;
};

struct SgdState {
  std::vector<std::vector<float>> velocity;
  void init(const std::vector<ParamSlot>& slots);
};

// Classic momentum SGD with coupled weight decay:
//   v <- momentum * v + m * (g + wd * w); w <- w - lr * m * v
// where m is the per-entry mask gate (1 when unmasked).
void sgd_step(std::vector<ParamSlot>& slots, SgdState& state,
              const SgdConfig& cfg, double epoch_fraction);

}  // namespace subp
