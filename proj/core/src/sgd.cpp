#include "subp/sgd.hpp"

#include <cmath>

#include "subp/error.hpp"

namespace subp {

void SgdConfig::validate() const {
  if (momentum < 0.0f || momentum >= 1.0f) {
    throw ConfigError("momentum must be in [0,1)");
  }
  if (weight_decay < 0.0f) throw ConfigError("weight_decay must be >= 0");
  if (label_smoothing < 0.0f || label_smoothing >= 1.0f) {
    throw ConfigError("label_smoothing must be in [0,1)");
  }
  if (peak_lr <= 0.0f) throw ConfigError("peak_lr must be > 0");
  if (warmup_epochs < 0) throw ConfigError("warmup_epochs must be >= 0");
  if (total_epochs < 1) throw ConfigError("epochs must be >= 1");
  if (warmup_epochs >= total_epochs) {
    throw ConfigError("warmup_epochs must be < epochs");
  }
}

double learning_rate(const SgdConfig& cfg, double epoch_fraction) {
  const double peak = cfg.peak_lr;
  const double warm = cfg.warmup_epochs;
  const double total = cfg.total_epochs;
  if (epoch_fraction <= 0.0) return 0.0;
  if (epoch_fraction < warm) return peak * epoch_fraction / warm;
  if (epoch_fraction >= total) return 0.0;
  const double x = (epoch_fraction - warm) / (total - warm);
  return peak * 0.5 * (1.0 + std::cos(M_PI * x));
}

void SgdState::init(const std::vector<ParamSlot>& slots) {
  velocity.clear();
  velocity.reserve(slots.size());
  for (const ParamSlot& s : slots) {
    velocity.emplace_back(s.n, 0.0f);
  }
}

void sgd_step(std::vector<ParamSlot>& slots, SgdState& state,
              const SgdConfig& cfg, double epoch_fraction) {
  const float lr = static_cast<float>(learning_rate(cfg, epoch_fraction));
  const float mu = cfg.momentum;
  const float wd = cfg.weight_decay;

  for (std::size_t i = 0; i < slots.size(); ++i) {
    ParamSlot& s = slots[i];
    float* v = state.velocity[i].data();
    if (s.mask == nullptr) {
      for (std::size_t t = 0; t < s.n; ++t) {
        v[t] = mu * v[t] + (s.grad[t] + wd * s.value[t]);
        s.value[t] -= lr * v[t];
      }
    } else {
      for (std::size_t t = 0; t < s.n; ++t) {
        const float m = s.mask[t];
        v[t] = mu * v[t] + m * (s.grad[t] + wd * s.value[t]);
        s.value[t] -= lr * m * v[t];
      }
    }
  }
}

}  // namespace subp
