#pragma once

#include "vtinv/net/model.hpp"

namespace vtinv::net {

struct AdamState {
  ModelParams m;
  ModelParams v;
  long step_count = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double lr = 1e-3;

  /// Zero moments shaped like `params`.
  static AdamState for_params(const ModelParams& params, double lr = 1e-3);
};

/// One bias-corrected Adam update of `params` in place.
void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state);

}  // namespace vtinv::net
