#pragma once

#include <cstdint>
#include <string>

#include "vtinv/net/model.hpp"

namespace vtinv::net {

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_param;
  Eigen::Index worst_index = -1;
  std::size_t entries_checked = 0;
  int attempts = 0;  // parameter draws needed to clear relu kinks
};

/// Compares every analytic gradient entry of mse_loss with a central
/// difference. Random inputs/targets come from `seed`; parameter draws whose
/// relu pre-activations come within 1e-4 of zero are rejected and redrawn.
GradCheckResult grad_check(ModelConfig config, Eigen::Index n_frames, double epsilon,
                           std::uint64_t seed);

}  // namespace vtinv::net
