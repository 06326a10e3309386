#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vtinv/features.hpp"
#include "vtinv/net/model.hpp"
#include "vtinv/normalize.hpp"

namespace vtinv::net {

/// A trained model plus the statistics needed to apply it.
struct Checkpoint {
  /// Free-form settings written after the model.* keys, in insertion order.
  std::vector<std::pair<std::string, std::string>> settings;
  ModelParams params;
  ContourNormStats contour_stats;
  std::optional<FeatureNormStats> feature_stats;

  /// Value of `key` in settings, or nullopt.
  std::optional<std::string> setting(std::string_view key) const;
};

/// Text format: `VTINV1`, `key = value` lines, then `[array name rows cols]`
/// blocks of space-separated 17-digit decimals.
std::string write_checkpoint(const Checkpoint& ckpt);
Checkpoint parse_checkpoint(std::string_view text);

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace vtinv::net
