#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vtinv/alignment.hpp"
#include "vtinv/dsp.hpp"
#include "vtinv/eval.hpp"
#include "vtinv/net/model.hpp"
#include "vtinv/net/trainer.hpp"

namespace vtinv {

enum class SessionNorm { scalar, per_dimension };

/// Everything that shapes an experiment run, minus the experiment kind.
struct PipelineConfig {
  dsp::MfccConfig mfcc;
  net::ModelConfig model;
  net::TrainConfig train;
  std::uint64_t split_seed = 0;
  LabelSet silence_labels = default_silence_labels();
  SessionNorm session_norm = SessionNorm::scalar;
  eval::MedianMode median_mode = eval::MedianMode::coordinate;
};

using Settings = std::vector<std::pair<std::string, std::string>>;

/// `key = value` lines; `#` starts a comment line.
Settings parse_settings(std::string_view text);

/// Applies known keys (model.*, train.*, mfcc.*, eval.*). Unknown keys throw.
void apply_settings(PipelineConfig& cfg, const Settings& settings);

/// `paper`: 300 units, 300 epochs. `desk`: 64 units, 30 epochs.
void apply_preset(PipelineConfig& cfg, std::string_view preset);

/// Every key apply_settings understands, with the current values.
Settings to_settings(const PipelineConfig& cfg);

}  // namespace vtinv
