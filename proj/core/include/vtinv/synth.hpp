#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "vtinv/contours.hpp"
#include "vtinv/corpus.hpp"

namespace vtinv::synth {

struct SynthSpec {
  std::size_t n_sequences = 40;
  std::size_t frames_per_sequence = 120;
  std::size_t inventory_size = 12;  // including the single silence label
  double frame_rate_hz = 50.0;
  std::uint64_t seed = 1;
  double coarticulation_tau_s = 0.04;
  double audio_noise_db = -30.0;    // noise std relative to full scale
  double logit_noise_std = 0.5;
  double image_size_px = kImageSizePx;
  std::size_t n_sessions = 5;

  void validate() const;
};

inline constexpr std::string_view kSilenceLabel = "sil";
inline constexpr double kToneAmplitude = 0.3;
inline constexpr double kLogitBoost = 6.0;

/// Per-label generative parameters; label 0 is silence.
struct SynthModel {
  std::vector<std::string> labels;
  std::vector<FrameContours> prototypes;
  std::vector<std::array<double, 2>> formants_hz;  // unused for silence
};

SynthModel build_model(const SynthSpec& spec);

/// Rest shapes of the eight articulators (the silence prototype).
FrameContours base_shape();

/// First-order smoothing of per-frame targets: y_t = y_{t-1} + a (p_t - y_{t-1}),
/// a = 1 - exp(-1 / (rate * tau)), y_0 = p_0. tau <= 0 returns the targets.
ContourSequence coarticulate(std::span<const FrameContours> targets, double frame_rate_hz,
                             double tau_s);

/// Deterministic in-memory corpus: identical specs give identical records.
std::vector<SequenceRecord> generate_corpus(const SynthSpec& spec);

/// generate_corpus written in the corpus directory layout.
void write_corpus(const std::filesystem::path& root, std::span<const SequenceRecord> records);

/// Predicts the training-mean contour for every frame, whatever the input.
class ConstantMeanPredictor {
 public:
  explicit ConstantMeanPredictor(std::span<const ContourSequence> train);

  const FrameContours& mean_frame() const noexcept { return mean_; }
  ContourSequence predict(Eigen::Index n_frames, double frame_rate_hz = 50.0) const;
  ContourSequence predict(const Eigen::Ref<const Eigen::MatrixXd>& features,
                          double frame_rate_hz = 50.0) const {
    return predict(features.rows(), frame_rate_hz);
  }

 private:
  FrameContours mean_;
};

}  // namespace vtinv::synth
