#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "vtinv/alignment.hpp"
#include "vtinv/contours.hpp"
#include "vtinv/features.hpp"
#include "vtinv/wav.hpp"

namespace vtinv {

struct SequenceKey {
  std::string session_id;
  std::string seq_id;

  std::string str() const { return session_id + "/" + seq_id; }

  friend auto operator<=>(const SequenceKey&, const SequenceKey&) = default;
  friend bool operator==(const SequenceKey&, const SequenceKey&) = default;
};

/// Everything stored under `corpus/<session_id>/<seq_id>/`.
struct SequenceRecord {
  SequenceKey key;
  Audio audio;
  ContourSequence contours;
  Alignment align_auto;
  Alignment align_expert;
  std::optional<Eigen::MatrixXd> w2v_logits;
};

/// Throws DataError unless audio duration matches the contour duration to
/// within one frame, and logits (when present) have one row per frame.
void validate_record(const SequenceRecord& rec);

SequenceRecord load_sequence(const std::filesystem::path& dir, SequenceKey key);
void write_sequence(const std::filesystem::path& corpus_root, const SequenceRecord& rec);

/// All sequences under `root`, sorted by (session, seq). Loads in parallel.
std::vector<SequenceRecord> load_corpus(const std::filesystem::path& root);
std::vector<SequenceKey> list_corpus(const std::filesystem::path& root);

/// Drops frames whose midpoint falls in a silence-labelled segment or in no
/// segment at all. Feature and contour outputs keep equal length and order.
std::pair<FeatureMatrix, ContourSequence> remove_silence(const FeatureMatrix& features,
                                                         const ContourSequence& contours,
                                                         const Alignment& align,
                                                         const LabelSet& silence_labels);

/// Indices of the frames remove_silence keeps.
std::vector<Eigen::Index> voiced_frames(std::size_t n_frames, double frame_rate_hz,
                                        const Alignment& align, const LabelSet& silence_labels);

}  // namespace vtinv
