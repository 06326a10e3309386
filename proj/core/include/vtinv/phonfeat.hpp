#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "vtinv/alignment.hpp"
#include "vtinv/features.hpp"

namespace vtinv::phonfeat {

inline constexpr Eigen::Index kLogitColumns = 61;

/// Sorted, duplicate-free phone labels. Silence labels never appear here.
class PhoneInventory {
 public:
  PhoneInventory() = default;
  /// Throws ContractError if `labels` is unsorted or has duplicates.
  explicit PhoneInventory(std::vector<std::string> labels);

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }
  /// Index of `label`, or -1 when absent.
  Eigen::Index index_of(std::string_view label) const;

  friend bool operator==(const PhoneInventory& a, const PhoneInventory& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::map<std::string, Eigen::Index, std::less<>> index_;
};

PhoneInventory build_inventory(std::span<const Alignment> alignments,
                               const LabelSet& silence_labels);

/// `inventory.txt`: one label per line in canonical order.
std::string write_inventory(const PhoneInventory& inv);
PhoneInventory parse_inventory(std::string_view text);

/// Numerically stable row softmax.
Eigen::MatrixXd softmax_rows(const Eigen::Ref<const Eigen::MatrixXd>& logits);

/// Scalar statistics pooled over every entry of one session's posteriors.
struct SessionStats {
  double mean = 0.0;
  double std = 1.0;
  bool floored = false;  // std was raised to kStdFloor
};

SessionStats session_stats(std::span<const Eigen::MatrixXd> posteriors);
/// Per-column variant, for the per-dimension normalisation switch.
FeatureNormStats session_stats_per_dimension(std::span<const Eigen::MatrixXd> posteriors);

FeatureMatrix session_normalize(const Eigen::Ref<const Eigen::MatrixXd>& posteriors,
                                const SessionStats& stats);
FeatureMatrix session_normalize(const Eigen::Ref<const Eigen::MatrixXd>& posteriors,
                                const FeatureNormStats& stats);

/// One row per frame: the unit vector of the label covering the frame
/// midpoint, or all zeros for silence and uncovered frames.
FeatureMatrix onehot_encode(const Alignment& align, const PhoneInventory& inv,
                            double frame_rate_hz, Eigen::Index n_frames,
                            const LabelSet& silence_labels = default_silence_labels());

/// Argmax label per frame; empty string for all-zero rows.
std::vector<std::string> onehot_decode(const FeatureMatrix& onehot, const PhoneInventory& inv);

}  // namespace vtinv::phonfeat
