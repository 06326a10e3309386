#include "vtinv/phonfeat.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <spdlog/spdlog.h>

#include "vtinv/error.hpp"
#include "vtinv/text.hpp"

namespace vtinv::phonfeat {

PhoneInventory::PhoneInventory(std::vector<std::string> labels) : labels_(std::move(labels)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) throw ContractError("inventory: empty label");
    if (i > 0 && !(labels_[i - 1] < labels_[i])) {
      throw ContractError("inventory: labels must be sorted and distinct ('" + labels_[i - 1] +
                          "', '" + labels_[i] + "')");
    }
    index_.emplace(labels_[i], static_cast<Eigen::Index>(i));
  }
}

Eigen::Index PhoneInventory::index_of(std::string_view label) const {
  const auto it = index_.find(label);
  return it == index_.end() ? -1 : it->second;
}

PhoneInventory build_inventory(std::span<const Alignment> alignments,
                               const LabelSet& silence_labels) {
  if (alignments.empty()) throw ContractError("build_inventory: no alignments");
  std::set<std::string> labels;
  for (const auto& align : alignments) {
    for (const auto& seg : align) {
      if (!silence_labels.contains(seg.label)) labels.insert(seg.label);
    }
  }
  if (labels.empty()) throw ContractError("build_inventory: only silence labels found");
  return PhoneInventory({labels.begin(), labels.end()});
}

std::string write_inventory(const PhoneInventory& inv) {
  std::string out;
  for (const auto& l : inv.labels()) out.append(l).push_back('\n');
  return out;
}

PhoneInventory parse_inventory(std::string_view text) {
  std::vector<std::string> labels;
  for (auto l : text::lines(text)) {
    const auto t = text::trim(l);
    if (!t.empty()) labels.emplace_back(t);
  }
  return PhoneInventory(std::move(labels));
}

Eigen::MatrixXd softmax_rows(const Eigen::Ref<const Eigen::MatrixXd>& logits) {
  Eigen::MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double peak = logits.row(r).maxCoeff();
    out.row(r) = (logits.row(r).array() - peak).exp();
    out.row(r) /= out.row(r).sum();
  }
  return out;
}

SessionStats session_stats(std::span<const Eigen::MatrixXd> posteriors) {
  double sum = 0.0;
  double count = 0.0;
  for (const auto& p : posteriors) {
    sum += p.sum();
    count += static_cast<double>(p.size());
  }
  if (count == 0.0) throw ContractError("session_stats: no posterior entries");
  SessionStats stats;
  stats.mean = sum / count;
  double sq = 0.0;
  for (const auto& p : posteriors) sq += (p.array() - stats.mean).square().sum();
  stats.std = std::sqrt(sq / count);
  if (stats.std < kStdFloor) {
    stats.std = kStdFloor;
    stats.floored = true;
  }
  return stats;
}

FeatureNormStats session_stats_per_dimension(std::span<const Eigen::MatrixXd> posteriors) {
  return feature_norm_stats(posteriors);
}

FeatureMatrix session_normalize(const Eigen::Ref<const Eigen::MatrixXd>& posteriors,
                                const SessionStats& stats) {
  SessionStats s = stats;
  if (!(s.std >= kStdFloor)) {
    spdlog::warn("session std {} below floor, using {}", s.std, kStdFloor);
    s.std = kStdFloor;
  } else if (s.floored) {
    spdlog::warn("session posteriors are constant; std floored at {}", kStdFloor);
  }
  return {(posteriors.array() - s.mean) / s.std, FeatureKind::posterior61};
}

FeatureMatrix session_normalize(const Eigen::Ref<const Eigen::MatrixXd>& posteriors,
                                const FeatureNormStats& stats) {
  FeatureMatrix f{posteriors, FeatureKind::posterior61};
  return feature_zscore(f, stats);
}

FeatureMatrix onehot_encode(const Alignment& align, const PhoneInventory& inv,
                            double frame_rate_hz, Eigen::Index n_frames,
                            const LabelSet& silence_labels) {
  FeatureMatrix out;
  out.kind = FeatureKind::onehot;
  out.data = Eigen::MatrixXd::Zero(n_frames, static_cast<Eigen::Index>(inv.size()));
  for (Eigen::Index t = 0; t < n_frames; ++t) {
    const auto seg = segment_at(align, frame_midpoint_s(static_cast<std::size_t>(t), frame_rate_hz));
    if (!seg) continue;
    const std::string& label = align[*seg].label;
    if (silence_labels.contains(label)) continue;
    const Eigen::Index idx = inv.index_of(label);
    if (idx < 0) throw ContractError("onehot_encode: label '" + label + "' not in inventory");
    out.data(t, idx) = 1.0;
  }
  return out;
}

std::vector<std::string> onehot_decode(const FeatureMatrix& onehot, const PhoneInventory& inv) {
  std::vector<std::string> out(static_cast<std::size_t>(onehot.frames()));
  for (Eigen::Index t = 0; t < onehot.frames(); ++t) {
    Eigen::Index idx = 0;
    if (onehot.data.row(t).maxCoeff(&idx) > 0.0) {
      out[static_cast<std::size_t>(t)] = inv.labels()[static_cast<std::size_t>(idx)];
    }
  }
  return out;
}

}  // namespace vtinv::phonfeat
