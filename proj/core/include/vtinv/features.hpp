#pragma once

#include <span>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace vtinv {

enum class FeatureKind { mfcc39, posterior61, onehot };

std::string_view feature_kind_name(FeatureKind kind) noexcept;
FeatureKind parse_feature_kind(std::string_view name);

/// T x D frame-synchronous features, one row per contour frame.
struct FeatureMatrix {
  Eigen::MatrixXd data;
  FeatureKind kind = FeatureKind::mfcc39;

  Eigen::Index frames() const noexcept { return data.rows(); }
  Eigen::Index dim() const noexcept { return data.cols(); }
};

inline constexpr double kStdFloor = 1e-8;

/// Per-column standardisation statistics, computed on the training split.
struct FeatureNormStats {
  Eigen::VectorXd mean;
  Eigen::VectorXd std;
};

/// Population mean/std of every column over all rows of all matrices.
FeatureNormStats feature_norm_stats(std::span<const Eigen::MatrixXd> matrices);

/// (x - mean) / std per column; kind is preserved.
FeatureMatrix feature_zscore(const FeatureMatrix& features, const FeatureNormStats& stats);

}  // namespace vtinv
