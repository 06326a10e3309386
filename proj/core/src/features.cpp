#include "vtinv/features.hpp"

#include "vtinv/error.hpp"

namespace vtinv {

std::string_view feature_kind_name(FeatureKind kind) noexcept {
  switch (kind) {
    case FeatureKind::mfcc39: return "mfcc39";
    case FeatureKind::posterior61: return "posterior61";
    case FeatureKind::onehot: return "onehot";
  }
  return "unknown";
}

FeatureKind parse_feature_kind(std::string_view name) {
  if (name == "mfcc39") return FeatureKind::mfcc39;
  if (name == "posterior61") return FeatureKind::posterior61;
  if (name == "onehot") return FeatureKind::onehot;
  throw ParseError("unknown feature kind '" + std::string(name) + "'");
}

FeatureNormStats feature_norm_stats(std::span<const Eigen::MatrixXd> matrices) {
  if (matrices.empty()) throw ContractError("feature_norm_stats: no matrices");
  const Eigen::Index dim = matrices.front().cols();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
  Eigen::Index n = 0;
  for (const auto& m : matrices) {
    if (m.cols() != dim) throw ContractError("feature_norm_stats: inconsistent widths");
    sum += m.colwise().sum().transpose();
    n += m.rows();
  }
  if (n == 0) throw ContractError("feature_norm_stats: no rows");
  FeatureNormStats stats;
  stats.mean = sum / static_cast<double>(n);
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(dim);
  for (const auto& m : matrices) {
    sq += (m.rowwise() - stats.mean.transpose()).array().square().colwise().sum().matrix().transpose();
  }
  stats.std = (sq / static_cast<double>(n)).array().sqrt().max(kStdFloor);
  return stats;
}

FeatureMatrix feature_zscore(const FeatureMatrix& features, const FeatureNormStats& stats) {
  if (stats.mean.size() != features.dim() || stats.std.size() != features.dim()) {
    throw ContractError("feature_zscore: stats have dimension " + std::to_string(stats.mean.size()) +
                        ", features " + std::to_string(features.dim()));
  }
  FeatureMatrix out;
  out.kind = features.kind;
  out.data = (features.data.rowwise() - stats.mean.transpose()).array().rowwise() /
             stats.std.transpose().array();
  return out;
}

}  // namespace vtinv
