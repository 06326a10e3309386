#include "vtinv/normalize.hpp"

#include "vtinv/error.hpp"

namespace vtinv {

ContourNormStats contour_norm_stats(std::span<const ContourSequence> train) {
  constexpr auto width = static_cast<Eigen::Index>(kCoordsPerFrame);
  // Welford accumulation: one pass, numerically stable for large frame counts.
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(width);
  Eigen::VectorXd m2 = Eigen::VectorXd::Zero(width);
  std::size_t n = 0;
  for (const auto& seq : train) {
    for (const auto& frame : seq.frames) {
      ++n;
      const Eigen::VectorXd x = frame.flatten();
      const Eigen::VectorXd delta = x - mean;
      mean += delta / static_cast<double>(n);
      m2.array() += delta.array() * (x - mean).array();
    }
  }
  if (n == 0) throw ContractError("contour_norm_stats: no training frames");
  if (n < 2) throw ContractError("contour_norm_stats: need at least 2 frames");

  ContourNormStats stats;
  stats.mean = std::move(mean);
  stats.std = (m2 / static_cast<double>(n)).array().sqrt().max(kStdFloor);
  return stats;
}

Eigen::MatrixXd normalize_contours(const ContourSequence& seq, const ContourNormStats& stats) {
  const Eigen::MatrixXd x = seq.to_matrix();
  return (x.rowwise() - stats.mean.transpose()).array().rowwise() / stats.std.transpose().array();
}

ContourSequence denormalize_contours(const Eigen::Ref<const Eigen::MatrixXd>& z,
                                     const ContourNormStats& stats, double frame_rate_hz) {
  if (z.cols() != static_cast<Eigen::Index>(kCoordsPerFrame)) {
    throw ContractError("denormalize_contours: matrix must be 800 wide, got " +
                        std::to_string(z.cols()));
  }
  const Eigen::MatrixXd px =
      (z.array().rowwise() * stats.std.transpose().array()).rowwise() + stats.mean.transpose().array();
  return ContourSequence::from_matrix(px, frame_rate_hz);
}

}  // namespace vtinv
