#pragma once

#include <span>

#include <Eigen/Core>

#include "vtinv/contours.hpp"
#include "vtinv/features.hpp"

namespace vtinv {

/// Per-coordinate z-score statistics over the 800 flattened coordinates.
struct ContourNormStats {
  Eigen::VectorXd mean;  // 800, px
  Eigen::VectorXd std;   // 800, px, floored at kStdFloor
};

/// Population mean/std over every frame of the (training) sequences.
/// Requires at least two frames in total.
ContourNormStats contour_norm_stats(std::span<const ContourSequence> train);

/// Forward direction: T x 800 matrix of z-scores.
Eigen::MatrixXd normalize_contours(const ContourSequence& seq, const ContourNormStats& stats);

/// Inverse direction: z-scores back to pixel-space contours.
ContourSequence denormalize_contours(const Eigen::Ref<const Eigen::MatrixXd>& z,
                                     const ContourNormStats& stats, double frame_rate_hz = 50.0);

}  // namespace vtinv
