#include "vtinv/contours.hpp"

#include <cmath>

#include "vtinv/error.hpp"

namespace vtinv {

namespace {
constexpr std::array<std::string_view, kArticulatorCount> kNames = {
    "arytenoid", "epiglottis", "lower_lip",  "pharyngeal_wall",
    "velum",     "tongue",     "upper_lip",  "vocal_folds",
};
}  // namespace

std::string_view articulator_name(Articulator a) noexcept { return kNames[index_of(a)]; }

std::optional<Articulator> parse_articulator(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return kArticulators[i];
  }
  return std::nullopt;
}

Eigen::VectorXd FrameContours::flatten() const {
  Eigen::VectorXd flat(static_cast<Eigen::Index>(kCoordsPerFrame));
  for (Articulator a : kArticulators) {
    const Contour& c = (*this)[a];
    for (std::size_t p = 0; p < kPointsPerContour; ++p) {
      flat[static_cast<Eigen::Index>(flat_index(a, p, 0))] = c[p].x_px;
      flat[static_cast<Eigen::Index>(flat_index(a, p, 1))] = c[p].y_px;
    }
  }
  return flat;
}

FrameContours FrameContours::unflatten(const Eigen::Ref<const Eigen::VectorXd>& flat) {
  if (flat.size() != static_cast<Eigen::Index>(kCoordsPerFrame)) {
    throw ContractError("flattened frame must have 800 coordinates, got " +
                        std::to_string(flat.size()));
  }
  FrameContours frame;
  for (Articulator a : kArticulators) {
    Contour& c = frame[a];
    for (std::size_t p = 0; p < kPointsPerContour; ++p) {
      c[p].x_px = flat[static_cast<Eigen::Index>(flat_index(a, p, 0))];
      c[p].y_px = flat[static_cast<Eigen::Index>(flat_index(a, p, 1))];
    }
  }
  return frame;
}

bool FrameContours::all_finite() const noexcept {
  for (const Contour& c : contours) {
    for (const Point2D& p : c) {
      if (!std::isfinite(p.x_px) || !std::isfinite(p.y_px)) return false;
    }
  }
  return true;
}

bool FrameContours::within(double image_size_px) const noexcept {
  for (const Contour& c : contours) {
    for (const Point2D& p : c) {
      if (!(p.x_px >= 0.0 && p.x_px <= image_size_px && p.y_px >= 0.0 &&
            p.y_px <= image_size_px)) {
        return false;
      }
    }
  }
  return true;
}

Eigen::MatrixXd ContourSequence::to_matrix() const {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(frames.size()),
                    static_cast<Eigen::Index>(kCoordsPerFrame));
  for (std::size_t t = 0; t < frames.size(); ++t) {
    m.row(static_cast<Eigen::Index>(t)) = frames[t].flatten().transpose();
  }
  return m;
}

ContourSequence ContourSequence::from_matrix(const Eigen::Ref<const Eigen::MatrixXd>& m,
                                             double frame_rate_hz) {
  if (m.cols() != static_cast<Eigen::Index>(kCoordsPerFrame)) {
    throw ContractError("contour matrix must be 800 wide, got " + std::to_string(m.cols()));
  }
  ContourSequence seq;
  seq.frame_rate_hz = frame_rate_hz;
  seq.frames.reserve(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index t = 0; t < m.rows(); ++t) {
    seq.frames.push_back(FrameContours::unflatten(m.row(t).transpose()));
  }
  return seq;
}

}  // namespace vtinv
