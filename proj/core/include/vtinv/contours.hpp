#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace vtinv {

/// Canonical articulator order. Every flattened layout in the library
/// (800-wide rows, report rows, plot colours) follows this order.
enum class Articulator : std::uint8_t {
  arytenoid,
  epiglottis,
  lower_lip,
  pharyngeal_wall,
  velum,
  tongue,
  upper_lip,
  vocal_folds,
};

inline constexpr std::size_t kArticulatorCount = 8;
inline constexpr std::size_t kPointsPerContour = 50;
inline constexpr std::size_t kCoordsPerArticulator = kPointsPerContour * 2;
inline constexpr std::size_t kCoordsPerFrame = kArticulatorCount * kCoordsPerArticulator;  // 800
inline constexpr double kPixelSpacingMm = 1.62;
inline constexpr double kImageSizePx = 136.0;

inline constexpr std::array<Articulator, kArticulatorCount> kArticulators = {
    Articulator::arytenoid,       Articulator::epiglottis, Articulator::lower_lip,
    Articulator::pharyngeal_wall, Articulator::velum,      Articulator::tongue,
    Articulator::upper_lip,       Articulator::vocal_folds,
};

std::string_view articulator_name(Articulator a) noexcept;
std::optional<Articulator> parse_articulator(std::string_view name) noexcept;

constexpr std::size_t index_of(Articulator a) noexcept { return static_cast<std::size_t>(a); }

/// Index of a coordinate inside the flattened 800-vector.
constexpr std::size_t flat_index(Articulator a, std::size_t point, std::size_t axis) noexcept {
  return index_of(a) * kCoordsPerArticulator + point * 2 + axis;
}

struct Point2D {
  double x_px = 0.0;
  double y_px = 0.0;

  friend bool operator==(const Point2D&, const Point2D&) = default;
};

using Contour = std::array<Point2D, kPointsPerContour>;

/// One MRI frame: all eight articulators, fifty points each. The fixed-size
/// storage makes an incomplete frame unrepresentable.
struct FrameContours {
  std::array<Contour, kArticulatorCount> contours{};

  Contour& operator[](Articulator a) noexcept { return contours[index_of(a)]; }
  const Contour& operator[](Articulator a) const noexcept { return contours[index_of(a)]; }

  Eigen::VectorXd flatten() const;
  static FrameContours unflatten(const Eigen::Ref<const Eigen::VectorXd>& flat);

  bool all_finite() const noexcept;
  bool within(double image_size_px) const noexcept;

  friend bool operator==(const FrameContours&, const FrameContours&) = default;
};

struct ContourSequence {
  std::vector<FrameContours> frames;
  double frame_rate_hz = 50.0;

  std::size_t size() const noexcept { return frames.size(); }

  /// T x 800 matrix in canonical flattened order.
  Eigen::MatrixXd to_matrix() const;
  static ContourSequence from_matrix(const Eigen::Ref<const Eigen::MatrixXd>& m,
                                     double frame_rate_hz);

  friend bool operator==(const ContourSequence&, const ContourSequence&) = default;
};

constexpr double to_millimeters(double value_px) noexcept { return value_px * kPixelSpacingMm; }

}  // namespace vtinv
