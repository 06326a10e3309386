#pragma once

#include <string>
#include <string_view>

#include "vtinv/contours.hpp"

namespace vtinv {

/// Overlay of predicted (dashed) and true (solid) contours for one frame,
/// one colour per articulator. The title ends with the frame's mean RMSE,
/// e.g. "RMSE 1.62 mm".
std::string emit_contour_svg(const FrameContours& pred, const FrameContours& truth,
                             std::string_view title, double image_size_px = kImageSizePx);

}  // namespace vtinv
