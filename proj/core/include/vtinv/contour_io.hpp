#pragma once

#include <string>
#include <string_view>

#include "vtinv/contours.hpp"

namespace vtinv {

/// Reads the `frame,articulator,point,x_px,y_px` table. Rows must be sorted by
/// (frame, canonical articulator, point) with frames numbered 0, 1, 2...
/// Errors carry the offending 1-based line number.
ContourSequence parse_contour_csv(std::string_view text, double frame_rate_hz = 50.0);

/// Inverse of parse_contour_csv; values use 17 significant digits.
std::string write_contour_csv(const ContourSequence& seq);

}  // namespace vtinv
