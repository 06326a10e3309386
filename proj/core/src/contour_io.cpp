#include "vtinv/contour_io.hpp"

#include "vtinv/error.hpp"
#include "vtinv/text.hpp"

namespace vtinv {

namespace {
constexpr std::string_view kHeader = "frame,articulator,point,x_px,y_px";
constexpr std::size_t kRowsPerFrame = kArticulatorCount * kPointsPerContour;
}  // namespace

ContourSequence parse_contour_csv(std::string_view text, double frame_rate_hz) {
  const auto rows = text::lines(text);
  if (rows.empty() || text::trim(rows[0]) != kHeader) {
    throw ParseError("expected header '" + std::string(kHeader) + "'", 1);
  }

  ContourSequence seq;
  seq.frame_rate_hz = frame_rate_hz;
  // Position of the next expected row inside the current frame.
  std::size_t filled = 0;

  for (std::size_t i = 1; i < rows.size(); ++i) {
    const std::size_t line = i + 1;
    if (text::trim(rows[i]).empty()) continue;
    const auto fields = text::split(rows[i], ',');
    if (fields.size() != 5) throw ParseError("expected 5 fields", line);

    const long long frame = text::parse_int(fields[0], line);
    const auto art = parse_articulator(text::trim(fields[1]));
    if (!art) {
      throw ParseError("unknown articulator '" + std::string(text::trim(fields[1])) + "'", line);
    }
    const long long point = text::parse_int(fields[2], line);
    if (point < 0 || point >= static_cast<long long>(kPointsPerContour)) {
      throw ParseError("point index out of range", line);
    }

    const long long current = static_cast<long long>(seq.frames.size()) - (filled > 0 ? 1 : 0);
    if (filled == 0) {
      // Expecting the first row of frame `seq.frames.size()`.
      if (frame != static_cast<long long>(seq.frames.size())) {
        throw ParseError("non-contiguous frame index " + std::to_string(frame) + ", expected " +
                             std::to_string(seq.frames.size()),
                         line);
      }
      seq.frames.emplace_back();
    } else if (frame != current) {
      throw ParseError("frame " + std::to_string(current) + " incomplete", line);
    }

    const std::size_t want_art = filled / kPointsPerContour;
    const std::size_t want_point = filled % kPointsPerContour;
    if (index_of(*art) != want_art || static_cast<std::size_t>(point) != want_point) {
      throw ParseError("frame " + std::to_string(frame) + " missing " +
                           std::string(articulator_name(kArticulators[want_art])) + " point " +
                           std::to_string(want_point),
                       line);
    }

    Point2D& p = seq.frames.back()[*art][static_cast<std::size_t>(point)];
    p.x_px = text::parse_double(fields[3], line);
    p.y_px = text::parse_double(fields[4], line);
    filled = (filled + 1) % kRowsPerFrame;
  }

  if (filled != 0) {
    throw ParseError("frame " + std::to_string(seq.frames.size() - 1) + " incomplete",
                     rows.size());
  }
  if (seq.frames.empty()) throw ParseError("no frames", rows.size());
  return seq;
}

std::string write_contour_csv(const ContourSequence& seq) {
  std::string out;
  out.reserve(seq.frames.size() * kRowsPerFrame * 48 + 64);
  out.append(kHeader).push_back('\n');
  for (std::size_t t = 0; t < seq.frames.size(); ++t) {
    const std::string frame = std::to_string(t);
    for (Articulator a : kArticulators) {
      const Contour& c = seq.frames[t][a];
      for (std::size_t p = 0; p < kPointsPerContour; ++p) {
        out.append(frame).push_back(',');
        out.append(articulator_name(a)).push_back(',');
        out.append(std::to_string(p)).push_back(',');
        out.append(text::format_double(c[p].x_px)).push_back(',');
        out.append(text::format_double(c[p].y_px)).push_back('\n');
      }
    }
  }
  return out;
}

}  // namespace vtinv
