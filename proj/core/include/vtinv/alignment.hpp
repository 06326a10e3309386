#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace vtinv {

struct AlignmentSegment {
  double start_s = 0.0;
  double end_s = 0.0;
  std::string label;

  friend bool operator==(const AlignmentSegment&, const AlignmentSegment&) = default;
};

using Alignment = std::vector<AlignmentSegment>;
using LabelSet = std::set<std::string, std::less<>>;

LabelSet default_silence_labels();

/// `start<TAB>end<TAB>label` lines, `#` comments and blank lines skipped.
/// Segments must be sorted and non-overlapping.
Alignment parse_alignment_tsv(std::string_view text);
std::string write_alignment_tsv(const Alignment& align);

/// Midpoint time of frame `t`: (t + 0.5) / rate. Shared by every frame/label
/// lookup so that boundary decisions agree everywhere.
inline double frame_midpoint_s(std::size_t t, double frame_rate_hz) noexcept {
  return (static_cast<double>(t) + 0.5) / frame_rate_hz;
}

/// Segment whose half-open interval [start, end) contains `time_s`.
std::optional<std::size_t> segment_at(const Alignment& align, double time_s);

}  // namespace vtinv
