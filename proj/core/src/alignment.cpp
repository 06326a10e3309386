#include "vtinv/alignment.hpp"

#include <algorithm>

#include "vtinv/error.hpp"
#include "vtinv/text.hpp"

namespace vtinv {

LabelSet default_silence_labels() { return {"#", "sil", "sp"}; }

Alignment parse_alignment_tsv(std::string_view text) {
  Alignment out;
  const auto rows = text::lines(text);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t line = i + 1;
    const std::string_view row = text::trim(rows[i]);
    if (row.empty() || row.front() == '#') continue;
    const auto fields = text::split(rows[i], '\t');
    if (fields.size() != 3) throw ParseError("expected start<TAB>end<TAB>label", line);

    AlignmentSegment seg;
    seg.start_s = text::parse_double(fields[0], line);
    seg.end_s = text::parse_double(fields[1], line);
    seg.label = std::string(text::trim(fields[2]));
    if (seg.label.empty()) throw ParseError("empty label", line);
    if (seg.start_s < 0.0) throw ParseError("negative start time", line);
    if (!(seg.end_s > seg.start_s)) throw ParseError("segment end must exceed start", line);
    if (!out.empty() && seg.start_s < out.back().end_s) {
      throw ParseError("segment overlaps previous segment", line);
    }
    out.push_back(std::move(seg));
  }
  return out;
}

std::string write_alignment_tsv(const Alignment& align) {
  std::string out;
  for (const auto& seg : align) {
    out.append(text::format_shortest(seg.start_s)).push_back('\t');
    out.append(text::format_shortest(seg.end_s)).push_back('\t');
    out.append(seg.label).push_back('\n');
  }
  return out;
}

std::optional<std::size_t> segment_at(const Alignment& align, double time_s) {
  // First segment starting strictly after time_s; its predecessor is the candidate.
  auto it = std::upper_bound(align.begin(), align.end(), time_s,
                             [](double t, const AlignmentSegment& s) { return t < s.start_s; });
  if (it == align.begin()) return std::nullopt;
  --it;
  if (time_s >= it->start_s && time_s < it->end_s) {
    return static_cast<std::size_t>(it - align.begin());
  }
  return std::nullopt;
}

}  // namespace vtinv
