#include "vtinv/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "vtinv/contour_io.hpp"
#include "vtinv/error.hpp"
#include "vtinv/matrix_io.hpp"
#include "vtinv/parallel.hpp"
#include "vtinv/text.hpp"

namespace fs = std::filesystem;

namespace vtinv {

namespace {

constexpr Eigen::Index kLogitColumns = 61;

std::map<std::string, std::string, std::less<>> parse_meta(std::string_view text) {
  std::map<std::string, std::string, std::less<>> meta;
  const auto ls = text::lines(text);
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (text::trim(ls[i]).empty()) continue;
    const auto fields = text::split(ls[i], '\t');
    if (fields.size() != 2) throw ParseError("meta.tsv: expected key<TAB>value", i + 1);
    meta.emplace(std::string(text::trim(fields[0])), std::string(text::trim(fields[1])));
  }
  return meta;
}

const std::string& require(const std::map<std::string, std::string, std::less<>>& meta,
                           std::string_view key, const fs::path& dir) {
  const auto it = meta.find(key);
  if (it == meta.end()) {
    throw DataError((dir / "meta.tsv").string() + ": missing key '" + std::string(key) + "'");
  }
  return it->second;
}

}  // namespace

void validate_record(const SequenceRecord& rec) {
  const auto& c = rec.contours;
  if (c.frames.empty()) throw DataError(rec.key.str() + ": no contour frames");
  if (!(c.frame_rate_hz > 0.0)) throw DataError(rec.key.str() + ": frame rate must be positive");
  const double contour_s = static_cast<double>(c.size()) / c.frame_rate_hz;
  if (std::abs(rec.audio.duration_s() - contour_s) > 1.0 / c.frame_rate_hz + 1e-9) {
    throw DataError(rec.key.str() + ": audio lasts " + text::format_shortest(rec.audio.duration_s()) +
                    " s but contours cover " + text::format_shortest(contour_s) + " s");
  }
  if (rec.w2v_logits && rec.w2v_logits->rows() != static_cast<Eigen::Index>(c.size())) {
    throw DataError(rec.key.str() + ": w2v_logits has " + std::to_string(rec.w2v_logits->rows()) +
                    " rows, expected " + std::to_string(c.size()));
  }
}

SequenceRecord load_sequence(const fs::path& dir, SequenceKey key) {
  auto read = [&](const char* name) { return text::read_file((dir / name).string()); };
  auto context = [&](const char* name, auto&& fn) {
    try {
      return fn();
    } catch (const ParseError& e) {
      throw ParseError((dir / name).string() + ": " + e.what());
    }
  };

  const auto meta = context("meta.tsv", [&] { return parse_meta(read("meta.tsv")); });
  const double rate = text::parse_double(require(meta, "frame_rate_hz", dir));
  const long long n_frames = text::parse_int(require(meta, "n_frames", dir));

  SequenceRecord rec;
  rec.key = std::move(key);
  rec.audio = read_wav_file((dir / "audio.wav").string());
  rec.contours = context("contours.csv", [&] { return parse_contour_csv(read("contours.csv"), rate); });
  rec.align_auto = context("align_auto.tsv", [&] { return parse_alignment_tsv(read("align_auto.tsv")); });
  rec.align_expert =
      context("align_expert.tsv", [&] { return parse_alignment_tsv(read("align_expert.tsv")); });
  if (fs::exists(dir / "w2v_logits.csv")) {
    rec.w2v_logits = context("w2v_logits.csv", [&] {
      return parse_matrix_csv(read("w2v_logits.csv"), kLogitColumns);
    });
  }

  if (static_cast<long long>(rec.contours.size()) != n_frames) {
    throw DataError(dir.string() + ": meta n_frames=" + std::to_string(n_frames) +
                    " but contours.csv has " + std::to_string(rec.contours.size()) + " frames");
  }
  validate_record(rec);
  return rec;
}

void write_sequence(const fs::path& corpus_root, const SequenceRecord& rec) {
  const fs::path dir = corpus_root / rec.key.session_id / rec.key.seq_id;
  fs::create_directories(dir);
  write_wav_file((dir / "audio.wav").string(), rec.audio);
  text::write_file((dir / "contours.csv").string(), write_contour_csv(rec.contours));
  text::write_file((dir / "align_auto.tsv").string(), write_alignment_tsv(rec.align_auto));
  text::write_file((dir / "align_expert.tsv").string(), write_alignment_tsv(rec.align_expert));
  if (rec.w2v_logits) {
    text::write_file((dir / "w2v_logits.csv").string(), write_matrix_csv(*rec.w2v_logits));
  }
  std::string meta = "frame_rate_hz\t" + text::format_shortest(rec.contours.frame_rate_hz) + "\n";
  meta += "n_frames\t" + std::to_string(rec.contours.size()) + "\n";
  text::write_file((dir / "meta.tsv").string(), meta);
}

std::vector<SequenceKey> list_corpus(const fs::path& root) {
  if (!fs::is_directory(root)) throw DataError("corpus directory '" + root.string() + "' not found");
  std::vector<SequenceKey> keys;
  for (const auto& session : fs::directory_iterator(root)) {
    if (!session.is_directory()) continue;
    for (const auto& seq : fs::directory_iterator(session.path())) {
      if (seq.is_directory() && fs::exists(seq.path() / "meta.tsv")) {
        keys.push_back({session.path().filename().string(), seq.path().filename().string()});
      }
    }
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

std::vector<SequenceRecord> load_corpus(const fs::path& root) {
  const auto keys = list_corpus(root);
  if (keys.empty()) throw DataError("corpus '" + root.string() + "' contains no sequences");
  std::vector<SequenceRecord> records(keys.size());
  parallel_for(keys.size(), [&](std::size_t i) {
    records[i] = load_sequence(root / keys[i].session_id / keys[i].seq_id, keys[i]);
  });
  return records;
}

std::vector<Eigen::Index> voiced_frames(std::size_t n_frames, double frame_rate_hz,
                                        const Alignment& align, const LabelSet& silence_labels) {
  std::vector<Eigen::Index> keep;
  keep.reserve(n_frames);
  for (std::size_t t = 0; t < n_frames; ++t) {
    const auto seg = segment_at(align, frame_midpoint_s(t, frame_rate_hz));
    if (seg && !silence_labels.contains(align[*seg].label)) {
      keep.push_back(static_cast<Eigen::Index>(t));
    }
  }
  return keep;
}

std::pair<FeatureMatrix, ContourSequence> remove_silence(const FeatureMatrix& features,
                                                         const ContourSequence& contours,
                                                         const Alignment& align,
                                                         const LabelSet& silence_labels) {
  if (features.frames() != static_cast<Eigen::Index>(contours.size())) {
    throw ContractError("remove_silence: " + std::to_string(features.frames()) +
                        " feature rows vs " + std::to_string(contours.size()) + " contour frames");
  }
  const auto keep = voiced_frames(contours.size(), contours.frame_rate_hz, align, silence_labels);

  FeatureMatrix f;
  f.kind = features.kind;
  f.data.resize(static_cast<Eigen::Index>(keep.size()), features.dim());
  ContourSequence c;
  c.frame_rate_hz = contours.frame_rate_hz;
  c.frames.reserve(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    f.data.row(static_cast<Eigen::Index>(i)) = features.data.row(keep[i]);
    c.frames.push_back(contours.frames[static_cast<std::size_t>(keep[i])]);
  }
  return {std::move(f), std::move(c)};
}

}  // namespace vtinv
