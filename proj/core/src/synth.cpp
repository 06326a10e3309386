#include "vtinv/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "vtinv/error.hpp"
#include "vtinv/parallel.hpp"
#include "vtinv/rng.hpp"

namespace vtinv::synth {

namespace {

struct Bezier {
  Point2D a, b, c;

  Point2D at(double s) const {
    const double u = 1.0 - s;
    return {u * u * a.x_px + 2 * s * u * b.x_px + s * s * c.x_px,
            u * u * a.y_px + 2 * s * u * b.y_px + s * s * c.y_px};
  }

  Point2D unit_normal(double s) const {
    const double dx = 2 * (1 - s) * (b.x_px - a.x_px) + 2 * s * (c.x_px - b.x_px);
    const double dy = 2 * (1 - s) * (b.y_px - a.y_px) + 2 * s * (c.y_px - b.y_px);
    const double len = std::hypot(dx, dy);
    return {-dy / len, dx / len};
  }
};

// Midsagittal layout, lips to the left, larynx at the bottom right.
constexpr std::array<Bezier, kArticulatorCount> kShapes = {{
    {{92, 114}, {97, 119}, {94, 127}},  // arytenoid
    {{84, 94}, {91, 99}, {88, 109}},    // epiglottis
    {{25, 76}, {12, 81}, {20, 90}},     // lower_lip
    {{98, 42}, {103, 80}, {98, 118}},   // pharyngeal_wall
    {{68, 48}, {80, 54}, {87, 66}},     // velum
    {{38, 96}, {56, 46}, {88, 90}},     // tongue
    {{18, 55}, {11, 62}, {25, 67}},     // upper_lip
    {{83, 121}, {90, 124}, {97, 123}},  // vocal_folds
}};

// Deformation amplitude (px) per articulator.
constexpr std::array<double, kArticulatorCount> kAmplitude = {1.5, 3.0, 4.0, 2.0, 4.0, 8.0, 4.0, 1.5};

constexpr std::array<std::string_view, 22> kPhoneNames = {
    "a", "i", "u", "e", "o", "y", "p", "t", "k", "b", "d",
    "g", "f", "s", "S", "v", "z", "Z", "m", "n", "l", "R",
};

double param(std::size_t p) { return static_cast<double>(p) / (kPointsPerContour - 1); }

FrameContours deformed_shape(Rng& rng, double image_size) {
  FrameContours f;
  for (Articulator art : kArticulators) {
    const Bezier& curve = kShapes[index_of(art)];
    const double amp = kAmplitude[index_of(art)];
    const double u1 = rng.uniform(-1.0, 1.0);
    const double u2 = rng.uniform(-1.0, 1.0);
    const double tx = rng.uniform(-0.5, 0.5) * amp;
    const double ty = rng.uniform(-0.5, 0.5) * amp;
    for (std::size_t p = 0; p < kPointsPerContour; ++p) {
      const double s = param(p);
      const Point2D base = curve.at(s);
      const Point2D n = curve.unit_normal(s);
      const double d = amp * (u1 * std::sin(std::numbers::pi * s) + 0.5 * u2 * std::sin(2 * std::numbers::pi * s));
      f[art][p] = {std::clamp(base.x_px + d * n.x_px + tx, 0.0, image_size),
                   std::clamp(base.y_px + d * n.y_px + ty, 0.0, image_size)};
    }
  }
  return f;
}

std::string phone_name(std::size_t i) {
  if (i < kPhoneNames.size()) return std::string(kPhoneNames[i]);
  char buf[32];
  std::snprintf(buf, sizeof buf, "ph%02zu", i);
  return buf;
}

struct Segment {
  long start_ms;
  long end_ms;
  std::size_t label;
};

std::vector<Segment> draw_segments(Rng& rng, long total_ms, std::size_t n_labels) {
  const long cap = std::min(300L, (total_ms - 60) / 2);
  const long lead = rng.between(60, cap);
  const long tail = rng.between(60, cap);
  const long speech_end = total_ms - tail;

  std::vector<Segment> segs{{0, lead, 0}};
  long t = lead;
  std::size_t prev = 0;
  while (t < speech_end) {
    const long remaining = speech_end - t;
    const long d = remaining <= 300 ? remaining : rng.between(60, std::min(300L, remaining - 60));
    std::size_t label = 1 + static_cast<std::size_t>(rng.below(n_labels - 1));
    if (label == prev && n_labels > 2) label = 1 + (label % (n_labels - 1));
    segs.push_back({t, t + d, label});
    prev = label;
    t += d;
  }
  segs.push_back({speech_end, total_ms, 0});
  return segs;
}

Alignment to_alignment(const std::vector<Segment>& segs, const SynthModel& model) {
  Alignment out;
  for (const auto& s : segs) {
    out.push_back({s.start_ms / 1000.0, s.end_ms / 1000.0, model.labels[s.label]});
  }
  return out;
}

SequenceRecord generate_sequence(const SynthSpec& spec, const SynthModel& model, std::size_t index) {
  Rng rng = Rng::stream(spec.seed, index + 1);
  const std::size_t T = spec.frames_per_sequence;
  const long total_ms = std::lround(1000.0 * static_cast<double>(T) / spec.frame_rate_hz);

  const auto segs = draw_segments(rng, total_ms, model.labels.size());

  // Auto alignment: same labels, interior boundaries moved by up to +-20 ms.
  auto jittered = segs;
  for (std::size_t k = 1; k < jittered.size(); ++k) {
    const long shift = rng.between(-20, 20);
    jittered[k - 1].end_ms += shift;
    jittered[k].start_ms += shift;
  }

  SequenceRecord rec;
  const std::size_t session = index * spec.n_sessions / spec.n_sequences;
  char buf[48];
  std::snprintf(buf, sizeof buf, "S%zu", session + 1);
  rec.key.session_id = buf;
  std::snprintf(buf, sizeof buf, "seq%03zu", index);
  rec.key.seq_id = buf;
  rec.align_expert = to_alignment(segs, model);
  rec.align_auto = to_alignment(jittered, model);

  // Frame labels from the exact boundaries.
  std::vector<std::size_t> frame_label(T, 0);
  std::vector<FrameContours> targets(T);
  for (std::size_t t = 0; t < T; ++t) {
    const auto seg = segment_at(rec.align_expert, frame_midpoint_s(t, spec.frame_rate_hz));
    frame_label[t] = seg ? segs[*seg].label : 0;
    targets[t] = model.prototypes[frame_label[t]];
  }
  rec.contours = coarticulate(targets, spec.frame_rate_hz, spec.coarticulation_tau_s);

  // Two-tone audio with continuous phase, plus white noise.
  const double fs = 16000.0;
  const auto n_samples = static_cast<std::size_t>(std::llround(fs * static_cast<double>(T) / spec.frame_rate_hz));
  const double noise_std = std::pow(10.0, spec.audio_noise_db / 20.0);
  rec.audio.sample_rate_hz = 16000;
  rec.audio.samples.resize(n_samples);
  double phase1 = 0.0;
  double phase2 = 0.0;
  std::size_t seg_index = 0;
  for (std::size_t n = 0; n < n_samples; ++n) {
    const long ms = static_cast<long>(n / 16);
    while (seg_index + 1 < segs.size() && ms >= segs[seg_index].end_ms) ++seg_index;
    const std::size_t label = segs[seg_index].label;
    double x = 0.0;
    if (label != 0) {
      phase1 += 2.0 * std::numbers::pi * model.formants_hz[label][0] / fs;
      phase2 += 2.0 * std::numbers::pi * model.formants_hz[label][1] / fs;
      x = kToneAmplitude * (std::sin(phase1) + std::sin(phase2));
    }
    // Quantised to the PCM16 grid so the in-memory corpus equals its WAV files.
    const double pcm = std::clamp(std::round((x + noise_std * rng.normal()) * 32768.0), -32768.0, 32767.0);
    rec.audio.samples[n] = pcm / 32768.0;
  }

  // Phonemizer-like logits: boosted true label plus noise, 61 columns.
  Eigen::MatrixXd logits(static_cast<Eigen::Index>(T), 61);
  for (std::size_t t = 0; t < T; ++t) {
    for (Eigen::Index c = 0; c < 61; ++c) {
      logits(static_cast<Eigen::Index>(t), c) = spec.logit_noise_std * rng.normal();
    }
    logits(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(frame_label[t])) += kLogitBoost;
  }
  rec.w2v_logits = std::move(logits);
  return rec;
}

}  // namespace

void SynthSpec::validate() const {
  if (n_sequences < 1) throw ContractError("synth: need at least one sequence");
  if (frames_per_sequence < 20) throw ContractError("synth: frames_per_sequence must be >= 20");
  if (inventory_size < 3) throw ContractError("synth: inventory_size must be >= 3");
  if (inventory_size > 61) throw ContractError("synth: inventory_size must fit in 61 logit columns");
  if (!(frame_rate_hz > 0.0)) throw ContractError("synth: frame rate must be positive");
  if (n_sessions < 1) throw ContractError("synth: need at least one session");
  if (!(image_size_px > 0.0)) throw ContractError("synth: image size must be positive");
}

FrameContours base_shape() {
  FrameContours f;
  for (Articulator art : kArticulators) {
    for (std::size_t p = 0; p < kPointsPerContour; ++p) f[art][p] = kShapes[index_of(art)].at(param(p));
  }
  return f;
}

SynthModel build_model(const SynthSpec& spec) {
  spec.validate();
  Rng rng = Rng::stream(spec.seed, 0);
  SynthModel model;
  model.labels.emplace_back(kSilenceLabel);
  model.prototypes.push_back(base_shape());
  model.formants_hz.push_back({0.0, 0.0});
  for (std::size_t i = 1; i < spec.inventory_size; ++i) {
    model.labels.push_back(phone_name(i - 1));
    model.prototypes.push_back(deformed_shape(rng, spec.image_size_px));
    model.formants_hz.push_back({rng.uniform(300.0, 1000.0), rng.uniform(1000.0, 3000.0)});
  }
  return model;
}

ContourSequence coarticulate(std::span<const FrameContours> targets, double frame_rate_hz,
                             double tau_s) {
  ContourSequence out;
  out.frame_rate_hz = frame_rate_hz;
  out.frames.assign(targets.begin(), targets.end());
  if (tau_s <= 0.0 || targets.empty()) return out;
  const double alpha = 1.0 - std::exp(-1.0 / (frame_rate_hz * tau_s));
  for (std::size_t t = 1; t < out.frames.size(); ++t) {
    for (std::size_t a = 0; a < kArticulatorCount; ++a) {
      for (std::size_t p = 0; p < kPointsPerContour; ++p) {
        Point2D& y = out.frames[t].contours[a][p];
        const Point2D& prev = out.frames[t - 1].contours[a][p];
        // alpha == 1 (tau -> 0) reproduces the targets exactly.
        y.x_px = alpha * y.x_px + (1.0 - alpha) * prev.x_px;
        y.y_px = alpha * y.y_px + (1.0 - alpha) * prev.y_px;
      }
    }
  }
  return out;
}

std::vector<SequenceRecord> generate_corpus(const SynthSpec& spec) {
  const SynthModel model = build_model(spec);
  std::vector<SequenceRecord> records(spec.n_sequences);
  parallel_for(spec.n_sequences, [&](std::size_t i) { records[i] = generate_sequence(spec, model, i); });
  return records;
}

void write_corpus(const std::filesystem::path& root, std::span<const SequenceRecord> records) {
  std::filesystem::create_directories(root);
  parallel_for(records.size(), [&](std::size_t i) { write_sequence(root, records[i]); });
}

ConstantMeanPredictor::ConstantMeanPredictor(std::span<const ContourSequence> train) {
  // Running mean: exact when every training frame is identical.
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(kCoordsPerFrame));
  std::size_t n = 0;
  for (const auto& seq : train) {
    for (const auto& f : seq.frames) {
      ++n;
      mean += (f.flatten() - mean) / static_cast<double>(n);
    }
  }
  if (n == 0) throw ContractError("constant_mean_predictor: no training frames");
  mean_ = FrameContours::unflatten(mean);
}

ContourSequence ConstantMeanPredictor::predict(Eigen::Index n_frames, double frame_rate_hz) const {
  ContourSequence out;
  out.frame_rate_hz = frame_rate_hz;
  out.frames.assign(static_cast<std::size_t>(n_frames), mean_);
  return out;
}

}  // namespace vtinv::synth
