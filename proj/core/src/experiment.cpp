#include "vtinv/experiment.hpp"

#include <algorithm>
#include <map>

#include <spdlog/spdlog.h>

#include "vtinv/error.hpp"
#include "vtinv/parallel.hpp"
#include "vtinv/synth.hpp"
#include "vtinv/text.hpp"

namespace vtinv {

namespace {

constexpr std::string_view kExperimentKey = "experiment";
constexpr std::string_view kInventoryKey = "data.inventory";

struct VoicedSequence {
  Eigen::MatrixXd features;  // normalised
  ContourSequence contours;  // pixels
  std::vector<Eigen::Index> frames;
};

Eigen::MatrixXd normalized_features(const ExperimentData& data, std::size_t i, const Normalizers& norm) {
  if (norm.features) return feature_zscore(data.features[i], *norm.features).data;
  return data.features[i].data;
}

VoicedSequence voiced(const ExperimentData& data, std::size_t i, const Normalizers& norm) {
  const FeatureMatrix input{normalized_features(data, i, norm), data.features[i].kind};
  auto [f, c] = remove_silence(input, data.contours[i], data.silence_align[i], data.config.silence_labels);
  return {std::move(f.data), std::move(c),
          voiced_frames(data.contours[i].size(), data.contours[i].frame_rate_hz, data.silence_align[i],
                        data.config.silence_labels)};
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : " ") + s;
  return out;
}

}  // namespace

std::string_view experiment_name(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::baseline: return "baseline";
    case ExperimentKind::w2v: return "w2v";
    case ExperimentKind::onehot_auto: return "onehot-auto";
    case ExperimentKind::onehot_expert: return "onehot-expert";
  }
  return "unknown";
}

ExperimentKind parse_experiment(std::string_view name) {
  for (auto k : {ExperimentKind::baseline, ExperimentKind::w2v, ExperimentKind::onehot_auto,
                 ExperimentKind::onehot_expert}) {
    if (experiment_name(k) == name) return k;
  }
  throw ParseError("unknown experiment '" + std::string(name) +
                   "' (expected baseline, w2v, onehot-auto or onehot-expert)");
}

FeatureKind feature_kind(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::baseline: return FeatureKind::mfcc39;
    case ExperimentKind::w2v: return FeatureKind::posterior61;
    default: return FeatureKind::onehot;
  }
}

SplitName parse_split(std::string_view name) {
  if (name == "train") return SplitName::train;
  if (name == "val" || name == "validation") return SplitName::validation;
  if (name == "test") return SplitName::test;
  throw ParseError("unknown split '" + std::string(name) + "' (expected train, val or test)");
}

Eigen::Index ExperimentData::input_dim() const {
  if (features.empty()) throw ContractError("experiment has no sequences");
  return features.front().dim();
}

std::size_t ExperimentData::index_of(const SequenceKey& key) const {
  const auto it = std::lower_bound(keys.begin(), keys.end(), key);
  if (it == keys.end() || *it != key) throw DataError("sequence '" + key.str() + "' not in corpus");
  return static_cast<std::size_t>(it - keys.begin());
}

const std::vector<SequenceKey>& ExperimentData::keys_of(SplitName s) const {
  switch (s) {
    case SplitName::train: return split.train;
    case SplitName::validation: return split.validation;
    case SplitName::test: return split.test;
  }
  return split.test;
}

std::vector<FeatureMatrix> experiment_features(std::span<const SequenceRecord> records,
                                               ExperimentKind kind, const PipelineConfig& cfg,
                                               std::optional<phonfeat::PhoneInventory>* inventory) {
  std::vector<FeatureMatrix> out(records.size());
  switch (kind) {
    case ExperimentKind::baseline: {
      parallel_for(records.size(), [&](std::size_t i) {
        const auto& r = records[i];
        out[i] = dsp::mfcc_features(r.audio.samples, cfg.mfcc, static_cast<Eigen::Index>(r.contours.size()));
      });
      break;
    }
    case ExperimentKind::w2v: {
      std::vector<Eigen::MatrixXd> posteriors(records.size());
      for (std::size_t i = 0; i < records.size(); ++i) {
        if (!records[i].w2v_logits) {
          throw DataError(records[i].key.str() + ": w2v experiment needs w2v_logits.csv");
        }
        posteriors[i] = phonfeat::softmax_rows(*records[i].w2v_logits);
      }
      std::map<std::string, std::vector<std::size_t>> sessions;
      for (std::size_t i = 0; i < records.size(); ++i) sessions[records[i].key.session_id].push_back(i);
      for (const auto& [session, members] : sessions) {
        std::vector<Eigen::MatrixXd> group;
        for (auto i : members) group.push_back(posteriors[i]);
        if (cfg.session_norm == SessionNorm::scalar) {
          const auto stats = phonfeat::session_stats(group);
          for (auto i : members) out[i] = phonfeat::session_normalize(posteriors[i], stats);
        } else {
          const auto stats = phonfeat::session_stats_per_dimension(group);
          for (auto i : members) out[i] = phonfeat::session_normalize(posteriors[i], stats);
        }
      }
      break;
    }
    case ExperimentKind::onehot_auto:
    case ExperimentKind::onehot_expert: {
      const bool expert = kind == ExperimentKind::onehot_expert;
      std::vector<Alignment> aligns;
      aligns.reserve(records.size());
      for (const auto& r : records) aligns.push_back(expert ? r.align_expert : r.align_auto);
      const auto inv = phonfeat::build_inventory(aligns, cfg.silence_labels);
      for (std::size_t i = 0; i < records.size(); ++i) {
        out[i] = phonfeat::onehot_encode(aligns[i], inv, records[i].contours.frame_rate_hz,
                                         static_cast<Eigen::Index>(records[i].contours.size()),
                                         cfg.silence_labels);
      }
      if (inventory) *inventory = inv;
      break;
    }
  }
  return out;
}

ExperimentData prepare_experiment(std::span<const SequenceRecord> records, ExperimentKind kind,
                                  const PipelineConfig& cfg) {
  if (records.empty()) throw DataError("empty corpus");
  ExperimentData data;
  data.kind = kind;
  data.config = cfg;
  for (const auto& r : records) data.keys.push_back(r.key);
  if (!std::is_sorted(data.keys.begin(), data.keys.end())) {
    throw ContractError("prepare_experiment: records must be sorted by key");
  }
  data.features = experiment_features(records, kind, cfg, &data.inventory);
  for (const auto& r : records) {
    data.contours.push_back(r.contours);
    data.silence_align.push_back(r.align_expert);
  }
  data.split = split_corpus(data.keys, cfg.split_seed);
  data.config.model.input_dim = data.input_dim();
  return data;
}

Normalizers fit_normalizers(const ExperimentData& data) {
  Normalizers raw;  // identity feature transform while collecting
  std::vector<ContourSequence> contours;
  std::vector<Eigen::MatrixXd> features;
  for (const auto& key : data.split.train) {
    auto v = voiced(data, data.index_of(key), raw);
    features.push_back(std::move(v.features));
    contours.push_back(std::move(v.contours));
  }
  Normalizers norm;
  norm.contours = contour_norm_stats(contours);
  if (data.kind == ExperimentKind::baseline) norm.features = feature_norm_stats(features);
  return norm;
}

std::vector<net::SequenceExample> make_examples(const ExperimentData& data,
                                                std::span<const SequenceKey> keys,
                                                const Normalizers& norm) {
  std::vector<net::SequenceExample> out;
  for (const auto& key : keys) {
    auto v = voiced(data, data.index_of(key), norm);
    if (v.frames.empty()) {
      spdlog::warn("{}: no voiced frames, skipped", key.str());
      continue;
    }
    out.push_back({std::move(v.features), normalize_contours(v.contours, norm.contours)});
  }
  return out;
}

Eigen::MatrixXd model_input(const ExperimentData& data, std::size_t index, const Normalizers& norm) {
  return normalized_features(data, index, norm);
}

TrainedModel run_training(const ExperimentData& data, const net::TrainHooks& hooks) {
  const Normalizers norm = fit_normalizers(data);
  const auto train = make_examples(data, data.split.train, norm);
  const auto val = make_examples(data, data.split.validation, norm);

  net::ModelConfig mcfg = data.config.model;
  mcfg.input_dim = data.input_dim();
  spdlog::info("training {} on {} sequences ({} validation), input_dim {}",
               experiment_name(data.kind), train.size(), val.size(), mcfg.input_dim);
  auto result = net::train_model(train, val, mcfg, data.config.train, hooks);

  TrainedModel out;
  out.history = std::move(result.history);
  net::Checkpoint& ckpt = out.checkpoint;
  ckpt.settings.emplace_back(kExperimentKey, experiment_name(data.kind));
  for (auto& kv : to_settings(data.config)) {
    if (!kv.first.starts_with("model.")) ckpt.settings.push_back(std::move(kv));
  }
  if (data.inventory) ckpt.settings.emplace_back(kInventoryKey, join(data.inventory->labels()));
  ckpt.settings.emplace_back("result.best_epoch", std::to_string(out.history.best_epoch));
  ckpt.settings.emplace_back("result.stopped_epoch", std::to_string(out.history.stopped_epoch));
  ckpt.params = std::move(result.params);
  ckpt.contour_stats = norm.contours;
  ckpt.feature_stats = norm.features;
  return out;
}

ExperimentKind checkpoint_experiment(const net::Checkpoint& ckpt) {
  const auto name = ckpt.setting(kExperimentKey);
  if (!name) throw ParseError("checkpoint has no 'experiment' setting");
  return parse_experiment(*name);
}

PipelineConfig checkpoint_config(const net::Checkpoint& ckpt) {
  PipelineConfig cfg;
  Settings known;
  for (const auto& kv : ckpt.settings) {
    if (kv.first == kExperimentKey || kv.first.starts_with("data.") || kv.first.starts_with("result.")) continue;
    known.push_back(kv);
  }
  apply_settings(cfg, known);
  cfg.model = ckpt.params.config;
  return cfg;
}

Normalizers checkpoint_normalizers(const net::Checkpoint& ckpt) {
  return {ckpt.feature_stats, ckpt.contour_stats};
}

ExperimentData prepare_for_checkpoint(std::span<const SequenceRecord> records,
                                      const net::Checkpoint& ckpt) {
  ExperimentData data = prepare_experiment(records, checkpoint_experiment(ckpt), checkpoint_config(ckpt));
  if (data.input_dim() != ckpt.params.config.input_dim) {
    throw DataError("corpus yields " + std::to_string(data.input_dim()) +
                    "-dimensional features but the checkpoint expects " +
                    std::to_string(ckpt.params.config.input_dim));
  }
  if (data.inventory) {
    const auto stored = ckpt.setting(kInventoryKey);
    if (stored && *stored != join(data.inventory->labels())) {
      throw DataError("corpus phone inventory differs from the checkpoint's");
    }
  }
  return data;
}

eval::EvalReport evaluate_split(const ExperimentData& data, const net::Checkpoint& ckpt,
                                SplitName split) {
  const Normalizers norm = checkpoint_normalizers(ckpt);
  std::vector<eval::FrameErrors> errors;
  for (const auto& key : data.keys_of(split)) {
    const auto v = voiced(data, data.index_of(key), norm);
    if (v.frames.empty()) continue;
    const auto pred = net::predict(ckpt.params, v.features, norm.contours, v.contours.frame_rate_hz);
    for (auto& fe : eval::sequence_errors(pred, v.contours, data.config.median_mode)) {
      errors.push_back(fe);
    }
  }
  return eval::aggregate_report(errors);
}

eval::EvalReport evaluate_constant_mean(const ExperimentData& data, SplitName split) {
  const Normalizers raw;
  std::vector<ContourSequence> train;
  for (const auto& key : data.split.train) train.push_back(voiced(data, data.index_of(key), raw).contours);
  const synth::ConstantMeanPredictor baseline(train);

  std::vector<eval::FrameErrors> errors;
  for (const auto& key : data.keys_of(split)) {
    const auto v = voiced(data, data.index_of(key), raw);
    const auto pred = baseline.predict(v.features, v.contours.frame_rate_hz);
    for (auto& fe : eval::sequence_errors(pred, v.contours, data.config.median_mode)) {
      errors.push_back(fe);
    }
  }
  return eval::aggregate_report(errors);
}

SequencePrediction predict_sequence(const ExperimentData& data, const net::Checkpoint& ckpt,
                                    const SequenceKey& key) {
  const Normalizers norm = checkpoint_normalizers(ckpt);
  auto v = voiced(data, data.index_of(key), norm);
  if (v.frames.empty()) throw DataError(key.str() + ": no voiced frames to predict");
  SequencePrediction out;
  out.predicted = net::predict(ckpt.params, v.features, norm.contours, v.contours.frame_rate_hz);
  out.truth = std::move(v.contours);
  out.source_frames = std::move(v.frames);
  return out;
}

std::string write_history_csv(const net::TrainHistory& history) {
  std::string out = "epoch,train_loss,val_loss\n";
  for (std::size_t e = 0; e < history.train_loss.size(); ++e) {
    out += std::to_string(e + 1) + "," + text::format_double(history.train_loss[e]) + "," +
           text::format_double(history.val_loss[e]) + "\n";
  }
  return out;
}

}  // namespace vtinv
