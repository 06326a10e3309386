#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vtinv/config.hpp"
#include "vtinv/corpus.hpp"
#include "vtinv/eval.hpp"
#include "vtinv/features.hpp"
#include "vtinv/net/checkpoint.hpp"
#include "vtinv/net/trainer.hpp"
#include "vtinv/phonfeat.hpp"
#include "vtinv/split.hpp"

namespace vtinv {

/// The four input representations compared by the toolkit.
enum class ExperimentKind { baseline, w2v, onehot_auto, onehot_expert };

std::string_view experiment_name(ExperimentKind kind) noexcept;
ExperimentKind parse_experiment(std::string_view name);
FeatureKind feature_kind(ExperimentKind kind) noexcept;

enum class SplitName { train, validation, test };
SplitName parse_split(std::string_view name);

/// Full-length features and contours of every corpus sequence for one
/// experiment, plus the shared train/validation/test split.
struct ExperimentData {
  ExperimentKind kind = ExperimentKind::baseline;
  PipelineConfig config;
  SplitAssignment split;
  std::optional<phonfeat::PhoneInventory> inventory;  // one-hot experiments only
  std::vector<SequenceKey> keys;
  std::vector<FeatureMatrix> features;   // raw (w2v already session-normalised)
  std::vector<ContourSequence> contours;
  std::vector<Alignment> silence_align;  // expert alignment, drives silence removal

  Eigen::Index input_dim() const;
  std::size_t index_of(const SequenceKey& key) const;
  const std::vector<SequenceKey>& keys_of(SplitName split) const;
};

/// Raw features for one experiment, one matrix per record (parallel over records).
std::vector<FeatureMatrix> experiment_features(std::span<const SequenceRecord> records,
                                               ExperimentKind kind, const PipelineConfig& cfg,
                                               std::optional<phonfeat::PhoneInventory>* inventory = nullptr);

ExperimentData prepare_experiment(std::span<const SequenceRecord> records, ExperimentKind kind,
                                  const PipelineConfig& cfg);

/// Statistics fitted on the voiced frames of the training split.
struct Normalizers {
  std::optional<FeatureNormStats> features;  // baseline only
  ContourNormStats contours;
};

Normalizers fit_normalizers(const ExperimentData& data);

/// Silence-free, normalised examples for the given sequences.
std::vector<net::SequenceExample> make_examples(const ExperimentData& data,
                                                std::span<const SequenceKey> keys,
                                                const Normalizers& norm);

/// Normalised full-length features of one sequence (model input).
Eigen::MatrixXd model_input(const ExperimentData& data, std::size_t index, const Normalizers& norm);

struct TrainedModel {
  net::Checkpoint checkpoint;
  net::TrainHistory history;
};

TrainedModel run_training(const ExperimentData& data, const net::TrainHooks& hooks = {});

/// Experiment kind and pipeline settings recorded in a checkpoint.
ExperimentKind checkpoint_experiment(const net::Checkpoint& ckpt);
PipelineConfig checkpoint_config(const net::Checkpoint& ckpt);
Normalizers checkpoint_normalizers(const net::Checkpoint& ckpt);

/// Rebuilds the checkpoint's experiment on `records`, checking that the
/// input dimension (and inventory) still match.
ExperimentData prepare_for_checkpoint(std::span<const SequenceRecord> records,
                                      const net::Checkpoint& ckpt);

/// Errors of every voiced frame of the split's sequences, in split order.
eval::EvalReport evaluate_split(const ExperimentData& data, const net::Checkpoint& ckpt,
                                SplitName split);

/// Baseline report for the constant training-mean predictor on the same frames.
eval::EvalReport evaluate_constant_mean(const ExperimentData& data, SplitName split);

/// Prediction for the voiced frames of one sequence (the frames the model
/// is trained and evaluated on), with the matching ground truth.
struct SequencePrediction {
  ContourSequence predicted;
  ContourSequence truth;
  std::vector<Eigen::Index> source_frames;  // original frame index of each row
};

SequencePrediction predict_sequence(const ExperimentData& data, const net::Checkpoint& ckpt,
                                    const SequenceKey& key);

std::string write_history_csv(const net::TrainHistory& history);

}  // namespace vtinv
