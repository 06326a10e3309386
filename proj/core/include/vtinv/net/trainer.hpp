#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "vtinv/net/model.hpp"
#include "vtinv/normalize.hpp"

namespace vtinv::net {

struct TrainConfig {
  int max_epochs = 300;
  int batch_sequences = 10;
  int patience = 10;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;

  void validate() const;
};

/// One training sequence: standardised features and normalised contour targets.
struct SequenceExample {
  Eigen::MatrixXd features;  // T x D
  Eigen::MatrixXd target;    // T x 800
};

struct TrainHistory {
  std::vector<double> train_loss;  // index e holds epoch e + 1
  std::vector<double> val_loss;
  int best_epoch = 0;
  int stopped_epoch = 0;
};

/// Optional instrumentation. All members may be empty.
struct TrainHooks {
  /// Learning rate to use during `epoch` (1-based).
  std::function<double(int epoch)> learning_rate;
  /// Replaces the validation loss the stopping rule sees.
  std::function<double(int epoch, double val_loss)> validation_override;
  std::function<void(int epoch, const ModelParams&)> on_epoch_end;
};

struct TrainResult {
  ModelParams params;  // snapshot from the best validation epoch
  TrainHistory history;
};

/// Frame-weighted MSE over a set of sequences.
double dataset_loss(const ModelParams& params, std::span<const SequenceExample> data);

/// Minibatch Adam with early stopping on validation MSE. Each step consumes
/// `batch_sequences` shuffled sequences; the loss is the mean over every
/// frame and coordinate of the batch.
TrainResult train_model(std::span<const SequenceExample> train,
                        std::span<const SequenceExample> validation, const ModelConfig& model_cfg,
                        const TrainConfig& train_cfg, const TrainHooks& hooks = {});

/// Forward pass followed by de-normalisation into pixel contours.
ContourSequence predict(const ModelParams& params,
                        const Eigen::Ref<const Eigen::MatrixXd>& features,
                        const ContourNormStats& contour_stats, double frame_rate_hz = 50.0);

}  // namespace vtinv::net
