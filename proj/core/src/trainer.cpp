#include "vtinv/net/trainer.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include <spdlog/spdlog.h>

#include "vtinv/error.hpp"
#include "vtinv/net/adam.hpp"
#include "vtinv/rng.hpp"

namespace vtinv::net {

void TrainConfig::validate() const {
  if (max_epochs < 1) throw ContractError("train: max_epochs must be >= 1");
  if (batch_sequences < 1) throw ContractError("train: batch_sequences must be >= 1");
  if (patience < 1 || patience >= max_epochs) {
    throw ContractError("train: need 1 <= patience < max_epochs");
  }
  if (!(learning_rate >= 0.0)) throw ContractError("train: learning_rate must be >= 0");
}

namespace {

void check_examples(std::span<const SequenceExample> data, const ModelConfig& cfg,
                    const char* which) {
  if (data.empty()) throw ContractError(std::string("train: empty ") + which + " split");
  for (const auto& ex : data) {
    if (ex.features.cols() != cfg.input_dim || ex.target.cols() != cfg.output_dim ||
        ex.features.rows() != ex.target.rows() || ex.features.rows() == 0) {
      throw ContractError(std::string("train: malformed example in ") + which + " split");
    }
  }
}

}  // namespace

double dataset_loss(const ModelParams& params, std::span<const SequenceExample> data) {
  double sse = 0.0;
  double count = 0.0;
  for (const auto& ex : data) {
    sse += squared_error(model_forward(params, ex.features), ex.target);
    count += static_cast<double>(ex.target.size());
  }
  if (count == 0.0) throw ContractError("dataset_loss: no frames");
  return sse / count;
}

TrainResult train_model(std::span<const SequenceExample> train,
                        std::span<const SequenceExample> validation, const ModelConfig& model_cfg,
                        const TrainConfig& train_cfg, const TrainHooks& hooks) {
  model_cfg.validate();
  train_cfg.validate();
  check_examples(train, model_cfg, "training");
  check_examples(validation, model_cfg, "validation");

  ModelParams params = init_params(model_cfg);
  AdamState adam = AdamState::for_params(params, train_cfg.learning_rate);
  Rng rng(train_cfg.seed);

  TrainResult result{params, {}};
  double best = std::numeric_limits<double>::infinity();
  int since_best = 0;

  std::vector<std::size_t> order(train.size());
  ModelParams grads = ModelParams::zeros(model_cfg);
  ForwardCache cache;

  for (int epoch = 1; epoch <= train_cfg.max_epochs; ++epoch) {
    adam.lr = hooks.learning_rate ? hooks.learning_rate(epoch) : train_cfg.learning_rate;
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(std::span(order));

    double epoch_sse = 0.0;
    double epoch_count = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(train_cfg.batch_sequences)) {
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(train_cfg.batch_sequences));
      for (auto& v : param_views(grads)) v.values.setZero();

      double batch_count = 0.0;
      for (std::size_t k = start; k < stop; ++k) {
        const SequenceExample& ex = train[order[k]];
        const Eigen::MatrixXd pred = model_forward(params, ex.features, &cache);
        epoch_sse += squared_error(pred, ex.target);
        // Sum-of-squares gradient here; scaled to the batch mean below.
        accumulate_gradients(params, cache, 2.0 * (pred - ex.target), grads);
        batch_count += static_cast<double>(ex.target.size());
      }
      epoch_count += batch_count;
      for (auto& v : param_views(grads)) v.values /= batch_count;
      adam_step(params, grads, adam);
    }

    double val = dataset_loss(params, validation);
    if (hooks.validation_override) val = hooks.validation_override(epoch, val);
    result.history.train_loss.push_back(epoch_sse / epoch_count);
    result.history.val_loss.push_back(val);
    spdlog::info("epoch {:3d}  train {:.6f}  val {:.6f}", epoch, epoch_sse / epoch_count, val);

    if (val < best) {
      best = val;
      result.history.best_epoch = epoch;
      result.params = params;
      since_best = 0;
    } else {
      ++since_best;
    }
    result.history.stopped_epoch = epoch;
    if (hooks.on_epoch_end) hooks.on_epoch_end(epoch, params);
    if (since_best >= train_cfg.patience) {
      spdlog::info("early stop at epoch {} (best epoch {})", epoch, result.history.best_epoch);
      break;
    }
  }
  return result;
}

ContourSequence predict(const ModelParams& params,
                        const Eigen::Ref<const Eigen::MatrixXd>& features,
                        const ContourNormStats& contour_stats, double frame_rate_hz) {
  return denormalize_contours(model_forward(params, features), contour_stats, frame_rate_hz);
}

}  // namespace vtinv::net
