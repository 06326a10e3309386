#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "vtinv/contours.hpp"

namespace vtinv::net {

struct ModelConfig {
  Eigen::Index input_dim = 39;
  Eigen::Index dense_units = 300;
  Eigen::Index lstm_units = 300;
  Eigen::Index output_dim = static_cast<Eigen::Index>(kCoordsPerFrame);
  std::uint64_t seed = 0;

  void validate() const;
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct Dense {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;
};

/// One recurrence direction. Gate blocks are stacked i, f, g, o.
struct LstmDirection {
  Eigen::MatrixXd input_weight;      // 4H x in
  Eigen::MatrixXd recurrent_weight;  // 4H x H
  Eigen::VectorXd bias;              // 4H
};

struct BiLstm {
  LstmDirection forward;
  LstmDirection backward;
};

/// Dense -> Dense -> BiLSTM -> BiLSTM -> Dense (linear).
struct ModelParams {
  ModelConfig config;
  Dense dense1;
  Dense dense2;
  BiLstm lstm1;
  BiLstm lstm2;
  Dense out;

  /// All-zero parameters with the shapes implied by `config`.
  static ModelParams zeros(const ModelConfig& config);

  std::size_t parameter_count() const;
  /// Hash of every parameter's bit pattern; used to detect stale caches.
  std::uint64_t fingerprint() const;
};

/// Named view over one parameter array (vectors appear as n x 1).
struct ParamView {
  std::string name;
  Eigen::Map<Eigen::MatrixXd> values;
};

struct ConstParamView {
  std::string name;
  Eigen::Map<const Eigen::MatrixXd> values;
};

/// Every array in a fixed order shared by the optimizer, gradient check and
/// checkpoint code.
std::vector<ParamView> param_views(ModelParams& params);
std::vector<ConstParamView> param_views(const ModelParams& params);

/// Glorot-uniform weights, zero biases except the forget gate (1.0).
ModelParams init_params(const ModelConfig& config);

/// Activations of one recurrence direction, columns indexed by time step.
struct LstmCache {
  Eigen::MatrixXd gates;   // 4H x T, post-activation i, f, g, o
  Eigen::MatrixXd cell;    // H x T
  Eigen::MatrixXd hidden;  // H x T
};

struct BiLstmCache {
  LstmCache forward;
  LstmCache backward;
  Eigen::MatrixXd output;  // 2H x T, [forward; backward]
};

/// Everything model_backward needs. Layouts are feature-major (columns are time).
struct ForwardCache {
  Eigen::MatrixXd input;   // D x T
  Eigen::MatrixXd pre1;    // dense1 pre-activation
  Eigen::MatrixXd act1;
  Eigen::MatrixXd pre2;
  Eigen::MatrixXd act2;
  BiLstmCache lstm1;
  BiLstmCache lstm2;
  Eigen::MatrixXd output;  // output_dim x T
  std::uint64_t params_fingerprint = 0;

  /// Prediction as T x output_dim.
  Eigen::MatrixXd prediction() const { return output.transpose(); }
};

/// T x D features -> T x output_dim predictions.
Eigen::MatrixXd model_forward(const ModelParams& params,
                              const Eigen::Ref<const Eigen::MatrixXd>& features,
                              ForwardCache* cache = nullptr);

/// Mean of squared differences over every entry.
double mse_loss(const Eigen::Ref<const Eigen::MatrixXd>& pred,
                const Eigen::Ref<const Eigen::MatrixXd>& target);

/// Sum of squared differences; the batch loss is built from these.
double squared_error(const Eigen::Ref<const Eigen::MatrixXd>& pred,
                     const Eigen::Ref<const Eigen::MatrixXd>& target);

/// Adds d(loss)/d(params) into `grads`, given d(loss)/d(prediction) as
/// T x output_dim. Throws ContractError if `params` changed since the forward pass.
void accumulate_gradients(const ModelParams& params, const ForwardCache& cache,
                          const Eigen::Ref<const Eigen::MatrixXd>& grad_output, ModelParams& grads);

/// Exact gradients of mse_loss(prediction, target).
ModelParams model_backward(const ModelParams& params, const ForwardCache& cache,
                           const Eigen::Ref<const Eigen::MatrixXd>& target);

/// Swaps the two directions of both BiLSTM layers (and the matching input
/// column halves of the layers that consume them). Running the result on a
/// time-reversed input yields the time-reversed output.
ModelParams swap_directions(const ModelParams& params);

}  // namespace vtinv::net
