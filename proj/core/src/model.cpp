#include "vtinv/net/model.hpp"

#include <cmath>
#include <cstring>

#include "lstm.hpp"
#include "vtinv/error.hpp"
#include "vtinv/rng.hpp"

namespace vtinv::net {

void ModelConfig::validate() const {
  if (input_dim <= 0 || dense_units <= 0 || lstm_units <= 0 || output_dim <= 0) {
    throw ContractError("model config: all dimensions must be positive");
  }
}

namespace {

Dense zero_dense(Eigen::Index out, Eigen::Index in) {
  return {Eigen::MatrixXd::Zero(out, in), Eigen::VectorXd::Zero(out)};
}

LstmDirection zero_lstm(Eigen::Index in, Eigen::Index H) {
  return {Eigen::MatrixXd::Zero(4 * H, in), Eigen::MatrixXd::Zero(4 * H, H),
          Eigen::VectorXd::Zero(4 * H)};
}

BiLstm zero_bilstm(Eigen::Index in, Eigen::Index H) { return {zero_lstm(in, H), zero_lstm(in, H)}; }

template <typename Params, typename View>
std::vector<View> collect_views(Params& p) {
  std::vector<View> views;
  auto add = [&](std::string name, auto& array) {
    views.push_back(View{std::move(name), {array.data(), array.rows(), array.cols()}});
  };
  auto add_dense = [&](const std::string& prefix, auto& d) {
    add(prefix + ".weight", d.weight);
    add(prefix + ".bias", d.bias);
  };
  auto add_lstm = [&](const std::string& prefix, auto& l) {
    add(prefix + ".input_weight", l.input_weight);
    add(prefix + ".recurrent_weight", l.recurrent_weight);
    add(prefix + ".bias", l.bias);
  };
  add_dense("dense1", p.dense1);
  add_dense("dense2", p.dense2);
  add_lstm("lstm1.fwd", p.lstm1.forward);
  add_lstm("lstm1.bwd", p.lstm1.backward);
  add_lstm("lstm2.fwd", p.lstm2.forward);
  add_lstm("lstm2.bwd", p.lstm2.backward);
  add_dense("out", p.out);
  return views;
}

void glorot_fill(Eigen::MatrixXd& w, Eigen::Index fan_in, Eigen::Index fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (Eigen::Index c = 0; c < w.cols(); ++c) {
    for (Eigen::Index r = 0; r < w.rows(); ++r) w(r, c) = rng.uniform(-limit, limit);
  }
}

void init_lstm(LstmDirection& l, Rng& rng) {
  const Eigen::Index H = l.recurrent_weight.cols();
  // Fans are taken per gate block: each gate is an (in -> H) map.
  glorot_fill(l.input_weight, l.input_weight.cols(), H, rng);
  glorot_fill(l.recurrent_weight, H, H, rng);
  l.bias.setZero();
  l.bias.segment(H, H).setOnes();
}

Eigen::MatrixXd relu(const Eigen::MatrixXd& x) { return x.cwiseMax(0.0); }

}  // namespace

ModelParams ModelParams::zeros(const ModelConfig& c) {
  c.validate();
  ModelParams p;
  p.config = c;
  p.dense1 = zero_dense(c.dense_units, c.input_dim);
  p.dense2 = zero_dense(c.dense_units, c.dense_units);
  p.lstm1 = zero_bilstm(c.dense_units, c.lstm_units);
  p.lstm2 = zero_bilstm(2 * c.lstm_units, c.lstm_units);
  p.out = zero_dense(c.output_dim, 2 * c.lstm_units);
  return p;
}

std::vector<ParamView> param_views(ModelParams& params) {
  return collect_views<ModelParams, ParamView>(params);
}

std::vector<ConstParamView> param_views(const ModelParams& params) {
  return collect_views<const ModelParams, ConstParamView>(params);
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& v : param_views(*this)) n += static_cast<std::size_t>(v.values.size());
  return n;
}

std::uint64_t ModelParams::fingerprint() const {
  // FNV-1a over 64-bit words.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& v : param_views(*this)) {
    const double* data = v.values.data();
    for (Eigen::Index i = 0; i < v.values.size(); ++i) {
      std::uint64_t bits = 0;
      std::memcpy(&bits, data + i, sizeof bits);
      h = (h ^ bits) * 0x100000001b3ULL;
    }
    h = (h ^ static_cast<std::uint64_t>(v.values.size())) * 0x100000001b3ULL;
  }
  return h;
}

ModelParams init_params(const ModelConfig& config) {
  ModelParams p = ModelParams::zeros(config);
  Rng rng(config.seed);
  glorot_fill(p.dense1.weight, config.input_dim, config.dense_units, rng);
  glorot_fill(p.dense2.weight, config.dense_units, config.dense_units, rng);
  init_lstm(p.lstm1.forward, rng);
  init_lstm(p.lstm1.backward, rng);
  init_lstm(p.lstm2.forward, rng);
  init_lstm(p.lstm2.backward, rng);
  glorot_fill(p.out.weight, 2 * config.lstm_units, config.output_dim, rng);
  return p;
}

Eigen::MatrixXd model_forward(const ModelParams& params,
                              const Eigen::Ref<const Eigen::MatrixXd>& features,
                              ForwardCache* cache) {
  if (features.cols() != params.config.input_dim) {
    throw ContractError("model_forward: features have " + std::to_string(features.cols()) +
                        " columns, model expects " + std::to_string(params.config.input_dim));
  }
  ForwardCache local;
  ForwardCache& c = cache ? *cache : local;

  c.input = features.transpose();
  c.pre1 = (params.dense1.weight * c.input).colwise() + params.dense1.bias;
  c.act1 = relu(c.pre1);
  c.pre2 = (params.dense2.weight * c.act1).colwise() + params.dense2.bias;
  c.act2 = relu(c.pre2);
  detail::bilstm_forward(params.lstm1, c.act2, c.lstm1);
  detail::bilstm_forward(params.lstm2, c.lstm1.output, c.lstm2);
  c.output = (params.out.weight * c.lstm2.output).colwise() + params.out.bias;
  c.params_fingerprint = cache ? params.fingerprint() : 0;
  return c.output.transpose();
}

double squared_error(const Eigen::Ref<const Eigen::MatrixXd>& pred,
                     const Eigen::Ref<const Eigen::MatrixXd>& target) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols()) {
    throw ContractError("loss: prediction is " + std::to_string(pred.rows()) + "x" +
                        std::to_string(pred.cols()) + ", target " + std::to_string(target.rows()) +
                        "x" + std::to_string(target.cols()));
  }
  return (pred - target).squaredNorm();
}

double mse_loss(const Eigen::Ref<const Eigen::MatrixXd>& pred,
                const Eigen::Ref<const Eigen::MatrixXd>& target) {
  const double sse = squared_error(pred, target);
  if (pred.size() == 0) throw ContractError("mse_loss: empty matrices");
  return sse / static_cast<double>(pred.size());
}

void accumulate_gradients(const ModelParams& params, const ForwardCache& cache,
                          const Eigen::Ref<const Eigen::MatrixXd>& grad_output, ModelParams& grads) {
  if (cache.params_fingerprint != params.fingerprint()) {
    throw ContractError("model_backward: cache does not come from a forward pass of these parameters");
  }
  if (grad_output.rows() != cache.output.cols() || grad_output.cols() != cache.output.rows()) {
    throw ContractError("model_backward: gradient shape does not match the cached prediction");
  }
  const Eigen::MatrixXd d_out = grad_output.transpose();

  grads.out.weight.noalias() += d_out * cache.lstm2.output.transpose();
  grads.out.bias += d_out.rowwise().sum();
  const Eigen::MatrixXd d_lstm2 = params.out.weight.transpose() * d_out;

  const Eigen::MatrixXd d_lstm1 =
      detail::bilstm_backward(params.lstm2, cache.lstm1.output, cache.lstm2, d_lstm2, grads.lstm2);
  const Eigen::MatrixXd d_act2 =
      detail::bilstm_backward(params.lstm1, cache.act2, cache.lstm1, d_lstm1, grads.lstm1);

  const Eigen::MatrixXd d_pre2 = d_act2.cwiseProduct((cache.pre2.array() > 0.0).cast<double>().matrix());
  grads.dense2.weight.noalias() += d_pre2 * cache.act1.transpose();
  grads.dense2.bias += d_pre2.rowwise().sum();
  const Eigen::MatrixXd d_act1 = params.dense2.weight.transpose() * d_pre2;

  const Eigen::MatrixXd d_pre1 = d_act1.cwiseProduct((cache.pre1.array() > 0.0).cast<double>().matrix());
  grads.dense1.weight.noalias() += d_pre1 * cache.input.transpose();
  grads.dense1.bias += d_pre1.rowwise().sum();
}

ModelParams model_backward(const ModelParams& params, const ForwardCache& cache,
                           const Eigen::Ref<const Eigen::MatrixXd>& target) {
  const Eigen::MatrixXd pred = cache.prediction();
  if (pred.rows() != target.rows() || pred.cols() != target.cols()) {
    throw ContractError("model_backward: target shape does not match the cached prediction");
  }
  ModelParams grads = ModelParams::zeros(params.config);
  const Eigen::MatrixXd d_pred = 2.0 * (pred - target) / static_cast<double>(pred.size());
  accumulate_gradients(params, cache, d_pred, grads);
  return grads;
}

namespace {

// Exchanges the left and right column halves, matching a BiLSTM whose
// [forward; backward] output halves trade places.
void swap_column_halves(Eigen::MatrixXd& w) {
  const Eigen::Index half = w.cols() / 2;
  const Eigen::MatrixXd left = w.leftCols(half);
  w.leftCols(half) = w.rightCols(half);
  w.rightCols(half) = left;
}

}  // namespace

ModelParams swap_directions(const ModelParams& params) {
  ModelParams p = params;
  std::swap(p.lstm1.forward, p.lstm1.backward);
  std::swap(p.lstm2.forward, p.lstm2.backward);
  swap_column_halves(p.lstm2.forward.input_weight);
  swap_column_halves(p.lstm2.backward.input_weight);
  swap_column_halves(p.out.weight);
  return p;
}

}  // namespace vtinv::net
