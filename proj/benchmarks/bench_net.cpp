#include <benchmark/benchmark.h>

#include "vtinv/net/model.hpp"
#include "vtinv/rng.hpp"

namespace {

using vtinv::net::ModelConfig;

ModelConfig config(Eigen::Index units) {
  ModelConfig c;
  c.input_dim = 39;
  c.dense_units = units;
  c.lstm_units = units;
  return c;
}

Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols) {
  vtinv::Rng rng(2);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = rng.normal();
  return m;
}

// Args: units, frames.
void BM_Forward(benchmark::State& state) {
  const auto params = vtinv::net::init_params(config(state.range(0)));
  const Eigen::MatrixXd x = normal_matrix(state.range(1), 39);
  for (auto _ : state) benchmark::DoNotOptimize(vtinv::net::model_forward(params, x));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_Forward)->Args({64, 120})->Args({300, 120})->Unit(benchmark::kMillisecond);

void BM_ForwardBackward(benchmark::State& state) {
  const auto params = vtinv::net::init_params(config(state.range(0)));
  const Eigen::MatrixXd x = normal_matrix(state.range(1), 39);
  const Eigen::MatrixXd target = normal_matrix(state.range(1), 800);
  vtinv::net::ForwardCache cache;
  for (auto _ : state) {
    vtinv::net::model_forward(params, x, &cache);
    benchmark::DoNotOptimize(vtinv::net::model_backward(params, cache, target));
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_ForwardBackward)->Args({64, 120})->Args({300, 120})->Unit(benchmark::kMillisecond);

}  // namespace
