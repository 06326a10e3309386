#include <vector>

#include <benchmark/benchmark.h>

#include "vtinv/dsp.hpp"
#include "vtinv/rng.hpp"

namespace {

std::vector<double> noise(std::size_t n) {
  vtinv::Rng rng(1);
  std::vector<double> x(n);
  for (auto& v : x) v = 0.1 * rng.normal();
  return x;
}

// One second of 16 kHz audio -> 50 frames.
void BM_LogMel(benchmark::State& state) {
  const vtinv::dsp::MfccConfig cfg;
  const auto audio = noise(16000);
  for (auto _ : state) benchmark::DoNotOptimize(vtinv::dsp::log_mel_energies(audio, cfg, 50));
  state.SetItemsProcessed(state.iterations() * 50);
}
BENCHMARK(BM_LogMel);

void BM_MfccFeatures(benchmark::State& state) {
  const vtinv::dsp::MfccConfig cfg;
  const auto audio = noise(16000 * static_cast<std::size_t>(state.range(0)));
  const auto frames = static_cast<Eigen::Index>(50 * state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(vtinv::dsp::mfcc_features(audio, cfg, frames));
  state.SetItemsProcessed(state.iterations() * frames);
}
BENCHMARK(BM_MfccFeatures)->Arg(1)->Arg(4);

}  // namespace
