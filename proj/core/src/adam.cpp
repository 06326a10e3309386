#include "vtinv/net/adam.hpp"

#include <cmath>

#include "vtinv/error.hpp"

namespace vtinv::net {

AdamState AdamState::for_params(const ModelParams& params, double lr) {
  AdamState s;
  s.m = ModelParams::zeros(params.config);
  s.v = ModelParams::zeros(params.config);
  s.lr = lr;
  return s;
}

void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state) {
  auto p = param_views(params);
  const auto g = param_views(grads);
  auto m = param_views(state.m);
  auto v = param_views(state.v);
  if (g.size() != p.size() || m.size() != p.size() || v.size() != p.size()) {
    throw ContractError("adam_step: parameter layouts differ");
  }

  ++state.step_count;
  const double t = static_cast<double>(state.step_count);
  const double correction1 = 1.0 - std::pow(state.beta1, t);
  const double correction2 = 1.0 - std::pow(state.beta2, t);

  for (std::size_t k = 0; k < p.size(); ++k) {
    if (g[k].values.size() != p[k].values.size() || m[k].values.size() != p[k].values.size()) {
      throw ContractError("adam_step: shape mismatch in " + p[k].name);
    }
    auto pa = p[k].values.array();
    const auto ga = g[k].values.array();
    auto ma = m[k].values.array();
    auto va = v[k].values.array();
    ma = state.beta1 * ma + (1.0 - state.beta1) * ga;
    va = state.beta2 * va + (1.0 - state.beta2) * ga.square();
    pa -= state.lr * (ma / correction1) / ((va / correction2).sqrt() + state.eps);
  }
}

}  // namespace vtinv::net
