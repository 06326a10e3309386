#include "vtinv/net/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "vtinv/error.hpp"
#include "vtinv/rng.hpp"

namespace vtinv::net {

namespace {

constexpr double kKinkMargin = 1e-4;
constexpr int kMaxAttempts = 1000;

Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = rng.normal();
  }
  return m;
}

// L(θ+ε) − L(θ−ε) for the mean squared error, written as
// Σ (p₊ − p₋)(p₊ + p₋ − 2y) / n. This equals the difference of the two losses
// exactly, but avoids subtracting two O(1) sums whose difference is O(ε·|∇L|).
double loss_difference(const Eigen::MatrixXd& up, const Eigen::MatrixXd& down,
                       const Eigen::MatrixXd& target) {
  const double sum = ((up - down).array() * (up + down - 2.0 * target).array()).sum();
  return sum / static_cast<double>(target.size());
}

bool clear_of_kinks(const ForwardCache& cache) {
  return cache.pre1.cwiseAbs().minCoeff() >= kKinkMargin &&
         cache.pre2.cwiseAbs().minCoeff() >= kKinkMargin;
}

}  // namespace

GradCheckResult grad_check(ModelConfig config, Eigen::Index n_frames, double epsilon,
                           std::uint64_t seed) {
  if (n_frames < 1) throw ContractError("grad_check: need at least one frame");
  if (!(epsilon > 0.0)) throw ContractError("grad_check: epsilon must be positive");

  Rng rng(seed);
  const Eigen::MatrixXd features = normal_matrix(n_frames, config.input_dim, rng);
  const Eigen::MatrixXd target = normal_matrix(n_frames, config.output_dim, rng);

  GradCheckResult result;
  ModelParams params;
  ForwardCache cache;
  for (;;) {
    if (++result.attempts > kMaxAttempts) {
      throw Error("grad_check: no parameter draw clear of relu kinks");
    }
    config.seed = seed + static_cast<std::uint64_t>(result.attempts - 1);
    params = init_params(config);
    model_forward(params, features, &cache);
    if (clear_of_kinks(cache)) break;
  }

  const ModelParams analytic = model_backward(params, cache, target);
  const auto analytic_views = param_views(analytic);
  auto views = param_views(params);

  for (std::size_t k = 0; k < views.size(); ++k) {
    auto& values = views[k].values;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      const double saved = values(i);
      values(i) = saved + epsilon;
      const Eigen::MatrixXd up = model_forward(params, features);
      values(i) = saved - epsilon;
      const Eigen::MatrixXd down = model_forward(params, features);
      values(i) = saved;

      const double numeric = loss_difference(up, down, target) / (2.0 * epsilon);
      const double a = analytic_views[k].values(i);
      const double rel = std::abs(a - numeric) / std::max(1e-8, std::abs(a) + std::abs(numeric));
      ++result.entries_checked;
      if (rel > result.max_relative_error) {
        result.max_relative_error = rel;
        result.worst_param = views[k].name;
        result.worst_index = i;
      }
    }
  }
  return result;
}

}  // namespace vtinv::net
