#pragma once

#include "vtinv/net/model.hpp"

namespace vtinv::net::detail {

/// Runs one direction over `input` (in x T). `reverse` walks from T-1 to 0.
void lstm_forward(const LstmDirection& p, const Eigen::MatrixXd& input, bool reverse,
                  LstmCache& cache);

/// Accumulates parameter gradients into `grads` and returns d(loss)/d(input).
Eigen::MatrixXd lstm_backward(const LstmDirection& p, const Eigen::MatrixXd& input, bool reverse,
                              const LstmCache& cache, const Eigen::MatrixXd& grad_hidden,
                              LstmDirection& grads);

void bilstm_forward(const BiLstm& p, const Eigen::MatrixXd& input, BiLstmCache& cache);
Eigen::MatrixXd bilstm_backward(const BiLstm& p, const Eigen::MatrixXd& input,
                                const BiLstmCache& cache, const Eigen::MatrixXd& grad_output,
                                BiLstm& grads);

}  // namespace vtinv::net::detail
