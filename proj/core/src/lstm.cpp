#include "lstm.hpp"

namespace vtinv::net::detail {

namespace {

Eigen::ArrayXd sigmoid(const Eigen::ArrayXd& z) { return 1.0 / (1.0 + (-z).exp()); }

}  // namespace

void lstm_forward(const LstmDirection& p, const Eigen::MatrixXd& input, bool reverse,
                  LstmCache& cache) {
  const Eigen::Index H = p.recurrent_weight.cols();
  const Eigen::Index T = input.cols();
  const Eigen::MatrixXd projected = (p.input_weight * input).colwise() + p.bias;

  cache.gates.resize(4 * H, T);
  cache.cell.resize(H, T);
  cache.hidden.resize(H, T);

  Eigen::VectorXd h = Eigen::VectorXd::Zero(H);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(H);
  Eigen::VectorXd z(4 * H);
  for (Eigen::Index s = 0; s < T; ++s) {
    const Eigen::Index t = reverse ? T - 1 - s : s;
    z.noalias() = projected.col(t);
    z.noalias() += p.recurrent_weight * h;

    auto gates = cache.gates.col(t);
    gates.segment(0, H) = sigmoid(z.segment(0, H).array());
    gates.segment(H, H) = sigmoid(z.segment(H, H).array());
    gates.segment(2 * H, H) = z.segment(2 * H, H).array().tanh();
    gates.segment(3 * H, H) = sigmoid(z.segment(3 * H, H).array());

    c = gates.segment(H, H).cwiseProduct(c) + gates.segment(0, H).cwiseProduct(gates.segment(2 * H, H));
    h = gates.segment(3 * H, H).array() * c.array().tanh();
    cache.cell.col(t) = c;
    cache.hidden.col(t) = h;
  }
}

Eigen::MatrixXd lstm_backward(const LstmDirection& p, const Eigen::MatrixXd& input, bool reverse,
                              const LstmCache& cache, const Eigen::MatrixXd& grad_hidden,
                              LstmDirection& grads) {
  const Eigen::Index H = p.recurrent_weight.cols();
  const Eigen::Index T = input.cols();

  Eigen::MatrixXd grad_z(4 * H, T);
  // Hidden state each step consumed (zero before the first step).
  Eigen::MatrixXd prev_hidden = Eigen::MatrixXd::Zero(H, T);

  Eigen::VectorXd dh_next = Eigen::VectorXd::Zero(H);
  Eigen::VectorXd dc_next = Eigen::VectorXd::Zero(H);
  const Eigen::VectorXd zeros = Eigen::VectorXd::Zero(H);

  for (Eigen::Index s = T - 1; s >= 0; --s) {
    const Eigen::Index t = reverse ? T - 1 - s : s;
    const bool first = s == 0;
    const Eigen::Index prev = reverse ? t + 1 : t - 1;

    const auto gates = cache.gates.col(t);
    const Eigen::ArrayXd i = gates.segment(0, H).array();
    const Eigen::ArrayXd f = gates.segment(H, H).array();
    const Eigen::ArrayXd g = gates.segment(2 * H, H).array();
    const Eigen::ArrayXd o = gates.segment(3 * H, H).array();
    const Eigen::ArrayXd tanh_c = cache.cell.col(t).array().tanh();
    const Eigen::ArrayXd c_prev = first ? zeros.array() : Eigen::ArrayXd(cache.cell.col(prev).array());

    const Eigen::ArrayXd dh = grad_hidden.col(t).array() + dh_next.array();
    const Eigen::ArrayXd dc = dh * o * (1.0 - tanh_c.square()) + dc_next.array();

    auto dz = grad_z.col(t);
    dz.segment(0, H) = (dc * g * i * (1.0 - i)).matrix();
    dz.segment(H, H) = (dc * c_prev * f * (1.0 - f)).matrix();
    dz.segment(2 * H, H) = (dc * i * (1.0 - g.square())).matrix();
    dz.segment(3 * H, H) = (dh * tanh_c * o * (1.0 - o)).matrix();

    dh_next.noalias() = p.recurrent_weight.transpose() * dz;
    dc_next = (dc * f).matrix();
    if (!first) prev_hidden.col(t) = cache.hidden.col(prev);
  }

  grads.input_weight.noalias() += grad_z * input.transpose();
  grads.recurrent_weight.noalias() += grad_z * prev_hidden.transpose();
  grads.bias += grad_z.rowwise().sum();
  return p.input_weight.transpose() * grad_z;
}

void bilstm_forward(const BiLstm& p, const Eigen::MatrixXd& input, BiLstmCache& cache) {
  lstm_forward(p.forward, input, false, cache.forward);
  lstm_forward(p.backward, input, true, cache.backward);
  const Eigen::Index H = p.forward.recurrent_weight.cols();
  cache.output.resize(2 * H, input.cols());
  cache.output.topRows(H) = cache.forward.hidden;
  cache.output.bottomRows(H) = cache.backward.hidden;
}

Eigen::MatrixXd bilstm_backward(const BiLstm& p, const Eigen::MatrixXd& input,
                                const BiLstmCache& cache, const Eigen::MatrixXd& grad_output,
                                BiLstm& grads) {
  const Eigen::Index H = p.forward.recurrent_weight.cols();
  Eigen::MatrixXd grad_input =
      lstm_backward(p.forward, input, false, cache.forward, grad_output.topRows(H), grads.forward);
  grad_input += lstm_backward(p.backward, input, true, cache.backward, grad_output.bottomRows(H),
                              grads.backward);
  return grad_input;
}

}  // namespace vtinv::net::detail
