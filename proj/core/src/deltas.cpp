#include <algorithm>

#include "vtinv/dsp.hpp"

namespace vtinv::dsp {

Eigen::MatrixXd deltas(const Eigen::Ref<const Eigen::MatrixXd>& base) {
  constexpr int kWindow = 2;
  constexpr double kDenominator = 2.0 * (1 * 1 + 2 * 2);
  const Eigen::Index T = base.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(T, base.cols());
  for (Eigen::Index t = 0; t < T; ++t) {
    for (int k = 1; k <= kWindow; ++k) {
      const Eigen::Index ahead = std::min<Eigen::Index>(t + k, T - 1);
      const Eigen::Index behind = std::max<Eigen::Index>(t - k, 0);
      out.row(t) += k * (base.row(ahead) - base.row(behind));
    }
  }
  return out / kDenominator;
}

Eigen::MatrixXd add_deltas(const Eigen::Ref<const Eigen::MatrixXd>& base) {
  const Eigen::MatrixXd d1 = deltas(base);
  const Eigen::MatrixXd d2 = deltas(d1);
  Eigen::MatrixXd out(base.rows(), base.cols() * 3);
  if (base.rows() > 0) out << base, d1, d2;
  return out;
}

}  // namespace vtinv::dsp
