#pragma once

#include <string>
#include <string_view>

#include <Eigen/Core>

namespace vtinv {

/// Comma-separated rows, one matrix row per line, 17 significant digits.
/// `expected_cols` < 0 accepts any consistent width.
Eigen::MatrixXd parse_matrix_csv(std::string_view text, Eigen::Index expected_cols = -1);
std::string write_matrix_csv(const Eigen::Ref<const Eigen::MatrixXd>& m);

}  // namespace vtinv
