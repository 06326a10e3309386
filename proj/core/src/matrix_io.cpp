#include "vtinv/matrix_io.hpp"

#include <vector>

#include "vtinv/error.hpp"
#include "vtinv/text.hpp"

namespace vtinv {

Eigen::MatrixXd parse_matrix_csv(std::string_view text, Eigen::Index expected_cols) {
  std::vector<double> values;
  Eigen::Index cols = expected_cols;
  Eigen::Index rows = 0;
  const auto ls = text::lines(text);
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (text::trim(ls[i]).empty()) continue;
    const auto fields = text::split(ls[i], ',');
    const auto n = static_cast<Eigen::Index>(fields.size());
    if (cols < 0) cols = n;
    if (n != cols) {
      throw ParseError("expected " + std::to_string(cols) + " columns, got " + std::to_string(n),
                       i + 1);
    }
    for (auto f : fields) values.push_back(text::parse_double(f, i + 1));
    ++rows;
  }
  if (cols < 0) cols = 0;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = values[static_cast<std::size_t>(r * cols + c)];
  }
  return m;
}

std::string write_matrix_csv(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  std::string out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out.push_back(',');
      out.append(text::format_double(m(r, c)));
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace vtinv
