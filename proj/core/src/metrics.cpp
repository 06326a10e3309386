#include <algorithm>
#include <cmath>

#include "vtinv/error.hpp"
#include "vtinv/eval.hpp"

namespace vtinv::eval {

MedianMode parse_median_mode(std::string_view name) {
  if (name == "coordinate") return MedianMode::coordinate;
  if (name == "euclidean") return MedianMode::euclidean;
  throw ParseError("unknown median mode '" + std::string(name) + "'");
}

std::string_view median_mode_name(MedianMode mode) noexcept {
  return mode == MedianMode::coordinate ? "coordinate" : "euclidean";
}

namespace {

template <std::size_t N>
double median_in_place(std::array<double, N>& v) {
  const auto mid = v.begin() + N / 2;
  std::nth_element(v.begin(), mid, v.end());
  if constexpr (N % 2 == 1) {
    return *mid;
  } else {
    const double upper = *mid;
    const double lower = *std::max_element(v.begin(), mid);
    return 0.5 * (lower + upper);
  }
}

}  // namespace

FrameErrors frame_errors(const FrameContours& pred, const FrameContours& truth,
                         std::size_t frame_index, MedianMode mode) {
  if (!pred.all_finite() || !truth.all_finite()) {
    throw ContractError("frame_errors: frame " + std::to_string(frame_index) +
                        " has non-finite coordinates");
  }
  FrameErrors out{};
  for (Articulator a : kArticulators) {
    const Contour& p = pred[a];
    const Contour& t = truth[a];
    std::array<double, kCoordsPerArticulator> abs_res{};
    std::array<double, kPointsPerContour> dist{};
    double sq = 0.0;
    for (std::size_t k = 0; k < kPointsPerContour; ++k) {
      const double dx = to_millimeters(p[k].x_px - t[k].x_px);
      const double dy = to_millimeters(p[k].y_px - t[k].y_px);
      sq += dx * dx + dy * dy;
      abs_res[2 * k] = std::abs(dx);
      abs_res[2 * k + 1] = std::abs(dy);
      dist[k] = std::hypot(dx, dy);
    }
    FrameArticulatorError& e = out[index_of(a)];
    e.frame_index = frame_index;
    e.articulator = a;
    e.rmse_mm = std::sqrt(sq / static_cast<double>(kCoordsPerArticulator));
    e.median_mm = mode == MedianMode::coordinate ? median_in_place(abs_res) : median_in_place(dist);
  }
  return out;
}

std::vector<FrameErrors> sequence_errors(const ContourSequence& pred, const ContourSequence& truth,
                                         MedianMode mode) {
  if (pred.size() != truth.size()) {
    throw ContractError("sequence_errors: " + std::to_string(pred.size()) + " predicted vs " +
                        std::to_string(truth.size()) + " true frames");
  }
  std::vector<FrameErrors> out;
  out.reserve(pred.size());
  for (std::size_t t = 0; t < pred.size(); ++t) {
    out.push_back(frame_errors(pred.frames[t], truth.frames[t], t, mode));
  }
  return out;
}

EvalReport aggregate_report(std::span<const FrameErrors> errors) {
  if (errors.empty()) throw ContractError("aggregate_report: no frames");
  const auto n = static_cast<double>(errors.size());

  EvalReport report;
  report.frame_rmse.reserve(errors.size());
  for (const auto& fe : errors) {
    std::array<double, kArticulatorCount> row{};
    for (std::size_t a = 0; a < kArticulatorCount; ++a) row[a] = fe[a].rmse_mm;
    report.frame_rmse.push_back(row);
  }

  for (std::size_t a = 0; a < kArticulatorCount; ++a) {
    double rmse_sum = 0.0;
    double median_sum = 0.0;
    for (const auto& fe : errors) {
      rmse_sum += fe[a].rmse_mm;
      median_sum += fe[a].median_mm;
    }
    ReportRow& row = report.articulators[a];
    row.rmse_mean_mm = rmse_sum / n;
    row.median_mean_mm = median_sum / n;
    double sq = 0.0;
    for (const auto& fe : errors) sq += (fe[a].rmse_mm - row.rmse_mean_mm) * (fe[a].rmse_mm - row.rmse_mean_mm);
    row.rmse_std_mm = std::sqrt(sq / n);
  }

  double rmse_mean = 0.0;
  double median_mean = 0.0;
  for (const auto& row : report.articulators) {
    rmse_mean += row.rmse_mean_mm;
    median_mean += row.median_mean_mm;
  }
  report.overall.rmse_mean_mm = rmse_mean / kArticulatorCount;
  report.overall.median_mean_mm = median_mean / kArticulatorCount;
  double sq = 0.0;
  for (const auto& fe : errors) {
    for (const auto& e : fe) sq += (e.rmse_mm - report.overall.rmse_mean_mm) * (e.rmse_mm - report.overall.rmse_mean_mm);
  }
  report.overall.rmse_std_mm = std::sqrt(sq / (n * kArticulatorCount));
  return report;
}

}  // namespace vtinv::eval
