#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vtinv/contours.hpp"

namespace vtinv::eval {

/// How the per-frame "median" residual is formed.
enum class MedianMode {
  coordinate,  // median of the 100 absolute coordinate residuals (default)
  euclidean,   // median of the 50 point-to-point distances
};

MedianMode parse_median_mode(std::string_view name);
std::string_view median_mode_name(MedianMode mode) noexcept;

struct FrameArticulatorError {
  std::size_t frame_index = 0;
  Articulator articulator = Articulator::arytenoid;
  double rmse_mm = 0.0;
  double median_mm = 0.0;
};

using FrameErrors = std::array<FrameArticulatorError, kArticulatorCount>;

/// Per-articulator RMSE and median residual in millimetres for one frame.
FrameErrors frame_errors(const FrameContours& pred, const FrameContours& truth,
                         std::size_t frame_index = 0, MedianMode mode = MedianMode::coordinate);

/// frame_errors over two aligned sequences.
std::vector<FrameErrors> sequence_errors(const ContourSequence& pred, const ContourSequence& truth,
                                         MedianMode mode = MedianMode::coordinate);

struct ReportRow {
  double rmse_mean_mm = 0.0;
  double rmse_std_mm = 0.0;
  double median_mean_mm = 0.0;
  std::optional<double> p_vs_baseline;

  bool significant(double alpha = 0.05) const { return p_vs_baseline && *p_vs_baseline < alpha; }
  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

/// Per-articulator rows in canonical order plus the overall `mean` row.
struct EvalReport {
  std::array<ReportRow, kArticulatorCount> articulators{};
  ReportRow overall;
  /// Per-frame RMSE per articulator; the samples behind the t-tests.
  std::vector<std::array<double, kArticulatorCount>> frame_rmse;
};

/// Means and population standard deviations over frames. The overall row is
/// the mean of the eight articulator rows for RMSE and median; its spread is
/// the population std of all pooled frame x articulator RMSE values.
EvalReport aggregate_report(std::span<const FrameErrors> errors);

struct TTestResult {
  double t = 0.0;
  double p_two_sided = 1.0;
  double df = 0.0;
  bool degenerate = false;  // zero pooled variance with unequal means
};

/// Two-sample Student t-test with pooled variance.
TTestResult students_t_test(std::span<const double> a, std::span<const double> b);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

/// Student t cumulative distribution function.
double student_t_cdf(double t, double df);

/// Fills p_vs_baseline of every row in `report` by testing its frame samples
/// against `baseline`'s. Both reports must carry frame samples.
void compare_to_baseline(EvalReport& report, const EvalReport& baseline);

/// `articulator,rmse_mean_mm,rmse_std_mm,median_mean_mm,p_vs_baseline`.
std::string write_report_csv(const EvalReport& report);
/// Restores the rows (not the frame samples).
EvalReport parse_report_csv(std::string_view text);

/// Sidecar with one row of eight per-frame RMSE values per frame.
std::string write_frame_samples_csv(const EvalReport& report);
void parse_frame_samples_csv(std::string_view text, EvalReport& report);

/// Sidecar path for a report file: `dir/report.csv` -> `dir/report.frames.csv`.
std::string frame_samples_path(const std::string& report_path);

/// Table-1 style text: `articulator  RMSE ± std  MEDIAN`, '*' marks p < 0.05.
std::string format_table(const EvalReport& report);

}  // namespace vtinv::eval
