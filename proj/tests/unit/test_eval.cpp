#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "vtinv/error.hpp"
#include "vtinv/eval.hpp"
#include "vtinv/text.hpp"

namespace vtinv::eval {
namespace {

using testing::random_frame;

// ---- independent oracles ----------------------------------------------------

struct OracleError {
  double rmse;
  double median;
};

double sorted_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

OracleError oracle_frame_error(const FrameContours& pred, const FrameContours& truth, Articulator a,
                               MedianMode mode) {
  double sq = 0.0;
  std::vector<double> abs_coords, distances;
  for (std::size_t p = 0; p < kPointsPerContour; ++p) {
    const double dx = (pred[a][p].x_px - truth[a][p].x_px) * 1.62;
    const double dy = (pred[a][p].y_px - truth[a][p].y_px) * 1.62;
    sq += dx * dx + dy * dy;
    abs_coords.push_back(std::abs(dx));
    abs_coords.push_back(std::abs(dy));
    distances.push_back(std::hypot(dx, dy));
  }
  return {std::sqrt(sq / 100.0), sorted_median(mode == MedianMode::coordinate ? abs_coords : distances)};
}

double t_density(double x, double df) {
  const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) / std::sqrt(df * std::numbers::pi);
  return c * std::pow(1.0 + x * x / df, -(df + 1) / 2);
}

/// Two-sided p-value by composite Simpson integration of the t density over [-|t|, |t|].
double oracle_p_value(double t, double df) {
  const int n = 200000;
  const double a = -std::abs(t), b = std::abs(t), h = (b - a) / n;
  double sum = t_density(a, df) + t_density(b, df);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * t_density(a + i * h, df);
  return 1.0 - sum * h / 3.0;
}

FrameContours shifted(const FrameContours& f, double dx, double dy) {
  FrameContours out = f;
  for (auto& c : out.contours) {
    for (auto& p : c) {
      p.x_px += dx;
      p.y_px += dy;
    }
  }
  return out;
}

// ---- frame errors -----------------------------------------------------------

TEST(FrameErrors, IdenticalFramesAreZero) {
  Rng rng(1);
  const FrameContours f = random_frame(rng);
  for (const auto& e : frame_errors(f, f)) {
    EXPECT_EQ(e.rmse_mm, 0.0);
    EXPECT_EQ(e.median_mm, 0.0);
  }
}

TEST(FrameErrors, UnitPixelOffset) {
  Rng rng(2);
  const FrameContours f = random_frame(rng, 10, 100);
  const auto errs = frame_errors(shifted(f, 1.0, -1.0), f);
  for (std::size_t a = 0; a < 8; ++a) {
    EXPECT_NEAR(errs[a].rmse_mm, 1.62, 1e-12);
    EXPECT_NEAR(errs[a].median_mm, 1.62, 1e-12);
    EXPECT_EQ(errs[a].articulator, kArticulators[a]);
  }
}

TEST(FrameErrors, MatchesBruteForceOracle) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const FrameContours pred = random_frame(rng), truth = random_frame(rng);
    for (MedianMode mode : {MedianMode::coordinate, MedianMode::euclidean}) {
      const auto errs = frame_errors(pred, truth, 5, mode);
      for (Articulator a : kArticulators) {
        const OracleError o = oracle_frame_error(pred, truth, a, mode);
        EXPECT_NEAR(errs[index_of(a)].rmse_mm, o.rmse, 1e-12);
        EXPECT_NEAR(errs[index_of(a)].median_mm, o.median, 1e-12);
        EXPECT_EQ(errs[index_of(a)].frame_index, 5u);
      }
    }
  }
}

TEST(FrameErrors, SymmetricAndScaleCovariant) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const FrameContours a = random_frame(rng), b = random_frame(rng);
    const auto ab = frame_errors(a, b), ba = frame_errors(b, a);
    FrameContours a2 = a, b2 = b;
    for (auto* f : {&a2, &b2}) {
      for (auto& c : f->contours) {
        for (auto& p : c) {
          p.x_px *= 2.0;
          p.y_px *= 2.0;
        }
      }
    }
    const auto scaled = frame_errors(a2, b2);
    for (std::size_t k = 0; k < 8; ++k) {
      EXPECT_EQ(ab[k].rmse_mm, ba[k].rmse_mm);
      EXPECT_EQ(ab[k].median_mm, ba[k].median_mm);
      EXPECT_NEAR(scaled[k].rmse_mm, 2.0 * ab[k].rmse_mm, 1e-12);
      EXPECT_NEAR(scaled[k].median_mm, 2.0 * ab[k].median_mm, 1e-12);
    }
  }
}

TEST(FrameErrors, RmseBoundsMeanAbsoluteResidual) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const FrameContours a = random_frame(rng), b = random_frame(rng);
    const auto errs = frame_errors(a, b);
    for (Articulator art : kArticulators) {
      double mean_abs = 0.0;
      for (std::size_t p = 0; p < 50; ++p) {
        mean_abs += std::abs(a[art][p].x_px - b[art][p].x_px) + std::abs(a[art][p].y_px - b[art][p].y_px);
      }
      mean_abs = mean_abs * 1.62 / 100.0;
      EXPECT_GE(errs[index_of(art)].rmse_mm, mean_abs - 1e-12);
    }
  }
}

TEST(MedianMode, Names) {
  EXPECT_EQ(parse_median_mode("euclidean"), MedianMode::euclidean);
  EXPECT_EQ(median_mode_name(MedianMode::coordinate), "coordinate");
  EXPECT_THROW(parse_median_mode("mode"), Error);
}

// ---- aggregation ------------------------------------------------------------

FrameErrors uniform_errors(double rmse, double median) {
  FrameErrors e{};
  for (std::size_t a = 0; a < 8; ++a) {
    e[a].articulator = kArticulators[a];
    e[a].rmse_mm = rmse;
    e[a].median_mm = median;
  }
  return e;
}

TEST(Aggregate, SingleFrame) {
  Rng rng(6);
  FrameErrors e{};
  for (std::size_t a = 0; a < 8; ++a) {
    e[a].rmse_mm = rng.uniform(0, 3);
    e[a].median_mm = rng.uniform(0, 3);
  }
  const EvalReport r = aggregate_report(std::span(&e, 1));
  for (std::size_t a = 0; a < 8; ++a) {
    EXPECT_EQ(r.articulators[a].rmse_mean_mm, e[a].rmse_mm);
    EXPECT_EQ(r.articulators[a].median_mean_mm, e[a].median_mm);
    EXPECT_EQ(r.articulators[a].rmse_std_mm, 0.0);
  }
}

TEST(Aggregate, TwoFramesPopulationStd) {
  const std::vector<FrameErrors> errs = {uniform_errors(1.0, 0.5), uniform_errors(3.0, 1.5)};
  const EvalReport r = aggregate_report(errs);
  for (const auto& row : r.articulators) {
    EXPECT_DOUBLE_EQ(row.rmse_mean_mm, 2.0);
    EXPECT_DOUBLE_EQ(row.rmse_std_mm, 1.0);
    EXPECT_DOUBLE_EQ(row.median_mean_mm, 1.0);
  }
  EXPECT_DOUBLE_EQ(r.overall.rmse_mean_mm, 2.0);
  EXPECT_EQ(r.frame_rmse.size(), 2u);
}

TEST(Aggregate, OverallIsMeanOfArticulatorRows) {
  Rng rng(7);
  std::vector<FrameErrors> errs(30);
  for (auto& e : errs) {
    for (std::size_t a = 0; a < 8; ++a) {
      e[a].rmse_mm = rng.uniform(0, 2.0 + static_cast<double>(a));
      e[a].median_mm = rng.uniform(0, 1);
    }
  }
  const EvalReport r = aggregate_report(errs);
  double mean = 0.0, median = 0.0;
  for (const auto& row : r.articulators) {
    mean += row.rmse_mean_mm / 8.0;
    median += row.median_mean_mm / 8.0;
  }
  EXPECT_NEAR(r.overall.rmse_mean_mm, mean, 1e-12);
  EXPECT_NEAR(r.overall.median_mean_mm, median, 1e-12);
  // Overall spread: population std of all 240 pooled samples.
  double sq = 0.0;
  for (const auto& e : errs) {
    for (const auto& x : e) sq += (x.rmse_mm - mean) * (x.rmse_mm - mean);
  }
  EXPECT_NEAR(r.overall.rmse_std_mm, std::sqrt(sq / 240.0), 1e-12);
}

// ---- t-test -----------------------------------------------------------------

TEST(TTest, IdenticalSamples) {
  const std::vector<double> a = {1.0, 2.5, 3.0, 4.5};
  const TTestResult r = students_t_test(a, a);
  EXPECT_EQ(r.t, 0.0);
  EXPECT_EQ(r.p_two_sided, 1.0);
  EXPECT_EQ(r.df, 6.0);
}

TEST(TTest, CriticalValueAtTenDegreesOfFreedom) {
  const double oracle = oracle_p_value(2.228, 10.0);
  const double p = 2.0 * (1.0 - student_t_cdf(2.228, 10.0));
  EXPECT_NEAR(p, oracle, 1e-9);
  EXPECT_NEAR(p, 0.05, 5e-4);
}

TEST(TTest, CdfMatchesIntegrationOracle) {
  for (double df : {1.0, 2.0, 4.0, 7.5, 30.0, 200.0}) {
    for (double t : {0.1, 0.7, 1.5, 2.5, 4.0}) {
      EXPECT_NEAR(2.0 * (1.0 - student_t_cdf(t, df)), oracle_p_value(t, df), 1e-8) << df << " " << t;
      EXPECT_NEAR(student_t_cdf(-t, df), 1.0 - student_t_cdf(t, df), 1e-14);
    }
  }
}

TEST(TTest, ShiftedSamples) {
  const std::vector<double> a = {1, 2, 3}, b = {11, 12, 13};
  const TTestResult r = students_t_test(a, b);
  // Pooled variance 1, se = sqrt(2/3): t = -10 / sqrt(2/3), df = 4.
  EXPECT_NEAR(r.t, -10.0 / std::sqrt(2.0 / 3.0), 1e-12);
  EXPECT_EQ(r.df, 4.0);
  EXPECT_NEAR(r.p_two_sided, oracle_p_value(r.t, 4.0), 1e-9);
  EXPECT_NEAR(r.p_two_sided, 2.5521674944e-4, 1e-9);
  EXPECT_LT(r.p_two_sided, 1e-3);
}

TEST(TTest, SwapFlipsSignKeepsP) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(5 + rng.below(20)), b(5 + rng.below(20));
    for (auto& x : a) x = rng.normal(1.0, 1.0);
    for (auto& x : b) x = rng.normal(1.3, 2.0);
    const TTestResult ab = students_t_test(a, b), ba = students_t_test(b, a);
    EXPECT_EQ(ab.t, -ba.t);
    EXPECT_EQ(ab.p_two_sided, ba.p_two_sided);
  }
}

TEST(TTest, ZeroVarianceUnequalMeansIsDegenerate) {
  const std::vector<double> a = {1, 1, 1}, b = {2, 2};
  const TTestResult r = students_t_test(a, b);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.p_two_sided, 0.0);
  EXPECT_TRUE(std::isinf(r.t));
}

TEST(TTest, NeedsTwoDegreesOfFreedom) {
  const std::vector<double> one = {1.0};
  EXPECT_THROW(students_t_test(one, one), ContractError);
}

TEST(IncompleteBeta, KnownValues) {
  EXPECT_NEAR(incomplete_beta(1.0, 1.0, 0.3), 0.3, 1e-14);
  EXPECT_NEAR(incomplete_beta(2.0, 1.0, 0.5), 0.25, 1e-14);
  EXPECT_NEAR(incomplete_beta(0.5, 0.5, 0.5), 0.5, 1e-14);
  EXPECT_EQ(incomplete_beta(3.0, 2.0, 0.0), 0.0);
  EXPECT_EQ(incomplete_beta(3.0, 2.0, 1.0), 1.0);
}

// ---- report files -----------------------------------------------------------

EvalReport random_report(std::uint64_t seed, std::size_t frames) {
  Rng rng(seed);
  std::vector<FrameErrors> errs(frames);
  for (auto& e : errs) {
    for (std::size_t a = 0; a < 8; ++a) {
      e[a].rmse_mm = rng.uniform(0, 3) * std::pow(10.0, rng.uniform(-3, 1));
      e[a].median_mm = rng.uniform(0, 3);
    }
  }
  return aggregate_report(errs);
}

TEST(ReportCsv, ShapeAndRoundTrip) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    EvalReport r = random_report(seed, 20);
    if (seed % 2) compare_to_baseline(r, random_report(seed + 100, 15));
    const std::string csv = write_report_csv(r);
    const auto ls = text::lines(csv);
    ASSERT_EQ(ls.size(), 10u);
    EXPECT_EQ(ls[0], "articulator,rmse_mean_mm,rmse_std_mm,median_mean_mm,p_vs_baseline");
    EXPECT_EQ(ls[9].substr(0, 5), "mean,");
    const EvalReport back = parse_report_csv(csv);
    EXPECT_EQ(back.articulators, r.articulators);
    EXPECT_EQ(back.overall, r.overall);
    EXPECT_EQ(write_report_csv(back), csv);
  }
}

TEST(ReportCsv, FrameSamplesRoundTrip) {
  const EvalReport r = random_report(3, 17);
  EvalReport back = parse_report_csv(write_report_csv(r));
  parse_frame_samples_csv(write_frame_samples_csv(r), back);
  EXPECT_EQ(back.frame_rmse, r.frame_rmse);
  EXPECT_EQ(frame_samples_path("runs/a/report.csv"), "runs/a/report.frames.csv");
  EXPECT_EQ(frame_samples_path("runs.v2/report"), "runs.v2/report.frames.csv");
}

TEST(ReportCsv, RejectsMalformed) {
  const std::string csv = write_report_csv(random_report(4, 3));
  EXPECT_THROW(parse_report_csv(csv.substr(csv.find('\n') + 1)), ParseError);
  EXPECT_THROW(parse_report_csv(csv.substr(0, csv.rfind("mean"))), ParseError);
}

TEST(ReportTable, MarksSignificantRows) {
  EvalReport r = random_report(5, 40);
  EvalReport worse = r;
  for (auto& row : worse.frame_rmse) row[index_of(Articulator::tongue)] += 5.0;
  compare_to_baseline(r, worse);
  EXPECT_TRUE(r.articulators[index_of(Articulator::tongue)].significant());
  EXPECT_FALSE(r.articulators[index_of(Articulator::velum)].significant());
  const std::string table = format_table(r);
  EXPECT_NE(table.find("tongue"), std::string::npos);
  EXPECT_NE(table.find('*'), std::string::npos);
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 10);
}

TEST(SequenceErrors, PerFrame) {
  Rng rng(9);
  const ContourSequence a = testing::random_sequence(rng, 4), b = testing::random_sequence(rng, 4);
  const auto errs = sequence_errors(a, b);
  ASSERT_EQ(errs.size(), 4u);
  for (std::size_t t = 0; t < 4; ++t) {
    EXPECT_EQ(errs[t][0].frame_index, t);
    EXPECT_EQ(errs[t][3].rmse_mm, frame_errors(a.frames[t], b.frames[t])[3].rmse_mm);
  }
  const ContourSequence short_seq = testing::random_sequence(rng, 3);
  EXPECT_THROW(sequence_errors(a, short_seq), ContractError);
}

}  // namespace
}  // namespace vtinv::eval
