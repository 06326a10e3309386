#include <cstdio>

#include "vtinv/error.hpp"
#include "vtinv/eval.hpp"
#include "vtinv/text.hpp"

namespace vtinv::eval {

namespace {

constexpr std::string_view kHeader =
    "articulator,rmse_mean_mm,rmse_std_mm,median_mean_mm,p_vs_baseline";

void append_row(std::string& out, std::string_view name, const ReportRow& row) {
  out.append(name).push_back(',');
  out.append(text::format_double(row.rmse_mean_mm)).push_back(',');
  out.append(text::format_double(row.rmse_std_mm)).push_back(',');
  out.append(text::format_double(row.median_mean_mm)).push_back(',');
  if (row.p_vs_baseline) out.append(text::format_double(*row.p_vs_baseline));
  out.push_back('\n');
}

ReportRow parse_row(const std::vector<std::string_view>& f, std::size_t line) {
  ReportRow row;
  row.rmse_mean_mm = text::parse_double(f[1], line);
  row.rmse_std_mm = text::parse_double(f[2], line);
  row.median_mean_mm = text::parse_double(f[3], line);
  if (!text::trim(f[4]).empty()) row.p_vs_baseline = text::parse_double(f[4], line);
  return row;
}

std::vector<double> column(const EvalReport& r, std::size_t a) {
  std::vector<double> v;
  v.reserve(r.frame_rmse.size());
  for (const auto& row : r.frame_rmse) v.push_back(row[a]);
  return v;
}

std::vector<double> pooled(const EvalReport& r) {
  std::vector<double> v;
  v.reserve(r.frame_rmse.size() * kArticulatorCount);
  for (const auto& row : r.frame_rmse) v.insert(v.end(), row.begin(), row.end());
  return v;
}

}  // namespace

void compare_to_baseline(EvalReport& report, const EvalReport& baseline) {
  if (report.frame_rmse.size() < 2 || baseline.frame_rmse.size() < 2) {
    throw ContractError("compare_to_baseline: both reports need per-frame samples (>= 2 frames)");
  }
  for (std::size_t a = 0; a < kArticulatorCount; ++a) {
    report.articulators[a].p_vs_baseline =
        students_t_test(column(report, a), column(baseline, a)).p_two_sided;
  }
  report.overall.p_vs_baseline = students_t_test(pooled(report), pooled(baseline)).p_two_sided;
}

std::string write_report_csv(const EvalReport& report) {
  std::string out(kHeader);
  out.push_back('\n');
  for (Articulator a : kArticulators) append_row(out, articulator_name(a), report.articulators[index_of(a)]);
  append_row(out, "mean", report.overall);
  return out;
}

EvalReport parse_report_csv(std::string_view text) {
  const auto ls = text::lines(text);
  if (ls.empty() || text::trim(ls[0]) != kHeader) {
    throw ParseError("expected header '" + std::string(kHeader) + "'", 1);
  }
  if (ls.size() != kArticulatorCount + 2) {
    throw ParseError("expected 8 articulator rows and a mean row", ls.size());
  }
  EvalReport report;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto f = text::split(ls[i], ',');
    if (f.size() != 5) throw ParseError("expected 5 fields", i + 1);
    const std::string_view name = text::trim(f[0]);
    if (i <= kArticulatorCount) {
      const Articulator want = kArticulators[i - 1];
      if (name != articulator_name(want)) {
        throw ParseError("expected row '" + std::string(articulator_name(want)) + "'", i + 1);
      }
      report.articulators[i - 1] = parse_row(f, i + 1);
    } else {
      if (name != "mean") throw ParseError("expected final 'mean' row", i + 1);
      report.overall = parse_row(f, i + 1);
    }
  }
  return report;
}

std::string write_frame_samples_csv(const EvalReport& report) {
  std::string out = "frame";
  for (Articulator a : kArticulators) out.append(",").append(articulator_name(a));
  out.push_back('\n');
  for (std::size_t t = 0; t < report.frame_rmse.size(); ++t) {
    out.append(std::to_string(t));
    for (double v : report.frame_rmse[t]) out.append(",").append(text::format_double(v));
    out.push_back('\n');
  }
  return out;
}

void parse_frame_samples_csv(std::string_view text, EvalReport& report) {
  const auto ls = text::lines(text);
  if (ls.empty()) throw ParseError("empty frame sample file", 1);
  report.frame_rmse.clear();
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto f = text::split(ls[i], ',');
    if (f.size() != kArticulatorCount + 1) throw ParseError("expected 9 fields", i + 1);
    std::array<double, kArticulatorCount> row{};
    for (std::size_t a = 0; a < kArticulatorCount; ++a) row[a] = text::parse_double(f[a + 1], i + 1);
    report.frame_rmse.push_back(row);
  }
}

std::string frame_samples_path(const std::string& report_path) {
  const auto slash = report_path.find_last_of('/');
  const auto dot = report_path.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    return report_path.substr(0, dot) + ".frames" + report_path.substr(dot);
  }
  return report_path + ".frames.csv";
}

std::string format_table(const EvalReport& report) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-16s %18s %8s %10s\n", "articulator", "RMSE (mm)", "MEDIAN", "p");
  out += buf;
  auto line = [&](std::string_view name, const ReportRow& row) {
    char rmse[48];
    std::snprintf(rmse, sizeof rmse, "%.2f%s +- %.2f", row.rmse_mean_mm, row.significant() ? "*" : " ",
                  row.rmse_std_mm);
    char p[24] = "";
    if (row.p_vs_baseline) std::snprintf(p, sizeof p, "%.3g", *row.p_vs_baseline);
    std::snprintf(buf, sizeof buf, "%-16.*s %18s %8.2f %10s\n", static_cast<int>(name.size()),
                  name.data(), rmse, row.median_mean_mm, p);
    out += buf;
  };
  for (Articulator a : kArticulators) line(articulator_name(a), report.articulators[index_of(a)]);
  line("mean", report.overall);
  return out;
}

}  // namespace vtinv::eval
