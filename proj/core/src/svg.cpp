#include "vtinv/svg.hpp"

#include <array>
#include <cstdio>

#include "vtinv/eval.hpp"

namespace vtinv {

namespace {

constexpr std::array<std::string_view, kArticulatorCount> kColours = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
};

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string points(const Contour& c) {
  std::string out;
  char buf[64];
  for (std::size_t p = 0; p < c.size(); ++p) {
    std::snprintf(buf, sizeof buf, "%s%.3f,%.3f", p ? " " : "", c[p].x_px, c[p].y_px);
    out += buf;
  }
  return out;
}

}  // namespace

std::string emit_contour_svg(const FrameContours& pred, const FrameContours& truth,
                             std::string_view title, double image_size_px) {
  const auto errors = eval::frame_errors(pred, truth);
  double rmse = 0.0;
  for (const auto& e : errors) rmse += e.rmse_mm;
  rmse /= kArticulatorCount;

  char buf[256];
  std::string svg;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 %g %g\" width=\"544\" "
                "height=\"544\">\n",
                image_size_px, image_size_px);
  svg += buf;
  std::snprintf(buf, sizeof buf, "RMSE %.2f mm", rmse);
  const std::string full_title = title.empty() ? std::string(buf) : escape(title) + " - " + buf;
  svg += "<title>" + full_title + "</title>\n";
  std::snprintf(buf, sizeof buf, "<rect width=\"%g\" height=\"%g\" fill=\"white\"/>\n", image_size_px,
                image_size_px);
  svg += buf;
  svg += "<text x=\"2\" y=\"6\" font-size=\"4\" font-family=\"sans-serif\">" + full_title + "</text>\n";

  for (Articulator a : kArticulators) {
    const std::string colour(kColours[index_of(a)]);
    const std::string name(articulator_name(a));
    svg += "<polyline class=\"truth " + name + "\" fill=\"none\" stroke=\"" + colour +
           "\" stroke-width=\"0.6\" points=\"" + points(truth[a]) + "\"/>\n";
    svg += "<polyline class=\"pred " + name + "\" fill=\"none\" stroke=\"" + colour +
           "\" stroke-width=\"0.6\" stroke-dasharray=\"1.5,1\" points=\"" + points(pred[a]) + "\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace vtinv
