#include "vtinv/net/checkpoint.hpp"

#include <map>

#include "vtinv/error.hpp"
#include "vtinv/text.hpp"

namespace vtinv::net {

namespace {

constexpr std::string_view kMagic = "VTINV1";

void append_array(std::string& out, std::string_view name,
                  const Eigen::Ref<const Eigen::MatrixXd>& m) {
  out.append("[array ").append(name).push_back(' ');
  out.append(std::to_string(m.rows())).push_back(' ');
  out.append(std::to_string(m.cols())).append("]\n");
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out.push_back(' ');
      out.append(text::format_double(m(r, c)));
    }
    out.push_back('\n');
  }
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  for (auto w : text::split(text::trim(s), ' ')) {
    if (!w.empty()) out.push_back(w);
  }
  return out;
}

const std::map<std::string_view, Eigen::Index ModelConfig::*> kModelKeys = {
    {"model.input_dim", &ModelConfig::input_dim},
    {"model.dense_units", &ModelConfig::dense_units},
    {"model.lstm_units", &ModelConfig::lstm_units},
    {"model.output_dim", &ModelConfig::output_dim},
};

}  // namespace

std::optional<std::string> Checkpoint::setting(std::string_view key) const {
  for (const auto& [k, v] : settings) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string write_checkpoint(const Checkpoint& ckpt) {
  const ModelConfig& cfg = ckpt.params.config;
  std::string out;
  out.append(kMagic).push_back('\n');
  out += "model.input_dim = " + std::to_string(cfg.input_dim) + "\n";
  out += "model.dense_units = " + std::to_string(cfg.dense_units) + "\n";
  out += "model.lstm_units = " + std::to_string(cfg.lstm_units) + "\n";
  out += "model.output_dim = " + std::to_string(cfg.output_dim) + "\n";
  out += "model.seed = " + std::to_string(cfg.seed) + "\n";
  for (const auto& [k, v] : ckpt.settings) out += k + " = " + v + "\n";

  for (const auto& view : param_views(ckpt.params)) append_array(out, view.name, view.values);
  append_array(out, "contour_stats.mean", ckpt.contour_stats.mean);
  append_array(out, "contour_stats.std", ckpt.contour_stats.std);
  if (ckpt.feature_stats) {
    append_array(out, "feature_stats.mean", ckpt.feature_stats->mean);
    append_array(out, "feature_stats.std", ckpt.feature_stats->std);
  }
  return out;
}

Checkpoint parse_checkpoint(std::string_view text) {
  const auto ls = text::lines(text);
  if (ls.empty() || text::trim(ls[0]) != kMagic) {
    throw ParseError("not a checkpoint (expected '" + std::string(kMagic) + "')", 1);
  }

  Checkpoint ckpt;
  ModelConfig cfg;
  std::size_t i = 1;
  for (; i < ls.size(); ++i) {
    const std::string_view line = text::trim(ls[i]);
    if (line.empty()) continue;
    if (line.front() == '[') break;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", i + 1);
    const std::string key(text::trim(line.substr(0, eq)));
    const std::string value(text::trim(line.substr(eq + 1)));
    if (const auto it = kModelKeys.find(key); it != kModelKeys.end()) {
      cfg.*(it->second) = static_cast<Eigen::Index>(text::parse_int(value, i + 1));
    } else if (key == "model.seed") {
      cfg.seed = static_cast<std::uint64_t>(text::parse_int(value, i + 1));
    } else {
      ckpt.settings.emplace_back(key, value);
    }
  }

  std::map<std::string, Eigen::MatrixXd, std::less<>> arrays;
  while (i < ls.size()) {
    const std::size_t header_line = i + 1;
    const std::string_view header = text::trim(ls[i]);
    if (header.empty()) {
      ++i;
      continue;
    }
    if (header.size() < 2 || header.front() != '[' || header.back() != ']') {
      throw ParseError("expected '[array name rows cols]'", header_line);
    }
    const auto w = words(header.substr(1, header.size() - 2));
    if (w.size() != 4 || w[0] != "array") {
      throw ParseError("expected '[array name rows cols]'", header_line);
    }
    const auto rows = static_cast<Eigen::Index>(text::parse_int(w[2], header_line));
    const auto cols = static_cast<Eigen::Index>(text::parse_int(w[3], header_line));
    if (rows < 0 || cols < 0) throw ParseError("negative array shape", header_line);
    Eigen::MatrixXd m(rows, cols);
    ++i;
    for (Eigen::Index r = 0; r < rows; ++r, ++i) {
      if (i >= ls.size()) throw ParseError("array '" + std::string(w[1]) + "' truncated", i);
      const auto fields = words(ls[i]);
      if (static_cast<Eigen::Index>(fields.size()) != cols) {
        throw ParseError("expected " + std::to_string(cols) + " values", i + 1);
      }
      for (Eigen::Index c = 0; c < cols; ++c) {
        m(r, c) = text::parse_double(fields[static_cast<std::size_t>(c)], i + 1);
      }
    }
    if (!arrays.emplace(std::string(w[1]), std::move(m)).second) {
      throw ParseError("duplicate array '" + std::string(w[1]) + "'", header_line);
    }
  }

  auto take = [&](const std::string& name, Eigen::Index rows, Eigen::Index cols) {
    const auto it = arrays.find(name);
    if (it == arrays.end()) throw ParseError("checkpoint lacks array '" + name + "'");
    if (it->second.rows() != rows || it->second.cols() != cols) {
      throw ParseError("array '" + name + "' has shape " + std::to_string(it->second.rows()) + "x" +
                       std::to_string(it->second.cols()) + ", expected " + std::to_string(rows) +
                       "x" + std::to_string(cols));
    }
    Eigen::MatrixXd m = std::move(it->second);
    arrays.erase(it);
    return m;
  };

  ckpt.params = ModelParams::zeros(cfg);
  for (auto& view : param_views(ckpt.params)) {
    view.values = take(view.name, view.values.rows(), view.values.cols());
  }
  ckpt.contour_stats.mean = take("contour_stats.mean", cfg.output_dim, 1);
  ckpt.contour_stats.std = take("contour_stats.std", cfg.output_dim, 1);
  if (arrays.contains("feature_stats.mean")) {
    FeatureNormStats fs;
    fs.mean = take("feature_stats.mean", cfg.input_dim, 1);
    fs.std = take("feature_stats.std", cfg.input_dim, 1);
    ckpt.feature_stats = std::move(fs);
  }
  if (!arrays.empty()) throw ParseError("unexpected array '" + arrays.begin()->first + "'");
  return ckpt;
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  text::write_file(path, write_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::string& path) {
  try {
    return parse_checkpoint(text::read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace vtinv::net
