#include "vtinv/config.hpp"

#include <functional>
#include <map>

#include "vtinv/error.hpp"
#include "vtinv/text.hpp"

namespace vtinv {

namespace {

using Setter = std::function<void(PipelineConfig&, std::string_view)>;

int as_int(std::string_view v) { return static_cast<int>(text::parse_int(v)); }
std::uint64_t as_u64(std::string_view v) {
  const long long x = text::parse_int(v);
  if (x < 0) throw ParseError("expected a non-negative integer, got '" + std::string(v) + "'");
  return static_cast<std::uint64_t>(x);
}

LabelSet parse_labels(std::string_view v) {
  LabelSet out;
  for (auto l : text::split(v, ',')) {
    const auto t = text::trim(l);
    if (!t.empty()) out.emplace(t);
  }
  return out;
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"model.dense_units", [](PipelineConfig& c, std::string_view v) { c.model.dense_units = as_int(v); }},
      {"model.lstm_units", [](PipelineConfig& c, std::string_view v) { c.model.lstm_units = as_int(v); }},
      {"model.seed", [](PipelineConfig& c, std::string_view v) { c.model.seed = as_u64(v); }},
      {"train.max_epochs", [](PipelineConfig& c, std::string_view v) { c.train.max_epochs = as_int(v); }},
      {"train.batch_sequences", [](PipelineConfig& c, std::string_view v) { c.train.batch_sequences = as_int(v); }},
      {"train.patience", [](PipelineConfig& c, std::string_view v) { c.train.patience = as_int(v); }},
      {"train.learning_rate", [](PipelineConfig& c, std::string_view v) { c.train.learning_rate = text::parse_double(v); }},
      {"train.seed", [](PipelineConfig& c, std::string_view v) { c.train.seed = as_u64(v); }},
      {"train.split_seed", [](PipelineConfig& c, std::string_view v) { c.split_seed = as_u64(v); }},
      {"train.silence_labels", [](PipelineConfig& c, std::string_view v) { c.silence_labels = parse_labels(v); }},
      {"train.session_norm",
       [](PipelineConfig& c, std::string_view v) {
         if (v == "scalar") c.session_norm = SessionNorm::scalar;
         else if (v == "per_dimension") c.session_norm = SessionNorm::per_dimension;
         else throw ParseError("train.session_norm must be scalar or per_dimension");
       }},
      {"mfcc.window_s", [](PipelineConfig& c, std::string_view v) { c.mfcc.window_s = text::parse_double(v); }},
      {"mfcc.hop_s", [](PipelineConfig& c, std::string_view v) { c.mfcc.hop_s = text::parse_double(v); }},
      {"mfcc.fft_size", [](PipelineConfig& c, std::string_view v) { c.mfcc.fft_size = as_int(v); }},
      {"mfcc.n_mel_filters", [](PipelineConfig& c, std::string_view v) { c.mfcc.n_mel_filters = as_int(v); }},
      {"mfcc.n_ceps", [](PipelineConfig& c, std::string_view v) { c.mfcc.n_ceps = as_int(v); }},
      {"mfcc.preemphasis", [](PipelineConfig& c, std::string_view v) { c.mfcc.preemphasis = text::parse_double(v); }},
      {"mfcc.fmin_hz", [](PipelineConfig& c, std::string_view v) { c.mfcc.mel_fmin_hz = text::parse_double(v); }},
      {"mfcc.fmax_hz", [](PipelineConfig& c, std::string_view v) { c.mfcc.mel_fmax_hz = text::parse_double(v); }},
      {"mfcc.log_floor", [](PipelineConfig& c, std::string_view v) { c.mfcc.log_floor = text::parse_double(v); }},
      {"eval.median_mode", [](PipelineConfig& c, std::string_view v) { c.median_mode = eval::parse_median_mode(v); }},
  };
  return table;
}

}  // namespace

Settings parse_settings(std::string_view text) {
  Settings out;
  const auto ls = text::lines(text);
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const auto line = text::trim(ls[i]);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", i + 1);
    out.emplace_back(std::string(text::trim(line.substr(0, eq))),
                     std::string(text::trim(line.substr(eq + 1))));
  }
  return out;
}

void apply_settings(PipelineConfig& cfg, const Settings& settings) {
  for (const auto& [key, value] : settings) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw ParseError("unknown configuration key '" + key + "'");
    try {
      it->second(cfg, value);
    } catch (const ParseError& e) {
      throw ParseError(key + ": " + e.what());
    }
  }
}

void apply_preset(PipelineConfig& cfg, std::string_view preset) {
  if (preset == "paper") {
    cfg.model.dense_units = 300;
    cfg.model.lstm_units = 300;
    cfg.train.max_epochs = 300;
  } else if (preset == "desk") {
    cfg.model.dense_units = 64;
    cfg.model.lstm_units = 64;
    cfg.train.max_epochs = 30;
  } else {
    throw ParseError("unknown preset '" + std::string(preset) + "' (expected paper or desk)");
  }
}

Settings to_settings(const PipelineConfig& c) {
  std::string silence;
  for (const auto& l : c.silence_labels) silence += (silence.empty() ? "" : ",") + l;
  return {
      {"model.dense_units", std::to_string(c.model.dense_units)},
      {"model.lstm_units", std::to_string(c.model.lstm_units)},
      {"model.seed", std::to_string(c.model.seed)},
      {"train.max_epochs", std::to_string(c.train.max_epochs)},
      {"train.batch_sequences", std::to_string(c.train.batch_sequences)},
      {"train.patience", std::to_string(c.train.patience)},
      {"train.learning_rate", text::format_shortest(c.train.learning_rate)},
      {"train.seed", std::to_string(c.train.seed)},
      {"train.split_seed", std::to_string(c.split_seed)},
      {"train.silence_labels", silence},
      {"train.session_norm", c.session_norm == SessionNorm::scalar ? "scalar" : "per_dimension"},
      {"mfcc.window_s", text::format_shortest(c.mfcc.window_s)},
      {"mfcc.hop_s", text::format_shortest(c.mfcc.hop_s)},
      {"mfcc.fft_size", std::to_string(c.mfcc.fft_size)},
      {"mfcc.n_mel_filters", std::to_string(c.mfcc.n_mel_filters)},
      {"mfcc.n_ceps", std::to_string(c.mfcc.n_ceps)},
      {"mfcc.preemphasis", text::format_shortest(c.mfcc.preemphasis)},
      {"mfcc.fmin_hz", text::format_shortest(c.mfcc.mel_fmin_hz)},
      {"mfcc.fmax_hz", text::format_shortest(c.mfcc.mel_fmax_hz)},
      {"mfcc.log_floor", text::format_shortest(c.mfcc.log_floor)},
      {"eval.median_mode", std::string(eval::median_mode_name(c.median_mode))},
  };
}

}  // namespace vtinv
