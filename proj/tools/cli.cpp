#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <memory>
#include <ostream>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "vtinv/config.hpp"
#include "vtinv/contour_io.hpp"
#include "vtinv/corpus.hpp"
#include "vtinv/error.hpp"
#include "vtinv/experiment.hpp"
#include "vtinv/matrix_io.hpp"
#include "vtinv/net/checkpoint.hpp"
#include "vtinv/net/gradcheck.hpp"
#include "vtinv/svg.hpp"
#include "vtinv/synth.hpp"
#include "vtinv/text.hpp"

namespace fs = std::filesystem;

namespace vtinv::cli {

namespace {

constexpr const char* kPrecedence =
    "Settings are resolved as: built-in defaults, then --preset, then --config file "
    "(key = value lines; keys model.*, train.*, mfcc.*, eval.*), then explicit flags.";

struct SynthArgs {
  std::string out;
  std::uint64_t seed = 1;
  std::size_t sequences = 40;
  std::size_t frames = 120;
  std::size_t inventory = 12;
  double tau = 0.04;
  std::size_t sessions = 5;
};

struct TrainArgs {
  std::string corpus;
  std::string experiment;
  std::string config;
  std::string preset = "paper";
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> split_seed;
  std::optional<int> max_epochs;
  std::optional<int> units;
};

struct EvalArgs {
  std::string corpus;
  std::string checkpoint;
  std::string split = "test";
  std::string baseline_report;
  std::string out;
};

struct SeqArgs {
  std::string corpus;
  std::string checkpoint;
  std::string seq;
  std::string out;
  std::size_t frame = 0;
};

struct FeaturizeArgs {
  std::string corpus;
  std::string experiment;
  std::string config;
  std::string out;
};

struct GradArgs {
  std::uint64_t seed = 0;
  int dim = 5;
  int units = 8;
  int frames = 7;
  double epsilon = 1e-5;
  double threshold = 1e-5;
};

void log_settings(const Settings& settings) {
  for (const auto& [k, v] : settings) spdlog::info("  {} = {}", k, v);
}

SequenceKey parse_key(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == s.size()) {
    throw ParseError("--seq must look like <session_id>/<seq_id>, got '" + s + "'");
  }
  return {s.substr(0, slash), s.substr(slash + 1)};
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

int run_synth(const SynthArgs& a, std::ostream& out) {
  synth::SynthSpec spec;
  spec.seed = a.seed;
  spec.n_sequences = a.sequences;
  spec.frames_per_sequence = a.frames;
  spec.inventory_size = a.inventory;
  spec.coarticulation_tau_s = a.tau;
  spec.n_sessions = a.sessions;
  spdlog::info("synth: seed {} sequences {} frames {} inventory {} tau {} sessions {}", spec.seed,
               spec.n_sequences, spec.frames_per_sequence, spec.inventory_size,
               spec.coarticulation_tau_s, spec.n_sessions);
  const auto records = synth::generate_corpus(spec);
  synth::write_corpus(a.out, records);
  out << "wrote " << records.size() << " sequences to " << a.out << "\n";
  return kExitOk;
}

PipelineConfig resolve_config(const std::string& preset, const std::string& config_path) {
  PipelineConfig cfg;
  if (!preset.empty()) apply_preset(cfg, preset);
  if (!config_path.empty()) apply_settings(cfg, parse_settings(text::read_file(config_path)));
  return cfg;
}

int run_featurize(const FeaturizeArgs& a, std::ostream& out) {
  const ExperimentKind kind = parse_experiment(a.experiment);
  const PipelineConfig cfg = resolve_config("", a.config);
  spdlog::info("featurize: experiment {}", experiment_name(kind));
  log_settings(to_settings(cfg));
  const auto records = load_corpus(a.corpus);
  std::optional<phonfeat::PhoneInventory> inventory;
  const auto features = experiment_features(records, kind, cfg, &inventory);
  const std::string file = "features_" + std::string(feature_kind_name(feature_kind(kind))) + ".csv";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const fs::path dir = fs::path(a.out) / records[i].key.session_id / records[i].key.seq_id;
    fs::create_directories(dir);
    text::write_file((dir / file).string(), write_matrix_csv(features[i].data));
  }
  if (inventory) {
    fs::create_directories(a.out);
    text::write_file((fs::path(a.out) / "inventory.txt").string(), phonfeat::write_inventory(*inventory));
  }
  out << "wrote " << file << " for " << records.size() << " sequences to " << a.out << "\n";
  return kExitOk;
}

void write_report(const std::string& path, const eval::EvalReport& report) {
  ensure_parent(path);
  text::write_file(path, eval::write_report_csv(report));
  text::write_file(eval::frame_samples_path(path), eval::write_frame_samples_csv(report));
}

int run_train(const TrainArgs& a, std::ostream& out) {
  const ExperimentKind kind = parse_experiment(a.experiment);
  PipelineConfig cfg = resolve_config(a.preset, a.config);
  if (a.seed) {
    cfg.model.seed = *a.seed;
    cfg.train.seed = *a.seed;
  }
  if (a.split_seed) cfg.split_seed = *a.split_seed;
  if (a.max_epochs) cfg.train.max_epochs = *a.max_epochs;
  if (a.units) {
    cfg.model.dense_units = *a.units;
    cfg.model.lstm_units = *a.units;
  }

  const auto records = load_corpus(a.corpus);
  const ExperimentData data = prepare_experiment(records, kind, cfg);
  spdlog::info("train: experiment {} preset {} corpus {} ({} sequences)", experiment_name(kind),
               a.preset, a.corpus, records.size());
  log_settings(to_settings(data.config));

  const TrainedModel model = run_training(data);
  fs::create_directories(a.out);
  const fs::path dir(a.out);
  net::save_checkpoint((dir / "model.ckpt").string(), model.checkpoint);
  text::write_file((dir / "history.csv").string(), write_history_csv(model.history));
  const auto report = evaluate_split(data, model.checkpoint, SplitName::validation);
  write_report((dir / "report.csv").string(), report);

  out << "best epoch " << model.history.best_epoch << ", stopped at " << model.history.stopped_epoch
      << "\nvalidation report:\n"
      << eval::format_table(report);
  return kExitOk;
}

int run_eval(const EvalArgs& a, std::ostream& out) {
  const auto ckpt = net::load_checkpoint(a.checkpoint);
  const SplitName split = parse_split(a.split);
  const auto records = load_corpus(a.corpus);
  const ExperimentData data = prepare_for_checkpoint(records, ckpt);
  spdlog::info("eval: experiment {} split {} checkpoint {}", experiment_name(data.kind), a.split,
               a.checkpoint);
  log_settings(to_settings(data.config));

  auto report = evaluate_split(data, ckpt, split);
  if (!a.baseline_report.empty()) {
    eval::EvalReport baseline = eval::parse_report_csv(text::read_file(a.baseline_report));
    eval::parse_frame_samples_csv(text::read_file(eval::frame_samples_path(a.baseline_report)), baseline);
    eval::compare_to_baseline(report, baseline);
  }
  write_report(a.out, report);
  out << eval::format_table(report);
  return kExitOk;
}

SequencePrediction load_prediction(const SeqArgs& a) {
  const auto ckpt = net::load_checkpoint(a.checkpoint);
  const SequenceKey key = parse_key(a.seq);
  const auto records = load_corpus(a.corpus);
  const ExperimentData data = prepare_for_checkpoint(records, ckpt);
  spdlog::info("experiment {} sequence {}", experiment_name(data.kind), key.str());
  return predict_sequence(data, ckpt, key);
}

int run_predict(const SeqArgs& a, std::ostream& out) {
  const auto pred = load_prediction(a);
  ensure_parent(a.out);
  text::write_file(a.out, write_contour_csv(pred.predicted));
  out << "wrote " << pred.predicted.size() << " predicted frames to " << a.out << "\n";
  return kExitOk;
}

int run_plot(const SeqArgs& a, std::ostream& out) {
  const auto pred = load_prediction(a);
  if (a.frame >= pred.predicted.size()) {
    throw ContractError("--frame " + std::to_string(a.frame) + " out of range (sequence has " +
                        std::to_string(pred.predicted.size()) + " voiced frames)");
  }
  const std::string title = a.seq + " frame " + std::to_string(a.frame) + " (source frame " +
                            std::to_string(pred.source_frames[a.frame]) + ")";
  ensure_parent(a.out);
  text::write_file(a.out, emit_contour_svg(pred.predicted.frames[a.frame], pred.truth.frames[a.frame], title));
  out << "wrote " << a.out << "\n";
  return kExitOk;
}

int run_gradcheck(const GradArgs& a, std::ostream& out) {
  net::ModelConfig cfg;
  cfg.input_dim = a.dim;
  cfg.dense_units = a.units;
  cfg.lstm_units = a.units;
  spdlog::info("gradcheck: seed {} dim {} units {} frames {} epsilon {}", a.seed, a.dim, a.units,
               a.frames, a.epsilon);
  const auto r = net::grad_check(cfg, a.frames, a.epsilon, a.seed);
  out << "checked " << r.entries_checked << " entries, max relative error "
      << text::format_shortest(r.max_relative_error) << " (" << r.worst_param << "[" << r.worst_index
      << "])\n";
  return r.max_relative_error < a.threshold ? kExitOk : kExitData;
}

class LoggerScope {
 public:
  explicit LoggerScope(std::ostream& err) : previous_(spdlog::default_logger()) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto logger = std::make_shared<spdlog::logger>("vtinv", sink);
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
  }
  ~LoggerScope() { spdlog::set_default_logger(previous_); }
  LoggerScope(const LoggerScope&) = delete;
  LoggerScope& operator=(const LoggerScope&) = delete;

 private:
  std::shared_ptr<spdlog::logger> previous_;
};

}  // namespace

int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  LoggerScope logger(err);

  CLI::App app{"Vocal-tract contour inversion toolkit"};
  app.require_subcommand(1);
  app.footer("Environment: VTINV_THREADS caps worker pools (corpus loading, featurize, synth).");

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth->add_option("--out", synth_args.out, "Corpus directory")->required();
  synth->add_option("--seed", synth_args.seed, "Generator seed");
  synth->add_option("--sequences", synth_args.sequences, "Number of sequences")->check(CLI::PositiveNumber);
  synth->add_option("--frames", synth_args.frames, "Frames per sequence")->check(CLI::Range(20, 1000000));
  synth->add_option("--inventory", synth_args.inventory, "Labels including silence")->check(CLI::Range(3, 61));
  synth->add_option("--tau", synth_args.tau, "Coarticulation time constant (s)");
  synth->add_option("--sessions", synth_args.sessions, "Number of sessions")->check(CLI::PositiveNumber);

  FeaturizeArgs feat_args;
  auto* featurize = app.add_subcommand("featurize", "Write per-sequence feature cache files");
  featurize->add_option("--corpus", feat_args.corpus, "Corpus directory")->required();
  featurize->add_option("--experiment", feat_args.experiment, "baseline | w2v | onehot-auto | onehot-expert")->required();
  featurize->add_option("--config", feat_args.config, "key = value settings file");
  featurize->add_option("--out", feat_args.out, "Output directory")->required();

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "Train one experiment");
  train->footer(kPrecedence);
  train->add_option("--corpus", train_args.corpus, "Corpus directory")->required();
  train->add_option("--experiment", train_args.experiment, "baseline | w2v | onehot-auto | onehot-expert")->required();
  train->add_option("--config", train_args.config, "key = value settings file");
  train->add_option("--preset", train_args.preset, "paper (300 units, 300 epochs) or desk (64 units, 30 epochs)");
  train->add_option("--seed", train_args.seed, "Model initialisation and shuffling seed");
  train->add_option("--split-seed", train_args.split_seed, "Train/validation/test split seed");
  train->add_option("--max-epochs", train_args.max_epochs, "Epoch limit")->check(CLI::PositiveNumber);
  train->add_option("--units", train_args.units, "Dense and LSTM width")->check(CLI::PositiveNumber);
  train->add_option("--out", train_args.out, "Run directory")->required();

  EvalArgs eval_args;
  auto* evaluate = app.add_subcommand("eval", "Evaluate a checkpoint on a split");
  evaluate->add_option("--corpus", eval_args.corpus, "Corpus directory")->required();
  evaluate->add_option("--checkpoint", eval_args.checkpoint, "Checkpoint file")->required();
  evaluate->add_option("--split", eval_args.split, "train | val | test");
  evaluate->add_option("--baseline-report", eval_args.baseline_report,
                       "Report to t-test against (its .frames.csv sidecar must exist)");
  evaluate->add_option("--out", eval_args.out, "Report CSV path")->required();

  SeqArgs predict_args;
  auto* predict = app.add_subcommand("predict", "Predict contours of one sequence's voiced frames");
  predict->add_option("--corpus", predict_args.corpus, "Corpus directory")->required();
  predict->add_option("--checkpoint", predict_args.checkpoint, "Checkpoint file")->required();
  predict->add_option("--seq", predict_args.seq, "<session_id>/<seq_id>")->required();
  predict->add_option("--out", predict_args.out, "Contour CSV path")->required();

  GradArgs grad_args;
  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference gradient check");
  gradcheck->add_option("--seed", grad_args.seed, "Seed");
  gradcheck->add_option("--dim", grad_args.dim, "Input dimension")->check(CLI::PositiveNumber);
  gradcheck->add_option("--units", grad_args.units, "Dense and LSTM width")->check(CLI::PositiveNumber);
  gradcheck->add_option("--frames", grad_args.frames, "Sequence length")->check(CLI::PositiveNumber);
  gradcheck->add_option("--epsilon", grad_args.epsilon, "Central difference step");

  SeqArgs plot_args;
  auto* plot = app.add_subcommand("plot", "SVG overlay of predicted and true contours");
  plot->add_option("--corpus", plot_args.corpus, "Corpus directory")->required();
  plot->add_option("--checkpoint", plot_args.checkpoint, "Checkpoint file")->required();
  plot->add_option("--seq", plot_args.seq, "<session_id>/<seq_id>")->required();
  plot->add_option("--frame", plot_args.frame, "Voiced frame index within the sequence");
  plot->add_option("--out", plot_args.out, "SVG path")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*synth) return run_synth(synth_args, out);
    if (*featurize) return run_featurize(feat_args, out);
    if (*train) return run_train(train_args, out);
    if (*evaluate) return run_eval(eval_args, out);
    if (*predict) return run_predict(predict_args, out);
    if (*gradcheck) return run_gradcheck(grad_args, out);
    if (*plot) return run_plot(plot_args, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace vtinv::cli
