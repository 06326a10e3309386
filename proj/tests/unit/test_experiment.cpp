#include <algorithm>
#include <map>
#include <string>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "vtinv/config.hpp"
#include "vtinv/error.hpp"
#include "vtinv/experiment.hpp"
#include "vtinv/svg.hpp"
#include "vtinv/synth.hpp"

namespace vtinv {
namespace {

// ---- configuration ----------------------------------------------------------

TEST(Config, ParsesKeyValueLinesWithComments) {
  const Settings s = parse_settings("# comment\nmodel.dense_units = 32\n\n  train.patience=4  \n");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0], (std::pair<std::string, std::string>{"model.dense_units", "32"}));
  EXPECT_EQ(s[1], (std::pair<std::string, std::string>{"train.patience", "4"}));
  PipelineConfig cfg;
  apply_settings(cfg, s);
  EXPECT_EQ(cfg.model.dense_units, 32);
  EXPECT_EQ(cfg.train.patience, 4);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  PipelineConfig cfg;
  EXPECT_THROW(apply_settings(cfg, parse_settings("model.depth = 3\n")), ParseError);
  EXPECT_THROW(apply_settings(cfg, parse_settings("train.max_epochs = many\n")), ParseError);
  EXPECT_THROW(parse_settings("just words\n"), ParseError);
  EXPECT_THROW(apply_preset(cfg, "huge"), ParseError);
}

TEST(Config, Presets) {
  PipelineConfig paper, desk;
  apply_preset(paper, "paper");
  apply_preset(desk, "desk");
  EXPECT_EQ(paper.model.dense_units, 300);
  EXPECT_EQ(paper.model.lstm_units, 300);
  EXPECT_EQ(paper.train.max_epochs, 300);
  EXPECT_EQ(desk.model.dense_units, 64);
  EXPECT_EQ(desk.model.lstm_units, 64);
  EXPECT_EQ(desk.train.max_epochs, 30);
  EXPECT_EQ(paper.train.batch_sequences, 10);
  EXPECT_EQ(paper.train.learning_rate, 1e-3);
}

TEST(Config, SettingsRoundTrip) {
  PipelineConfig cfg;
  apply_settings(cfg, parse_settings("model.seed = 9\ntrain.learning_rate = 0.003\ntrain.silence_labels = sil,pau\n"
                                     "train.session_norm = per_dimension\neval.median_mode = euclidean\n"
                                     "mfcc.preemphasis = 0.95\n"));
  PipelineConfig back;
  apply_settings(back, to_settings(cfg));
  EXPECT_EQ(to_settings(back), to_settings(cfg));
  EXPECT_EQ(back.silence_labels, (LabelSet{"pau", "sil"}));
  EXPECT_EQ(back.session_norm, SessionNorm::per_dimension);
  EXPECT_EQ(back.median_mode, eval::MedianMode::euclidean);
}

TEST(Experiment, Names) {
  for (auto kind : {ExperimentKind::baseline, ExperimentKind::w2v, ExperimentKind::onehot_auto,
                    ExperimentKind::onehot_expert}) {
    EXPECT_EQ(parse_experiment(experiment_name(kind)), kind);
  }
  EXPECT_EQ(experiment_name(ExperimentKind::onehot_expert), "onehot-expert");
  EXPECT_THROW(parse_experiment("astali"), Error);
  EXPECT_EQ(parse_split("val"), SplitName::validation);
  EXPECT_EQ(parse_split("test"), SplitName::test);
  EXPECT_THROW(parse_split("dev"), Error);
}

// ---- experiment data --------------------------------------------------------

class ExperimentFixture : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    synth::SynthSpec spec;
    spec.n_sequences = 12;
    spec.frames_per_sequence = 40;
    spec.n_sessions = 3;
    records_ = new std::vector<SequenceRecord>(synth::generate_corpus(spec));
  }
  static void TearDownTestSuite() {
    delete records_;
    records_ = nullptr;
  }

  static PipelineConfig tiny_config() {
    PipelineConfig cfg;
    cfg.model.dense_units = 8;
    cfg.model.lstm_units = 8;
    cfg.train.max_epochs = 3;
    cfg.train.patience = 2;
    cfg.train.learning_rate = 1e-2;
    return cfg;
  }

  static std::vector<SequenceRecord>* records_;
};

std::vector<SequenceRecord>* ExperimentFixture::records_ = nullptr;

TEST_F(ExperimentFixture, InputDimensionFollowsKind) {
  const PipelineConfig cfg = tiny_config();
  EXPECT_EQ(prepare_experiment(*records_, ExperimentKind::baseline, cfg).input_dim(), 39);
  EXPECT_EQ(prepare_experiment(*records_, ExperimentKind::w2v, cfg).input_dim(), 61);
  const auto expert = prepare_experiment(*records_, ExperimentKind::onehot_expert, cfg);
  ASSERT_TRUE(expert.inventory);
  EXPECT_EQ(expert.input_dim(), static_cast<Eigen::Index>(expert.inventory->size()));
  EXPECT_EQ(expert.inventory->index_of("sil"), -1);
  EXPECT_EQ(prepare_experiment(*records_, ExperimentKind::onehot_auto, cfg).inventory, expert.inventory);
}

TEST_F(ExperimentFixture, SplitCoversCorpus) {
  const auto data = prepare_experiment(*records_, ExperimentKind::baseline, tiny_config());
  EXPECT_EQ(data.split.train.size() + data.split.validation.size() + data.split.test.size(), records_->size());
  EXPECT_EQ(data.split.validation.size(), 1u);
  for (const auto& k : data.keys_of(SplitName::test)) EXPECT_LT(data.index_of(k), records_->size());
}

TEST_F(ExperimentFixture, W2vFeaturesAreSessionNormalised) {
  const auto data = prepare_experiment(*records_, ExperimentKind::w2v, tiny_config());
  std::map<std::string, std::pair<double, double>> sums;  // session -> (sum, count)
  for (std::size_t i = 0; i < data.keys.size(); ++i) {
    auto& [sum, count] = sums[data.keys[i].session_id];
    sum += data.features[i].data.sum();
    count += static_cast<double>(data.features[i].data.size());
  }
  EXPECT_EQ(sums.size(), 3u);
  for (const auto& [session, sc] : sums) EXPECT_NEAR(sc.first / sc.second, 0.0, 1e-10) << session;
}

TEST_F(ExperimentFixture, ExamplesExcludeSilenceFrames) {
  const auto data = prepare_experiment(*records_, ExperimentKind::onehot_expert, tiny_config());
  const Normalizers norm = fit_normalizers(data);
  EXPECT_FALSE(norm.features);
  const auto examples = make_examples(data, data.split.train, norm);
  ASSERT_EQ(examples.size(), data.split.train.size());
  for (std::size_t k = 0; k < examples.size(); ++k) {
    const std::size_t i = data.index_of(data.split.train[k]);
    const auto voiced = voiced_frames(data.contours[i].size(), 50.0, data.silence_align[i], data.config.silence_labels);
    EXPECT_EQ(examples[k].features.rows(), static_cast<Eigen::Index>(voiced.size()));
    EXPECT_EQ(examples[k].target.cols(), 800);
    // One-hot rows of voiced frames are never empty.
    for (Eigen::Index t = 0; t < examples[k].features.rows(); ++t) EXPECT_EQ(examples[k].features.row(t).sum(), 1.0);
  }
}

TEST_F(ExperimentFixture, BaselineNormalisesFeatures) {
  const auto data = prepare_experiment(*records_, ExperimentKind::baseline, tiny_config());
  const Normalizers norm = fit_normalizers(data);
  ASSERT_TRUE(norm.features);
  EXPECT_EQ(norm.features->mean.size(), 39);
}

TEST_F(ExperimentFixture, TrainedCheckpointRestoresExperiment) {
  const auto data = prepare_experiment(*records_, ExperimentKind::onehot_auto, tiny_config());
  const TrainedModel model = run_training(data);
  EXPECT_EQ(checkpoint_experiment(model.checkpoint), ExperimentKind::onehot_auto);
  EXPECT_EQ(to_settings(checkpoint_config(model.checkpoint)), to_settings(data.config));
  EXPECT_EQ(model.checkpoint.setting("result.best_epoch"), std::to_string(model.history.best_epoch));

  const auto restored = prepare_for_checkpoint(*records_, model.checkpoint);
  EXPECT_EQ(restored.inventory, data.inventory);
  EXPECT_EQ(restored.split.test, data.split.test);

  const auto a = evaluate_split(data, model.checkpoint, SplitName::test);
  const auto b = evaluate_split(restored, model.checkpoint, SplitName::test);
  EXPECT_EQ(eval::write_report_csv(a), eval::write_report_csv(b));
  EXPECT_FALSE(a.frame_rmse.empty());

  const auto pred = predict_sequence(restored, model.checkpoint, data.split.test.front());
  EXPECT_EQ(pred.predicted.size(), pred.truth.size());
  EXPECT_EQ(pred.predicted.size(), pred.source_frames.size());

  const std::string history = write_history_csv(model.history);
  EXPECT_EQ(history.substr(0, history.find('\n')), "epoch,train_loss,val_loss");
  EXPECT_EQ(static_cast<int>(std::count(history.begin(), history.end(), '\n')), model.history.stopped_epoch + 1);
}

TEST_F(ExperimentFixture, CheckpointFromAnotherExperimentIsRejected) {
  const auto data = prepare_experiment(*records_, ExperimentKind::baseline, tiny_config());
  net::Checkpoint ckpt = run_training(data).checkpoint;
  for (auto& [k, v] : ckpt.settings) {
    if (k == "experiment") v = "w2v";
  }
  EXPECT_THROW(prepare_for_checkpoint(*records_, ckpt), Error);
}

TEST_F(ExperimentFixture, ConstantMeanReport) {
  const auto data = prepare_experiment(*records_, ExperimentKind::onehot_expert, tiny_config());
  const auto report = evaluate_constant_mean(data, SplitName::test);
  EXPECT_GT(report.overall.rmse_mean_mm, 0.0);
  EXPECT_FALSE(report.frame_rmse.empty());
}

// ---- SVG --------------------------------------------------------------------

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

TEST(Svg, EightSolidAndEightDashedPolylines) {
  Rng rng(1);
  const FrameContours f = testing::random_frame(rng);
  const std::string svg = emit_contour_svg(f, f, "frame 0");
  EXPECT_EQ(count(svg, "<polyline"), 16u);
  EXPECT_EQ(count(svg, "class=\"truth "), 8u);
  EXPECT_EQ(count(svg, "class=\"pred "), 8u);
  EXPECT_EQ(count(svg, "stroke-dasharray"), 8u);
  EXPECT_NE(svg.find("viewBox=\"0 0 136 136\""), std::string::npos);
  EXPECT_NE(svg.find("RMSE 0.00 mm"), std::string::npos);
}

TEST(Svg, IdenticalFramesOverlayExactly) {
  Rng rng(2);
  const FrameContours f = testing::random_frame(rng);
  const std::string svg = emit_contour_svg(f, f, "t");
  for (Articulator a : kArticulators) {
    const std::string name(articulator_name(a));
    const auto points_of = [&](const std::string& cls) {
      const auto at = svg.find("class=\"" + cls + " " + name + "\"");
      const auto p = svg.find("points=\"", at);
      return svg.substr(p, svg.find('"', p + 8) - p);
    };
    EXPECT_EQ(points_of("truth"), points_of("pred")) << name;
  }
}

TEST(Svg, TitleReportsFrameRmse) {
  Rng rng(3);
  const FrameContours truth = testing::random_frame(rng, 10, 100);
  FrameContours pred = truth;
  for (auto& c : pred.contours) {
    for (auto& p : c) {
      p.x_px += 1.0;
      p.y_px -= 1.0;
    }
  }
  EXPECT_NE(emit_contour_svg(pred, truth, "x").find("RMSE 1.62 mm"), std::string::npos);
}

TEST(Svg, EscapesTitle) {
  Rng rng(4);
  const FrameContours f = testing::random_frame(rng);
  const std::string svg = emit_contour_svg(f, f, "a<b & c");
  EXPECT_EQ(svg.find("a<b"), std::string::npos);
  EXPECT_NE(svg.find("a&lt;b &amp; c"), std::string::npos);
}

}  // namespace
}  // namespace vtinv
