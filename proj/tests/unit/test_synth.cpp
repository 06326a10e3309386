#include <cmath>
#include <filesystem>
#include <map>
#include <string>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "vtinv/error.hpp"
#include "vtinv/eval.hpp"
#include "vtinv/synth.hpp"
#include "vtinv/text.hpp"

namespace vtinv::synth {
namespace {

namespace fs = std::filesystem;

SynthSpec small_spec(std::uint64_t seed = 1) {
  SynthSpec spec;
  spec.seed = seed;
  spec.n_sequences = 6;
  spec.frames_per_sequence = 60;
  spec.n_sessions = 2;
  return spec;
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) {
      files[fs::relative(entry.path(), root).string()] = text::read_file(entry.path().string());
    }
  }
  return files;
}

TEST(Synth, SameSeedGivesByteIdenticalTrees) {
  testing::TempDir a("synth_a"), b("synth_b");
  write_corpus(a.path(), generate_corpus(small_spec()));
  write_corpus(b.path(), generate_corpus(small_spec()));
  const auto ta = read_tree(a.path()), tb = read_tree(b.path());
  EXPECT_FALSE(ta.empty());
  EXPECT_EQ(ta, tb);

  testing::TempDir c("synth_c");
  write_corpus(c.path(), generate_corpus(small_spec(2)));
  EXPECT_NE(read_tree(c.path()), ta);
}

TEST(Synth, RecordsSatisfyCorpusInvariants) {
  const SynthSpec spec = small_spec();
  const auto records = generate_corpus(spec);
  ASSERT_EQ(records.size(), spec.n_sequences);
  for (const auto& r : records) {
    EXPECT_NO_THROW(validate_record(r));
    ASSERT_EQ(r.contours.size(), spec.frames_per_sequence);
    for (const auto& f : r.contours.frames) {
      EXPECT_TRUE(f.all_finite());
      EXPECT_TRUE(f.within(spec.image_size_px));
    }
    ASSERT_TRUE(r.w2v_logits);
    EXPECT_EQ(r.w2v_logits->cols(), 61);
    EXPECT_EQ(r.w2v_logits->rows(), static_cast<Eigen::Index>(spec.frames_per_sequence));
    EXPECT_EQ(r.align_expert.front().label, kSilenceLabel);
    EXPECT_EQ(r.align_expert.back().label, kSilenceLabel);
  }
}

TEST(Synth, AutoAlignmentOnlyMovesBoundaries) {
  for (const auto& r : generate_corpus(small_spec(3))) {
    ASSERT_EQ(r.align_auto.size(), r.align_expert.size());
    for (std::size_t k = 0; k < r.align_auto.size(); ++k) {
      EXPECT_EQ(r.align_auto[k].label, r.align_expert[k].label);
      EXPECT_LE(std::abs(r.align_auto[k].end_s - r.align_expert[k].end_s), 0.020 + 1e-12);
      EXPECT_LT(r.align_auto[k].start_s, r.align_auto[k].end_s);
    }
    EXPECT_EQ(r.align_auto.front().start_s, r.align_expert.front().start_s);
    EXPECT_EQ(r.align_auto.back().end_s, r.align_expert.back().end_s);
  }
}

TEST(Synth, AudioLevelsAreBounded) {
  const SynthSpec spec = small_spec(4);
  for (const auto& r : generate_corpus(spec)) {
    double sq = 0.0, peak = 0.0;
    for (double x : r.audio.samples) {
      sq += x * x;
      peak = std::max(peak, std::abs(x));
      EXPECT_EQ(x * 32768.0, std::round(x * 32768.0));
    }
    const double rms = std::sqrt(sq / static_cast<double>(r.audio.samples.size()));
    EXPECT_LE(peak, 1.0);
    // Noise floor below, two tones of amplitude 0.3 above.
    EXPECT_GE(rms, std::pow(10.0, spec.audio_noise_db / 20.0) * 0.5);
    EXPECT_LE(rms, std::sqrt(2.0 * 0.3 * 0.3 / 2.0 + std::pow(10.0, spec.audio_noise_db / 10.0)) * 1.05);
  }
}

TEST(Synth, NoCoarticulationGivesPrototypes) {
  SynthSpec spec = small_spec(5);
  spec.coarticulation_tau_s = 0.0;
  const SynthModel model = build_model(spec);
  for (const auto& r : generate_corpus(spec)) {
    for (std::size_t t = 0; t < r.contours.size(); ++t) {
      const auto seg = segment_at(r.align_expert, frame_midpoint_s(t, spec.frame_rate_hz));
      ASSERT_TRUE(seg);
      const auto it = std::find(model.labels.begin(), model.labels.end(), r.align_expert[*seg].label);
      ASSERT_NE(it, model.labels.end());
      EXPECT_EQ(r.contours.frames[t], model.prototypes[static_cast<std::size_t>(it - model.labels.begin())]);
    }
  }
}

TEST(Coarticulate, VanishingTauIsIdentity) {
  Rng rng(6);
  const auto targets = testing::random_sequence(rng, 10);
  EXPECT_EQ(coarticulate(targets.frames, 50.0, 1e-6).frames, targets.frames);
  EXPECT_EQ(coarticulate(targets.frames, 50.0, 0.0).frames, targets.frames);
}

TEST(Coarticulate, FirstOrderSmoothing) {
  const std::vector<FrameContours> targets = {testing::constant_frame(0, 0), testing::constant_frame(10, 10),
                                              testing::constant_frame(10, 10)};
  const double alpha = 1.0 - std::exp(-1.0 / (50.0 * 0.04));
  const auto out = coarticulate(targets, 50.0, 0.04);
  EXPECT_EQ(out.frames[0], targets[0]);
  EXPECT_NEAR(out.frames[1].contours[3][7].x_px, 10.0 * alpha, 1e-12);
  EXPECT_NEAR(out.frames[2].contours[3][7].x_px, 10.0 * alpha + alpha * (10.0 - 10.0 * alpha), 1e-12);
}

TEST(Synth, SpecValidation) {
  SynthSpec spec = small_spec();
  spec.frames_per_sequence = 19;
  EXPECT_THROW(generate_corpus(spec), ContractError);
  spec = small_spec();
  spec.inventory_size = 2;
  EXPECT_THROW(generate_corpus(spec), ContractError);
}

TEST(Synth, ModelLabelsStartWithSilence) {
  const SynthModel model = build_model(small_spec());
  ASSERT_EQ(model.labels.size(), 12u);
  EXPECT_EQ(model.labels[0], kSilenceLabel);
  EXPECT_EQ(model.prototypes[0], base_shape());
  for (const auto& p : model.prototypes) EXPECT_TRUE(p.within(136.0));
}

// ---- constant-mean predictor -------------------------------------------------

TEST(ConstantMean, IdenticalTrainingFramesGiveZeroError) {
  Rng rng(7);
  const FrameContours f = testing::random_frame(rng);
  ContourSequence seq;
  seq.frames = {f, f, f};
  const ConstantMeanPredictor pred(std::span(&seq, 1));
  const auto out = pred.predict(3);
  for (const auto& e : eval::sequence_errors(out, seq)) {
    for (const auto& x : e) EXPECT_EQ(x.rmse_mm, 0.0);
  }
}

TEST(ConstantMean, MatchesDirectDispersion) {
  Rng rng(8);
  std::vector<ContourSequence> train = {testing::random_sequence(rng, 20), testing::random_sequence(rng, 15)};
  const ContourSequence test = testing::random_sequence(rng, 10);
  const ConstantMeanPredictor pred(train);

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(800);
  for (const auto& s : train) {
    for (const auto& f : s.frames) mean += f.flatten() / 35.0;
  }
  EXPECT_LT((pred.mean_frame().flatten() - mean).cwiseAbs().maxCoeff(), 1e-10);

  const auto errs = eval::sequence_errors(pred.predict(10), test);
  for (std::size_t t = 0; t < 10; ++t) {
    const Eigen::VectorXd r = (test.frames[t].flatten() - mean) * 1.62;
    for (std::size_t a = 0; a < 8; ++a) {
      const double oracle = std::sqrt(r.segment(static_cast<Eigen::Index>(a) * 100, 100).squaredNorm() / 100.0);
      EXPECT_NEAR(errs[t][a].rmse_mm, oracle, 1e-9);
    }
  }
}

TEST(ConstantMean, IgnoresFeatures) {
  Rng rng(9);
  const auto train = testing::random_sequence(rng, 5);
  const ConstantMeanPredictor pred(std::span(&train, 1));
  const Eigen::MatrixXd a = Eigen::MatrixXd::Random(7, 39), b = Eigen::MatrixXd::Random(7, 39);
  EXPECT_EQ(pred.predict(a), pred.predict(b));
  EXPECT_EQ(pred.predict(a).size(), 7u);
}

}  // namespace
}  // namespace vtinv::synth
