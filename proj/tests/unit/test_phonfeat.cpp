#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "vtinv/error.hpp"
#include "vtinv/phonfeat.hpp"
#include "vtinv/rng.hpp"

namespace vtinv::phonfeat {
namespace {

Eigen::MatrixXd random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = scale * rng.normal();
  return m;
}

// ---- softmax ----------------------------------------------------------------

TEST(Softmax, ZeroRowIsUniform) {
  const Eigen::MatrixXd p = softmax_rows(Eigen::MatrixXd::Zero(2, 61));
  for (Eigen::Index i = 0; i < p.size(); ++i) EXPECT_NEAR(p(i), 1.0 / 61.0, 1e-16);
}

TEST(Softmax, LargeLogitDoesNotOverflow) {
  Eigen::MatrixXd logits = Eigen::MatrixXd::Zero(1, 61);
  logits(0, 17) = 1000.0;
  const Eigen::MatrixXd p = softmax_rows(logits);
  EXPECT_TRUE(p.allFinite());
  EXPECT_NEAR(p(0, 17), 1.0, 1e-15);
  for (Eigen::Index j = 0; j < 61; ++j) {
    if (j != 17) EXPECT_LT(p(0, j), 1e-300);
  }
}

TEST(Softmax, MatchesNaiveOracle) {
  Rng rng(1);
  const Eigen::MatrixXd logits = random_matrix(rng, 20, 61, 3.0);
  const Eigen::MatrixXd p = softmax_rows(logits);
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    double z = 0.0;
    for (Eigen::Index j = 0; j < 61; ++j) z += std::exp(logits(r, j));
    for (Eigen::Index j = 0; j < 61; ++j) EXPECT_NEAR(p(r, j), std::exp(logits(r, j)) / z, 1e-14);
  }
}

TEST(Softmax, RowsSumToOneAndShiftInvariant) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd logits = random_matrix(rng, 10, 61, 10.0);
    const Eigen::MatrixXd p = softmax_rows(logits);
    for (Eigen::Index r = 0; r < p.rows(); ++r) EXPECT_NEAR(p.row(r).sum(), 1.0, 1e-12);
    const Eigen::MatrixXd shifted = softmax_rows(logits.array() + rng.uniform(-50, 50));
    EXPECT_LT((shifted - p).cwiseAbs().maxCoeff(), 1e-12);
  }
}

// ---- session normalisation --------------------------------------------------

TEST(SessionNormalize, UniformMatrixAtItsMeanIsZero) {
  const Eigen::MatrixXd uniform = Eigen::MatrixXd::Constant(5, 61, 1.0 / 61.0);
  const auto f = session_normalize(uniform, SessionStats{1.0 / 61.0, 0.3, false});
  EXPECT_TRUE((f.data.array() == 0.0).all());
  EXPECT_EQ(f.kind, FeatureKind::posterior61);
}

TEST(SessionNormalize, UnitStatsAreIdentity) {
  Rng rng(3);
  const Eigen::MatrixXd m = random_matrix(rng, 4, 61);
  EXPECT_EQ(session_normalize(m, SessionStats{0.0, 1.0, false}).data, m);
}

TEST(SessionNormalize, PooledSelfNormalisation) {
  Rng rng(4);
  std::vector<Eigen::MatrixXd> session = {softmax_rows(random_matrix(rng, 30, 61, 4.0)),
                                          softmax_rows(random_matrix(rng, 45, 61, 4.0))};
  const SessionStats stats = session_stats(session);
  EXPECT_FALSE(stats.floored);
  double sum = 0.0, sq = 0.0, n = 0.0;
  std::vector<Eigen::MatrixXd> normalized;
  for (const auto& m : session) normalized.push_back(session_normalize(m, stats).data);
  for (const auto& m : normalized) {
    sum += m.sum();
    n += static_cast<double>(m.size());
  }
  const double mean = sum / n;
  for (const auto& m : normalized) sq += (m.array() - mean).square().sum();
  EXPECT_NEAR(mean, 0.0, 1e-10);
  EXPECT_NEAR(std::sqrt(sq / n), 1.0, 1e-10);
}

TEST(SessionNormalize, ConstantSessionFloorsStd) {
  std::vector<Eigen::MatrixXd> session = {Eigen::MatrixXd::Constant(3, 61, 0.5)};
  const SessionStats stats = session_stats(session);
  EXPECT_TRUE(stats.floored);
  EXPECT_EQ(stats.std, kStdFloor);
}

TEST(SessionNormalize, PerDimensionVariant) {
  Rng rng(5);
  std::vector<Eigen::MatrixXd> session = {random_matrix(rng, 50, 61), random_matrix(rng, 20, 61)};
  const FeatureNormStats stats = session_stats_per_dimension(session);
  ASSERT_EQ(stats.mean.size(), 61);
  Eigen::MatrixXd all(70, 61);
  all << session[0], session[1];
  const Eigen::MatrixXd z = session_normalize(all, stats).data;
  EXPECT_LT(z.colwise().mean().cwiseAbs().maxCoeff(), 1e-10);
}

// ---- inventory --------------------------------------------------------------

TEST(Inventory, DropsSilenceAndSorts) {
  const std::vector<Alignment> aligns = {{{0, 0.1, "t"}, {0.1, 0.2, "a"}, {0.2, 0.3, "sil"}}};
  const PhoneInventory inv = build_inventory(aligns, {"sil"});
  EXPECT_EQ(inv.labels(), (std::vector<std::string>{"a", "t"}));
  EXPECT_EQ(inv.index_of("t"), 1);
  EXPECT_EQ(inv.index_of("sil"), -1);
}

TEST(Inventory, DuplicatesCollapse) {
  const std::vector<Alignment> aligns = {{{0, 0.1, "a"}, {0.1, 0.2, "a"}, {0.2, 0.3, "t"}}};
  EXPECT_EQ(build_inventory(aligns, {}).labels(), (std::vector<std::string>{"a", "t"}));
}

TEST(Inventory, ClosureAndBurstStayDistinct) {
  const std::vector<Alignment> aligns = {{{0, 0.05, "t_cl"}, {0.05, 0.1, "t"}, {0.1, 0.2, "a"}}};
  const auto inv = build_inventory(aligns, default_silence_labels());
  EXPECT_EQ(inv.size(), 3u);
  EXPECT_GE(inv.index_of("t_cl"), 0);
  EXPECT_GE(inv.index_of("t"), 0);
}

TEST(Inventory, OrderIndependentAndIdempotent) {
  Rng rng(6);
  const std::vector<std::string> pool = {"a", "e", "i", "k", "sil", "t", "t_cl", "sp"};
  std::vector<Alignment> aligns;
  for (int f = 0; f < 6; ++f) {
    Alignment a;
    for (int s = 0; s < 8; ++s) a.push_back({0.1 * s, 0.1 * (s + 1), pool[rng.below(pool.size())]});
    aligns.push_back(a);
  }
  const auto inv = build_inventory(aligns, default_silence_labels());
  auto reversed = aligns;
  std::reverse(reversed.begin(), reversed.end());
  EXPECT_EQ(build_inventory(reversed, default_silence_labels()), inv);
  EXPECT_EQ(parse_inventory(write_inventory(inv)), inv);
}

TEST(Inventory, RejectsUnsortedLabels) {
  EXPECT_THROW(PhoneInventory({"t", "a"}), ContractError);
  EXPECT_THROW(PhoneInventory({"a", "a"}), ContractError);
}

// ---- one-hot ----------------------------------------------------------------

TEST(OneHot, SingleSegment) {
  const PhoneInventory inv({"a", "t"});
  const auto f = onehot_encode({{0.0, 0.1, "a"}}, inv, 50.0, 5);
  ASSERT_EQ(f.frames(), 5);
  ASSERT_EQ(f.dim(), 2);
  for (Eigen::Index t = 0; t < 5; ++t) {
    EXPECT_EQ(f.data(t, 0), 1.0);
    EXPECT_EQ(f.data(t, 1), 0.0);
  }
}

TEST(OneHot, BoundaryBelongsToLaterSegment) {
  const PhoneInventory inv({"a", "t"});
  const Alignment align = {{0.0, 0.05, "a"}, {0.05, 0.1, "t"}};
  const auto f = onehot_encode(align, inv, 50.0, 5);
  // Oracle: enumerate midpoints (t + 0.5) / 50 against half-open intervals.
  for (Eigen::Index t = 0; t < 5; ++t) {
    const double mid = (static_cast<double>(t) + 0.5) / 50.0;
    const Eigen::Index expected = mid < 0.05 ? 0 : 1;
    EXPECT_EQ(f.data(t, expected), 1.0) << "frame " << t;
    EXPECT_EQ(f.data.row(t).sum(), 1.0);
  }
  EXPECT_EQ(f.data(2, 1), 1.0);  // midpoint 0.05 exactly
}

TEST(OneHot, UncoveredAndSilenceRowsAreZero) {
  const PhoneInventory inv({"a"});
  const auto f = onehot_encode({{0.0, 0.04, "sil"}, {0.04, 0.06, "a"}}, inv, 50.0, 5);
  EXPECT_EQ(f.data.row(0).sum(), 0.0);
  EXPECT_EQ(f.data.row(1).sum(), 0.0);
  EXPECT_EQ(f.data.row(2).sum(), 1.0);
  EXPECT_EQ(f.data.row(3).sum(), 0.0);
  EXPECT_EQ(f.data.row(4).sum(), 0.0);
}

TEST(OneHot, UnknownLabelIsContractError) {
  EXPECT_THROW(onehot_encode({{0.0, 0.1, "zz"}}, PhoneInventory({"a"}), 50.0, 5), ContractError);
}

TEST(OneHot, EncodeDecodeReproducesLabels) {
  Rng rng(7);
  const PhoneInventory inv({"a", "e", "k", "t"});
  const std::vector<std::string> pool = {"a", "e", "k", "t", "sil"};
  for (int trial = 0; trial < 20; ++trial) {
    Alignment align;
    double t = 0.0;
    while (t < 1.0) {
      const double end = t + 0.001 * static_cast<double>(rng.between(15, 120));
      align.push_back({t, end, pool[rng.below(pool.size())]});
      t = end;
    }
    const Eigen::Index n = 60;
    const auto f = onehot_encode(align, inv, 50.0, n);
    const auto decoded = onehot_decode(f, inv);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double sum = f.data.row(k).sum();
      EXPECT_TRUE(sum == 0.0 || sum == 1.0);
      const auto seg = segment_at(align, frame_midpoint_s(static_cast<std::size_t>(k), 50.0));
      const bool voiced = seg && align[*seg].label != "sil";
      EXPECT_EQ(sum, voiced ? 1.0 : 0.0);
      EXPECT_EQ(decoded[static_cast<std::size_t>(k)], voiced ? align[*seg].label : "");
    }
  }
}

}  // namespace
}  // namespace vtinv::phonfeat
