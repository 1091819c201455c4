#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "staghunt/errors.hpp"
#include "staghunt/metrics.hpp"

using namespace staghunt;

namespace {

constexpr TargetKind S = TargetKind::Stag;
constexpr TargetKind H = TargetKind::Hare;

std::vector<int> ints(const std::vector<TargetKind>& v) {
  std::vector<int> out;
  for (TargetKind t : v) out.push_back(t == S ? 0 : 1);
  return out;
}

}  // namespace

TEST(Metrics, ConfusionIndexing) {
  const std::vector<TargetKind> pred{S, S, H, H, H};
  const std::vector<TargetKind> act{S, H, H, S, H};
  const ConfusionMatrix2 cm = confusion(pred, act);
  EXPECT_EQ(cm.at(S, S), 1);
  EXPECT_EQ(cm.at(S, H), 1);
  EXPECT_EQ(cm.at(H, S), 1);
  EXPECT_EQ(cm.at(H, H), 2);
  EXPECT_EQ(cm.total(), 5);
  EXPECT_EQ(cm.predicted(S), 2);
  EXPECT_EQ(cm.actual(S), 2);
}

TEST(Metrics, ConfusionRejectsBadInput) {
  const std::vector<TargetKind> a{S}, b{S, H}, none;
  EXPECT_THROW(confusion(a, b), UsageError);
  EXPECT_THROW(confusion(none, none), UsageError);
}

TEST(Metrics, HandComputedPrf) {
  // 3 Stag / 1 Hare actual; predictions get 2 Stag right, call one Stag a Hare.
  const std::vector<TargetKind> pred{S, S, H, H};
  const std::vector<TargetKind> act{S, S, S, H};
  const PrfReport r = prf(confusion(pred, act));
  EXPECT_DOUBLE_EQ(r.stag.precision, 1.0);
  EXPECT_DOUBLE_EQ(r.stag.recall, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.stag.f1, 0.8);
  EXPECT_DOUBLE_EQ(r.hare.precision, 0.5);
  EXPECT_DOUBLE_EQ(r.hare.recall, 1.0);
  EXPECT_DOUBLE_EQ(r.hare.f1, 2.0 / 3.0);
  EXPECT_EQ(r.stag.support, 3);
  EXPECT_NEAR(r.macro.f1, (0.8 + 2.0 / 3.0) / 2, 1e-15);
  EXPECT_NEAR(r.weighted.f1, (0.8 * 3 + 2.0 / 3.0) / 4, 1e-15);
}

TEST(Metrics, ZeroDivisionReportsZero) {
  const std::vector<TargetKind> pred{H, H, H};
  const std::vector<TargetKind> act{H, H, H};
  const PrfReport r = prf(confusion(pred, act));
  EXPECT_EQ(r.stag.precision, 0.0);
  EXPECT_EQ(r.stag.recall, 0.0);
  EXPECT_EQ(r.stag.f1, 0.0);
  EXPECT_EQ(r.hare.f1, 1.0);
}

TEST(Metrics, KappaEdgeCases) {
  const std::vector<TargetKind> a{S, H, S, H, H};
  EXPECT_DOUBLE_EQ(cohens_kappa(a, a), 1.0);
  const std::vector<TargetKind> same{H, H, H};
  EXPECT_DOUBLE_EQ(cohens_kappa(same, same), 1.0);
  const std::vector<TargetKind> flip{H, S, H, S};
  const std::vector<TargetKind> orig{S, H, S, H};
  EXPECT_DOUBLE_EQ(cohens_kappa(flip, orig), -1.0);
  const std::vector<TargetKind> all_s{S, S, S};
  EXPECT_DOUBLE_EQ(cohens_kappa(all_s, same), 0.0);
}

TEST(Metrics, AgreesWithOracleOnRandomInstances) {
  std::mt19937 gen(7);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(gen() % 50);
    std::vector<TargetKind> p, a;
    for (int i = 0; i < n; ++i) {
      p.push_back(gen() % 2 ? S : H);
      a.push_back(gen() % 2 ? S : H);
    }
    const PrfReport r = prf(confusion(p, a));
    const oracle::Prf o = oracle::prf(ints(p), ints(a));
    EXPECT_NEAR(r.stag.f1, o.f1[0], 1e-12);
    EXPECT_NEAR(r.hare.precision, o.precision[1], 1e-12);
    EXPECT_NEAR(r.macro.recall, o.macro_r, 1e-12);
    EXPECT_NEAR(r.weighted.f1, o.weighted_f1, 1e-12);
    EXPECT_NEAR(cohens_kappa(p, a), oracle::kappa(ints(p), ints(a)), 1e-12);
  }
}

TEST(Metrics, ReportTableShape) {
  const std::vector<TargetKind> p{S, H, H, S};
  const std::vector<TargetKind> a{S, H, S, S};
  const MetricsReport r = make_metrics_report("m", p, a, 1);
  EXPECT_EQ(r.n_trials, 5);
  EXPECT_EQ(r.n_invalid, 1);
  const std::string t = format_metrics_table(r);
  EXPECT_LT(t.find("Hare"), t.find("Stag"));
  EXPECT_NE(t.find("Macro avg"), std::string::npos);
  EXPECT_NE(t.find("Weighted avg"), std::string::npos);
  EXPECT_NE(t.find("Cohen's Kappa: 0.500"), std::string::npos);
  const auto j = to_json(r);
  EXPECT_EQ(j.at("confusion").at("predicted_stag").at("actual_hare"), 0);
  EXPECT_EQ(j.at("confusion").at("predicted_hare").at("actual_stag"), 1);
}

TEST(RiskIndex, Values) {
  using O = std::optional<TargetKind>;
  std::vector<O> all_hare(15, O{H}), all_stag(15, O{S});
  EXPECT_DOUBLE_EQ(risk_index(all_hare).phi, 1.0);
  EXPECT_DOUBLE_EQ(risk_index(all_stag).phi, -1.0);
  std::vector<O> split(8, O{H});
  split.insert(split.end(), 7, O{S});
  const RiskReport r = risk_index(split);
  EXPECT_DOUBLE_EQ(r.phi, 1.0 / 15.0);
  EXPECT_EQ(r.classification, RiskClass::Neutral);
}

TEST(RiskIndex, InvalidHandling) {
  using O = std::optional<TargetKind>;
  const std::vector<O> d{O{H}, O{H}, O{S}, std::nullopt};
  const RiskReport excluded = risk_index(d);
  EXPECT_EQ(excluded.n_total, 3);
  EXPECT_EQ(excluded.n_invalid, 1);
  EXPECT_DOUBLE_EQ(excluded.phi, 1.0 / 3.0);
  const RiskReport counted = risk_index(d, true);
  EXPECT_EQ(counted.n_total, 4);
  EXPECT_DOUBLE_EQ(counted.phi, 0.25);
  const std::vector<O> only_invalid{std::nullopt};
  EXPECT_THROW(risk_index(only_invalid), UsageError);
}

TEST(RiskIndex, BandBoundariesAreExact) {
  EXPECT_EQ(classify_risk(6, 4, 10), RiskClass::RiskAverse);   // exactly 0.2
  EXPECT_EQ(classify_risk(4, 6, 10), RiskClass::RiskSeeking);  // exactly -0.2
  EXPECT_EQ(classify_risk(9, 6, 15), RiskClass::RiskAverse);   // 0.2 via 3/15
  EXPECT_EQ(classify_risk(8, 7, 15), RiskClass::Neutral);
  EXPECT_EQ(classify_risk(55, 45, 100), RiskClass::Neutral);   // 0.1
  EXPECT_EQ(classify_risk(41, 59, 100), RiskClass::Neutral);   // -0.18
  EXPECT_EQ(classify_risk(39, 61, 100), RiskClass::RiskSeeking);
}
