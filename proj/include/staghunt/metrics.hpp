#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "staghunt/environment.hpp"

namespace staghunt {

/// 2x2 tabulation over {Stag, Hare}, indexed [predicted][actual].
struct ConfusionMatrix2 {
  std::array<std::array<long, 2>, 2> counts{};

  static constexpr std::size_t index(TargetKind t) noexcept { return t == TargetKind::Stag ? 0 : 1; }

  long& at(TargetKind predicted, TargetKind actual) { return counts[index(predicted)][index(actual)]; }
  long at(TargetKind predicted, TargetKind actual) const { return counts[index(predicted)][index(actual)]; }

  long total() const noexcept;
  long predicted(TargetKind t) const noexcept;  // row marginal
  long actual(TargetKind t) const noexcept;     // column marginal

  friend bool operator==(const ConfusionMatrix2&, const ConfusionMatrix2&) = default;
};

/// Throws UsageError on length mismatch or empty input.
ConfusionMatrix2 confusion(std::span<const TargetKind> preds, std::span<const TargetKind> labels);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long support = 0;  // actual-class count
};

struct PrfReport {
  ClassMetrics stag;
  ClassMetrics hare;
  ClassMetrics macro;
  ClassMetrics weighted;  // averaged with actual-class support

  const ClassMetrics& of(TargetKind t) const noexcept { return t == TargetKind::Stag ? stag : hare; }
};

/// Per-class, macro and support-weighted precision/recall/F1. Any 0/0
/// ratio is reported as 0. Throws UsageError on an empty matrix.
PrfReport prf(const ConfusionMatrix2& cm);

/// Chance-corrected agreement. When chance agreement is exactly 1 the
/// result is 1 for perfect observed agreement and 0 otherwise.
double cohens_kappa(const ConfusionMatrix2& cm);
double cohens_kappa(std::span<const TargetKind> preds, std::span<const TargetKind> labels);

struct MetricsReport {
  std::string model;
  ConfusionMatrix2 cm;
  PrfReport prf;
  double kappa = 0.0;
  long n_trials = 0;   // scenarios attempted
  long n_invalid = 0;  // excluded: no usable reply
};

/// Builds the report from valid (prediction, label) pairs.
MetricsReport make_metrics_report(std::string model, std::span<const TargetKind> preds,
                                  std::span<const TargetKind> labels, long n_invalid);

/// Table with Hare/Stag rows, macro and weighted averages, then kappa.
std::string format_metrics_table(const MetricsReport& report);
nlohmann::json to_json(const MetricsReport& report);

enum class RiskClass { RiskSeeking, Neutral, RiskAverse };

std::string_view to_string(RiskClass c) noexcept;

inline constexpr double kRiskThreshold = 0.2;

struct RiskReport {
  long n_hare = 0;
  long n_stag = 0;
  long n_total = 0;
  long n_invalid = 0;
  double phi = 0.0;
  RiskClass classification = RiskClass::Neutral;
};

/// phi = (hare - stag) / total. Bands: phi <= -0.2 seeking, phi >= 0.2
/// averse, neutral in between. Invalid (nullopt) decisions are left out of
/// the total unless `count_invalid_in_total`. Throws UsageError when the
/// total is zero.
RiskReport risk_index(std::span<const std::optional<TargetKind>> decisions,
                      bool count_invalid_in_total = false);

/// Classification of a hare/stag/total triple, evaluated in exact integers.
RiskClass classify_risk(long n_hare, long n_stag, long n_total);

nlohmann::json to_json(const RiskReport& report);

}  // namespace staghunt
