#include "staghunt/metrics.hpp"

#include <cstdio>
#include <sstream>

#include "staghunt/errors.hpp"

namespace staghunt {

long ConfusionMatrix2::total() const noexcept {
  return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
}

long ConfusionMatrix2::predicted(TargetKind t) const noexcept {
  const auto& row = counts[index(t)];
  return row[0] + row[1];
}

long ConfusionMatrix2::actual(TargetKind t) const noexcept {
  const auto c = index(t);
  return counts[0][c] + counts[1][c];
}

ConfusionMatrix2 confusion(std::span<const TargetKind> preds, std::span<const TargetKind> labels) {
  if (preds.size() != labels.size()) {
    throw UsageError("confusion(): " + std::to_string(preds.size()) + " predictions vs " +
                     std::to_string(labels.size()) + " labels");
  }
  if (preds.empty()) throw UsageError("confusion(): empty input");
  ConfusionMatrix2 cm;
  for (std::size_t i = 0; i < preds.size(); ++i) ++cm.at(preds[i], labels[i]);
  return cm;
}

namespace {

double ratio(long num, long den) { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }

ClassMetrics class_metrics(const ConfusionMatrix2& cm, TargetKind c) {
  const long tp = cm.at(c, c);
  ClassMetrics m;
  m.precision = ratio(tp, cm.predicted(c));
  m.recall = ratio(tp, cm.actual(c));
  m.f1 = (m.precision + m.recall) == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  m.support = cm.actual(c);
  return m;
}

}  // namespace

PrfReport prf(const ConfusionMatrix2& cm) {
  const long n = cm.total();
  if (n <= 0) throw UsageError("prf(): empty confusion matrix");
  PrfReport r;
  r.stag = class_metrics(cm, TargetKind::Stag);
  r.hare = class_metrics(cm, TargetKind::Hare);

  r.macro.precision = (r.stag.precision + r.hare.precision) / 2.0;
  r.macro.recall = (r.stag.recall + r.hare.recall) / 2.0;
  r.macro.f1 = (r.stag.f1 + r.hare.f1) / 2.0;
  r.macro.support = n;

  const double ws = static_cast<double>(r.stag.support) / static_cast<double>(n);
  const double wh = static_cast<double>(r.hare.support) / static_cast<double>(n);
  r.weighted.precision = ws * r.stag.precision + wh * r.hare.precision;
  r.weighted.recall = ws * r.stag.recall + wh * r.hare.recall;
  r.weighted.f1 = ws * r.stag.f1 + wh * r.hare.f1;
  r.weighted.support = n;
  return r;
}

double cohens_kappa(const ConfusionMatrix2& cm) {
  const long n = cm.total();
  if (n <= 0) throw UsageError("cohens_kappa(): empty input");
  const double dn = static_cast<double>(n);
  const double p_o = static_cast<double>(cm.at(TargetKind::Stag, TargetKind::Stag) +
                                         cm.at(TargetKind::Hare, TargetKind::Hare)) / dn;
  double p_e = 0.0;
  for (TargetKind t : {TargetKind::Stag, TargetKind::Hare}) {
    p_e += (static_cast<double>(cm.predicted(t)) / dn) * (static_cast<double>(cm.actual(t)) / dn);
  }
  if (p_e == 1.0) return p_o == 1.0 ? 1.0 : 0.0;
  return (p_o - p_e) / (1.0 - p_e);
}

double cohens_kappa(std::span<const TargetKind> preds, std::span<const TargetKind> labels) {
  return cohens_kappa(confusion(preds, labels));
}

MetricsReport make_metrics_report(std::string model, std::span<const TargetKind> preds,
                                  std::span<const TargetKind> labels, long n_invalid) {
  MetricsReport r;
  r.model = std::move(model);
  r.cm = confusion(preds, labels);
  r.prf = prf(r.cm);
  r.kappa = cohens_kappa(r.cm);
  r.n_invalid = n_invalid;
  r.n_trials = static_cast<long>(preds.size()) + n_invalid;
  return r;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string row(const std::string& label, const ClassMetrics& m) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-14s %9s %9s %9s %8ld\n", label.c_str(), fixed(m.precision, 2).c_str(),
                fixed(m.recall, 2).c_str(), fixed(m.f1, 2).c_str(), m.support);
  return buf;
}

nlohmann::json to_json(const ClassMetrics& m) {
  return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"support", m.support}};
}

}  // namespace

std::string format_metrics_table(const MetricsReport& r) {
  std::ostringstream out;
  out << "Model: " << r.model << "\n";
  out << "Class          Precision    Recall  F1-Score  Support\n";
  out << row("Hare", r.prf.hare) << row("Stag", r.prf.stag);
  out << "------------------------------------------------------\n";
  out << row("Macro avg", r.prf.macro) << row("Weighted avg", r.prf.weighted);
  out << "\nConfusion matrix (rows predicted, columns actual):\n";
  out << "               Stag     Hare\n";
  char buf[96];
  std::snprintf(buf, sizeof buf, "  Stag   %8ld %8ld\n  Hare   %8ld %8ld\n",
                r.cm.at(TargetKind::Stag, TargetKind::Stag), r.cm.at(TargetKind::Stag, TargetKind::Hare),
                r.cm.at(TargetKind::Hare, TargetKind::Stag), r.cm.at(TargetKind::Hare, TargetKind::Hare));
  out << buf;
  out << "\nCohen's Kappa: " << fixed(r.kappa, 3) << "\n";
  out << "Trials: " << r.n_trials << " (invalid: " << r.n_invalid << ")\n";
  out << "0/0 ratios are reported as 0.\n";
  return out.str();
}

nlohmann::json to_json(const MetricsReport& r) {
  return {
      {"model", r.model},
      {"classes", {{"Hare", to_json(r.prf.hare)}, {"Stag", to_json(r.prf.stag)}}},
      {"macro_avg", to_json(r.prf.macro)},
      {"weighted_avg", to_json(r.prf.weighted)},
      {"kappa", r.kappa},
      {"confusion",
       {{"predicted_stag", {{"actual_stag", r.cm.at(TargetKind::Stag, TargetKind::Stag)},
                            {"actual_hare", r.cm.at(TargetKind::Stag, TargetKind::Hare)}}},
        {"predicted_hare", {{"actual_stag", r.cm.at(TargetKind::Hare, TargetKind::Stag)},
                            {"actual_hare", r.cm.at(TargetKind::Hare, TargetKind::Hare)}}}}},
      {"n_trials", r.n_trials},
      {"n_invalid", r.n_invalid},
  };
}

std::string_view to_string(RiskClass c) noexcept {
  switch (c) {
    case RiskClass::RiskSeeking: return "risk-seeking";
    case RiskClass::RiskAverse: return "risk-averse";
    case RiskClass::Neutral: break;
  }
  return "neutral";
}

RiskClass classify_risk(long n_hare, long n_stag, long n_total) {
  // phi >= 0.2  <=>  5 * (hare - stag) >= total, exactly.
  const long diff5 = 5 * (n_hare - n_stag);
  if (diff5 >= n_total) return RiskClass::RiskAverse;
  if (diff5 <= -n_total) return RiskClass::RiskSeeking;
  return RiskClass::Neutral;
}

RiskReport risk_index(std::span<const std::optional<TargetKind>> decisions, bool count_invalid_in_total) {
  RiskReport r;
  for (const auto& d : decisions) {
    if (!d) {
      ++r.n_invalid;
    } else if (*d == TargetKind::Hare) {
      ++r.n_hare;
    } else {
      ++r.n_stag;
    }
  }
  r.n_total = r.n_hare + r.n_stag + (count_invalid_in_total ? r.n_invalid : 0);
  if (r.n_total == 0) throw UsageError("risk_index(): no decisions to score");
  r.phi = static_cast<double>(r.n_hare - r.n_stag) / static_cast<double>(r.n_total);
  r.classification = classify_risk(r.n_hare, r.n_stag, r.n_total);
  return r;
}

nlohmann::json to_json(const RiskReport& r) {
  return {{"n_hare", r.n_hare}, {"n_stag", r.n_stag},         {"n_total", r.n_total},
          {"n_invalid", r.n_invalid}, {"phi", r.phi}, {"class", to_string(r.classification)}};
}

}  // namespace staghunt
