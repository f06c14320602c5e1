#pragma once

// Binary confusion matrix, per-class/macro/weighted metrics and the
// Model | Accuracy | Precision | Recall | F1 report table.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdio>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dzhate/corpus.hpp"
#include "dzhate/error.hpp"

namespace dzhate::metrics {

// Class 1 (hateful) is the positive class.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

inline ConfusionMatrix confusion(std::span<const Label> golds, std::span<const Label> preds) {
  if (golds.size() != preds.size()) throw Error("gold/prediction length mismatch");
  if (golds.empty()) throw Error("nothing to evaluate");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    const bool g = golds[i] == Label::hateful;
    const bool p = preds[i] == Label::hateful;
    if (g && p) ++cm.tp;
    else if (!g && p) ++cm.fp;
    else if (!g && !p) ++cm.tn;
    else ++cm.fn;
  }
  return cm;
}

// A ratio whose denominator was zero is reported as 0 with `undefined` set.
struct Ratio {
  double value = 0;
  bool undefined = false;
};

inline Ratio ratio(std::size_t num, std::size_t den) {
  if (den == 0) return {0.0, true};
  return {static_cast<double>(num) / static_cast<double>(den), false};
}

struct ClassMetrics {
  Ratio precision;
  Ratio recall;
  Ratio f1;
  std::size_t support = 0;
};

struct MetricsReport {
  double accuracy = 0;
  std::array<ClassMetrics, 2> per_class;  // [0] = non-hateful, [1] = hateful
  double macro_precision = 0;
  double macro_recall = 0;
  double macro_f1 = 0;
  double weighted_precision = 0;
  double weighted_recall = 0;
  double weighted_f1 = 0;
  ConfusionMatrix cm;
};

inline Ratio f1_of(const Ratio& p, const Ratio& r) {
  if (p.undefined || r.undefined || p.value + r.value == 0) return {0.0, true};
  return {2 * p.value * r.value / (p.value + r.value), false};
}

inline MetricsReport compute_metrics(const ConfusionMatrix& cm) {
  const std::size_t n = cm.total();
  if (n == 0) throw Error("empty confusion matrix");
  MetricsReport r;
  r.cm = cm;
  r.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(n);
  auto& c1 = r.per_class[1];
  c1.precision = ratio(cm.tp, cm.tp + cm.fp);
  c1.recall = ratio(cm.tp, cm.tp + cm.fn);
  c1.f1 = f1_of(c1.precision, c1.recall);
  c1.support = cm.tp + cm.fn;
  auto& c0 = r.per_class[0];
  c0.precision = ratio(cm.tn, cm.tn + cm.fn);
  c0.recall = ratio(cm.tn, cm.tn + cm.fp);
  c0.f1 = f1_of(c0.precision, c0.recall);
  c0.support = cm.tn + cm.fp;

  r.macro_precision = (c0.precision.value + c1.precision.value) / 2;
  r.macro_recall = (c0.recall.value + c1.recall.value) / 2;
  r.macro_f1 = (c0.f1.value + c1.f1.value) / 2;
  const double w0 = static_cast<double>(c0.support) / static_cast<double>(n);
  const double w1 = static_cast<double>(c1.support) / static_cast<double>(n);
  r.weighted_precision = w0 * c0.precision.value + w1 * c1.precision.value;
  r.weighted_recall = w0 * c0.recall.value + w1 * c1.recall.value;
  r.weighted_f1 = w0 * c0.f1.value + w1 * c1.f1.value;
  return r;
}

inline MetricsReport evaluate(std::span<const Label> golds, std::span<const Label> preds) {
  return compute_metrics(confusion(golds, preds));
}

// --- rendering ---------------------------------------------------------------

inline std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// "0.84(Class0); 0.72(Class1)"
inline std::string per_class_cell(double class0, double class1) {
  return fixed2(class0) + "(Class0); " + fixed2(class1) + "(Class1)";
}

struct NamedReport {
  std::string model_name;
  MetricsReport report;
};

inline std::string render_report(const std::vector<NamedReport>& reports, bool per_class = false) {
  if (reports.empty()) throw Error("no reports to render");
  std::vector<std::array<std::string, 5>> rows;
  rows.push_back({"Model Name", "Accuracy", "Precision", "Recall", "F1 Score"});
  for (const auto& [name, r] : reports) {
    if (name.empty()) throw Error("model name must not be empty");
    if (per_class) {
      rows.push_back({name, fixed2(r.accuracy),
                      per_class_cell(r.per_class[0].precision.value, r.per_class[1].precision.value),
                      per_class_cell(r.per_class[0].recall.value, r.per_class[1].recall.value),
                      per_class_cell(r.per_class[0].f1.value, r.per_class[1].f1.value)});
    } else {
      rows.push_back({name, fixed2(r.accuracy), fixed2(r.macro_precision), fixed2(r.macro_recall),
                      fixed2(r.macro_f1)});
    }
  }
  std::array<std::size_t, 5> width{};
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < 5; ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < 5; ++c) {
      if (c) out += " | ";
      out += rows[i][c];
      if (c + 1 < 5) out.append(width[c] - rows[i][c].size(), ' ');
    }
    out += '\n';
    if (i == 0) {
      for (std::size_t c = 0; c < 5; ++c) {
        if (c) out += "-+-";
        out.append(width[c], '-');
      }
      out += '\n';
    }
  }
  return out;
}

inline nlohmann::ordered_json ratio_json(const Ratio& r) {
  nlohmann::ordered_json j;
  j["value"] = r.value;
  j["undefined"] = r.undefined;
  return j;
}

inline nlohmann::ordered_json to_json(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["accuracy"] = r.accuracy;
  for (int c = 0; c < 2; ++c) {
    const auto& m = r.per_class[c];
    nlohmann::ordered_json cj;
    cj["precision"] = ratio_json(m.precision);
    cj["recall"] = ratio_json(m.recall);
    cj["f1"] = ratio_json(m.f1);
    cj["support"] = m.support;
    j["class" + std::to_string(c)] = cj;
  }
  j["macro"] = {{"precision", r.macro_precision}, {"recall", r.macro_recall}, {"f1", r.macro_f1}};
  j["weighted"] = {{"precision", r.weighted_precision}, {"recall", r.weighted_recall}, {"f1", r.weighted_f1}};
  j["confusion"] = {{"tp", r.cm.tp}, {"fp", r.cm.fp}, {"tn", r.cm.tn}, {"fn", r.cm.fn}};
  return j;
}

// Rebuilds a report from its JSON form; values are recomputed from the
// stored confusion matrix so the two renderings cannot drift.
inline MetricsReport from_json(const nlohmann::json& j) {
  const auto& c = j.at("confusion");
  ConfusionMatrix cm{c.at("tp").get<std::size_t>(), c.at("fp").get<std::size_t>(),
                     c.at("tn").get<std::size_t>(), c.at("fn").get<std::size_t>()};
  return compute_metrics(cm);
}

}  // namespace dzhate::metrics
