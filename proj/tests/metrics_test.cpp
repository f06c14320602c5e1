#include <gtest/gtest.h>

#include <random>

#include "dzhate/metrics.hpp"

using namespace dzhate;
using namespace dzhate::metrics;

namespace {

std::vector<Label> labels(std::initializer_list<int> v) {
  std::vector<Label> out;
  for (int x : v) out.push_back(label_from_int(x));
  return out;
}

std::vector<Label> swapped(const std::vector<Label>& v) {
  std::vector<Label> out;
  for (Label l : v) out.push_back(l == Label::hateful ? Label::non_hateful : Label::hateful);
  return out;
}

}  // namespace

TEST(Metrics, HandComputedExample) {
  const auto gold = labels({1, 1, 0, 0});
  const auto pred = labels({1, 0, 0, 0});
  const auto cm = confusion(gold, pred);
  EXPECT_EQ(cm, (ConfusionMatrix{1, 0, 2, 1}));
  const auto r = compute_metrics(cm);
  EXPECT_NEAR(r.accuracy, 0.75, 1e-12);
  EXPECT_NEAR(r.per_class[1].precision.value, 1.0, 1e-12);
  EXPECT_NEAR(r.per_class[1].recall.value, 0.5, 1e-12);
  EXPECT_NEAR(r.per_class[1].f1.value, 0.6667, 1e-4);
  EXPECT_NEAR(r.per_class[0].precision.value, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.per_class[0].recall.value, 1.0, 1e-12);
  EXPECT_NEAR(r.per_class[0].f1.value, 0.8, 1e-12);
  EXPECT_NEAR(r.macro_f1, 0.7333, 1e-4);
  EXPECT_NEAR(r.weighted_f1, 0.7333, 1e-4);
  EXPECT_EQ(r.per_class[0].support, 2u);
}

TEST(Metrics, LabelSwapSymmetry) {
  std::mt19937_64 rng(1000);
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_int_distribution<std::size_t> len(1, 60);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Label> g, p;
    for (std::size_t n = len(rng); n > 0; --n) {
      g.push_back(label_from_int(bit(rng)));
      p.push_back(label_from_int(bit(rng)));
    }
    const auto a = evaluate(g, p);
    const auto b = evaluate(swapped(g), swapped(p));
    EXPECT_DOUBLE_EQ(a.accuracy, b.accuracy);
    for (int c = 0; c < 2; ++c) {
      EXPECT_DOUBLE_EQ(a.per_class[c].precision.value, b.per_class[1 - c].precision.value);
      EXPECT_DOUBLE_EQ(a.per_class[c].recall.value, b.per_class[1 - c].recall.value);
      EXPECT_DOUBLE_EQ(a.per_class[c].f1.value, b.per_class[1 - c].f1.value);
      EXPECT_EQ(a.per_class[c].f1.undefined, b.per_class[1 - c].f1.undefined);
    }
    EXPECT_NEAR(a.macro_f1, b.macro_f1, 1e-15);
    EXPECT_NEAR(a.weighted_f1, b.weighted_f1, 1e-15);
  }
}

TEST(Metrics, ZeroDenominatorsFlagged) {
  const auto r = evaluate(labels({0, 0}), labels({0, 0}));
  EXPECT_DOUBLE_EQ(r.accuracy, 1.0);
  EXPECT_TRUE(r.per_class[1].precision.undefined);
  EXPECT_TRUE(r.per_class[1].recall.undefined);
  EXPECT_TRUE(r.per_class[1].f1.undefined);
  EXPECT_EQ(r.per_class[1].f1.value, 0.0);
  EXPECT_FALSE(r.per_class[0].f1.undefined);
  EXPECT_DOUBLE_EQ(r.macro_f1, 0.5);
}

TEST(Metrics, InputErrors) {
  EXPECT_THROW(evaluate(labels({1}), labels({1, 0})), Error);
  EXPECT_THROW(evaluate(labels({}), labels({})), Error);
}

TEST(Report, MacroTable) {
  const auto r = evaluate(labels({1, 1, 0, 0}), labels({1, 0, 0, 0}));
  const std::string t = render_report({{"LinearSVC", r}, {"gzip+KNN", r}});
  EXPECT_EQ(t,
            "Model Name | Accuracy | Precision | Recall | F1 Score\n"
            "-----------+----------+-----------+--------+---------\n"
            "LinearSVC  | 0.75     | 0.83      | 0.75   | 0.73\n"
            "gzip+KNN   | 0.75     | 0.83      | 0.75   | 0.73\n");
}

TEST(Report, PerClassCells) {
  EXPECT_EQ(per_class_cell(0.84, 0.72), "0.84(Class0); 0.72(Class1)");
  const auto r = evaluate(labels({1, 1, 0, 0}), labels({1, 0, 0, 0}));
  const std::string t = render_report({{"m", r}}, true);
  EXPECT_NE(t.find("0.67(Class0); 1.00(Class1)"), std::string::npos);
  EXPECT_THROW(render_report({}), Error);
  EXPECT_THROW(render_report({{"", r}}), Error);
}

TEST(Report, JsonRoundTrip) {
  const auto r = evaluate(labels({1, 1, 0, 0, 1}), labels({1, 0, 0, 1, 1}));
  const auto j = to_json(r);
  EXPECT_DOUBLE_EQ(j["accuracy"].get<double>(), r.accuracy);
  EXPECT_FALSE(j["class1"]["f1"]["undefined"].get<bool>());
  const auto back = from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.cm, r.cm);
  EXPECT_DOUBLE_EQ(back.macro_f1, r.macro_f1);
}
