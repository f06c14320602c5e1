#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <random>

#include "dzhate/svm.hpp"
#include "dzhate/workflow.hpp"
#include "support.hpp"

using namespace dzhate;
using namespace dzhate::svm;

namespace {

struct Data {
  std::vector<SparseVector> X;
  std::vector<Label> y;
};

// Two Gaussian blobs in `dim` dense dimensions centred at +/- mu.
Data blobs(std::size_t n, std::size_t dim, double mu, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  Data d;
  for (std::size_t i = 0; i < n; ++i) {
    const bool pos = i % 2 == 0;
    std::vector<std::pair<std::uint32_t, double>> e;
    for (std::uint32_t k = 0; k < dim; ++k) e.emplace_back(k, (pos ? mu : -mu) + noise(rng));
    d.X.push_back(vectorize::make_sparse(e));
    d.y.push_back(pos ? Label::hateful : Label::non_hateful);
  }
  return d;
}

double accuracy(const LinearModel& m, const Data& d) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < d.X.size(); ++i) ok += m.predict(d.X[i]).label == d.y[i];
  return static_cast<double>(ok) / static_cast<double>(d.X.size());
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST(Svm, GradientMatchesFiniteDifference) {
  const Data d = blobs(40, 5, 0.5, 7);
  const auto cw = class_weights(d.y, ClassWeight::balanced);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 0.3);
  const double lambda = 0.05;
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> w(5);
    for (double& v : w) v = g(rng);
    const double b = g(rng);
    // Only smooth points: no margin within the finite-difference step of 1.
    bool smooth = true;
    for (std::size_t i = 0; i < d.X.size(); ++i) {
      if (std::abs(sign_of(d.y[i]) * (dot(w, d.X[i]) + b) - 1.0) < 1e-3) smooth = false;
    }
    if (!smooth) continue;
    const auto grad = objective_subgradient(w, b, d.X, d.y, lambda, cw);
    const double h = 1e-6;
    for (std::size_t k = 0; k <= w.size(); ++k) {
      auto wp = w, wm = w;
      double bp = b, bm = b;
      if (k < w.size()) {
        wp[k] += h;
        wm[k] -= h;
      } else {
        bp += h;
        bm -= h;
      }
      const double fd =
          (objective(wp, bp, d.X, d.y, lambda, cw) - objective(wm, bm, d.X, d.y, lambda, cw)) / (2 * h);
      const double an = k < w.size() ? grad.w[k] : grad.b;
      EXPECT_LE(std::abs(fd - an), 1e-4 * std::max(1.0, std::abs(an))) << "trial " << trial << " coord " << k;
    }
    ++checked;
  }
  EXPECT_GE(checked, 10);
}

TEST(Svm, SeparableFixtureTrainsToPerfectAccuracy) {
  const Corpus c = load_corpus(testing_support::fixture("separable_60.csv"));
  const auto bundle = workflow::train_svm(c, {}, {});
  std::size_t ok = 0;
  for (const auto& d : c) ok += bundle.classify(*d.clean_text).label == *d.label;
  EXPECT_EQ(ok, c.size());
}

TEST(Svm, SeededDeterminismIsBitExact) {
  const Data d = blobs(200, 10, 0.4, 3);
  const auto a = train_svm(d.X, d.y);
  const auto b = train_svm(d.X, d.y);
  EXPECT_TRUE(bit_equal(a.weights(), b.weights()));
  EXPECT_EQ(std::bit_cast<std::uint64_t>(a.bias()), std::bit_cast<std::uint64_t>(b.bias()));
  Hyperparams other;
  other.seed = 43;
  EXPECT_FALSE(bit_equal(train_svm(d.X, d.y, other).weights(), a.weights()));
}

TEST(Svm, GaussianBlobsWellSeparated) {
  const Data train = blobs(400, 8, 1.0, 1);
  const Data test = blobs(400, 8, 1.0, 2);
  Hyperparams hp;
  hp.lambda = 1e-3;
  const auto m = train_svm(train.X, train.y, hp);
  EXPECT_GE(accuracy(m, test), 0.97);
}

TEST(Svm, TrainingReducesObjective) {
  const Data d = blobs(300, 6, 0.5, 9);
  Hyperparams hp;
  hp.lambda = 1e-2;
  hp.epochs = 20;
  const auto m = train_svm(d.X, d.y, hp);
  const auto cw = class_weights(d.y, hp.class_weight);
  const std::vector<double> zero(6, 0.0);
  const double start = objective(zero, 0.0, d.X, d.y, hp.lambda, cw);
  ASSERT_EQ(m.loss_history().size(), 20u);
  EXPECT_LT(m.loss_history().back(), start);
  EXPECT_NEAR(m.loss_history().back(), objective(m.weights(), m.bias(), d.X, d.y, hp.lambda, cw), 1e-9);
}

TEST(Svm, BalancedWeights) {
  const std::vector<Label> y{Label::hateful, Label::non_hateful, Label::non_hateful, Label::non_hateful};
  const auto cw = class_weights(y, ClassWeight::balanced);
  EXPECT_DOUBLE_EQ(cw[0], 4.0 / 6.0);
  EXPECT_DOUBLE_EQ(cw[1], 2.0);
  EXPECT_EQ(class_weights(y, ClassWeight::none), (std::array<double, 2>{1.0, 1.0}));
}

TEST(Svm, SaveLoadRoundTrip) {
  const Data d = blobs(50, 4, 1.0, 5);
  const auto m = train_svm(d.X, d.y);
  testing_support::ScratchDir dir("svm");
  m.save(dir / "m.json", {{"extra", 1}});
  const auto back = LinearModel::load(dir / "m.json");
  EXPECT_TRUE(bit_equal(back.weights(), m.weights()));
  EXPECT_EQ(back.bias(), m.bias());
  EXPECT_EQ(back.hyperparams().seed, m.hyperparams().seed);
  for (const auto& x : d.X) EXPECT_EQ(back.predict(x).margin, m.predict(x).margin);
}

TEST(Svm, Errors) {
  const Data d = blobs(10, 2, 1.0, 5);
  std::vector<Label> one_class(d.y.size(), Label::hateful);
  EXPECT_THROW(train_svm(d.X, one_class), Error);
  EXPECT_THROW(train_svm(std::span(d.X).first(1), std::span(d.y).first(1)), Error);
  EXPECT_THROW(train_svm(d.X, std::span(d.y).first(5)), Error);
  Hyperparams bad;
  bad.lambda = 0;
  EXPECT_THROW(train_svm(d.X, d.y, bad), Error);
  bad = {};
  bad.epochs = 0;
  EXPECT_THROW(train_svm(d.X, d.y, bad), Error);
  auto X = d.X;
  X[0].values[0] = std::nan("");
  EXPECT_THROW(train_svm(X, d.y), Error);
  EXPECT_THROW(train_svm(d.X, d.y, {}, 1), Error);
  const auto m = train_svm(d.X, d.y);
  EXPECT_THROW(m.margin(vectorize::make_sparse({{9, 1.0}})), Error);
}

TEST(Svm, IncompatibleVectorizerRejected) {
  const Corpus c = load_corpus(testing_support::fixture("separable_60.csv"));
  const auto bundle = workflow::train_svm(c, {}, {});
  EXPECT_NO_THROW(workflow::check_pair(bundle.vectorizer, bundle.model));
  const auto other = vectorize::fit({"ا ب"});
  EXPECT_THROW(workflow::check_pair(other, bundle.model), Error);
}
