#pragma once

// Linear hinge-loss classifier trained by Pegasos-style stochastic
// subgradient descent.
//
// Objective, with y in {-1,+1} and per-class weights c_y:
//
//   J(w, b) = lambda/2 * (|w|^2 + b^2) + 1/n * sum_i c_yi * max(0, 1 - y_i (w.x_i + b))
//
// The bias is regularized like any other weight (equivalently, every input
// carries a constant feature 1). Step size at update t is 1/(lambda t).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dzhate/corpus.hpp"
#include "dzhate/error.hpp"
#include "dzhate/io.hpp"
#include "dzhate/random.hpp"
#include "dzhate/vectorize.hpp"

namespace dzhate::svm {

using vectorize::SparseVector;

enum class ClassWeight { none, balanced };

struct Hyperparams {
  double lambda = 1e-4;
  int epochs = 30;
  std::uint64_t seed = 42;
  ClassWeight class_weight = ClassWeight::balanced;
};

struct Prediction {
  Label label = Label::non_hateful;
  double margin = 0;
};

class LinearModel {
 public:
  LinearModel() = default;
  LinearModel(std::vector<double> weights, double bias, Hyperparams hp = {}, std::string vectorizer_id = {})
      : weights_(std::move(weights)), bias_(bias), hyperparams_(hp), vectorizer_id_(std::move(vectorizer_id)) {}

  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }
  const Hyperparams& hyperparams() const { return hyperparams_; }
  const std::string& vectorizer_id() const { return vectorizer_id_; }
  void set_vectorizer_id(std::string id) { vectorizer_id_ = std::move(id); }
  std::size_t dimension() const { return weights_.size(); }
  // Objective value after each epoch.
  const std::vector<double>& loss_history() const { return loss_history_; }

  double margin(const SparseVector& x) const {
    double s = bias_;
    for (std::size_t k = 0; k < x.indices.size(); ++k) {
      if (x.indices[k] >= weights_.size()) throw Error("feature index outside model dimension");
      s += weights_[x.indices[k]] * x.values[k];
    }
    return s;
  }

  Prediction predict(const SparseVector& x) const {
    const double m = margin(x);
    return {m > 0 ? Label::hateful : Label::non_hateful, m};
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["format"] = "dzhate.linear_svm";
    j["version"] = 1;
    j["vectorizer_id"] = vectorizer_id_;
    j["lambda"] = hyperparams_.lambda;
    j["epochs"] = hyperparams_.epochs;
    j["seed"] = hyperparams_.seed;
    j["class_weight"] = hyperparams_.class_weight == ClassWeight::balanced ? "balanced" : "none";
    j["bias"] = bias_;
    j["weights"] = weights_;
    j["loss_history"] = loss_history_;
    return j;
  }

  static LinearModel from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "dzhate.linear_svm") throw Error("not a linear SVM model file");
    if (j.value("version", 0) != 1) throw Error("unsupported SVM model version");
    Hyperparams hp;
    hp.lambda = j.at("lambda").get<double>();
    hp.epochs = j.at("epochs").get<int>();
    hp.seed = j.at("seed").get<std::uint64_t>();
    hp.class_weight = j.at("class_weight") == "balanced" ? ClassWeight::balanced : ClassWeight::none;
    LinearModel m(j.at("weights").get<std::vector<double>>(), j.at("bias").get<double>(), hp,
                  j.at("vectorizer_id").get<std::string>());
    if (j.contains("loss_history")) m.loss_history_ = j["loss_history"].get<std::vector<double>>();
    for (double w : m.weights_) {
      if (!std::isfinite(w)) throw Error("non-finite weight in model file");
    }
    return m;
  }

  void save(const std::filesystem::path& path, const nlohmann::ordered_json& extra = {}) const {
    auto j = to_json();
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    io::write_file(path, j.dump(1) + "\n");
  }

  static LinearModel load(const std::filesystem::path& path) {
    try {
      return from_json(nlohmann::json::parse(io::read_file(path)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(path.string() + ": " + e.what());
    }
  }

 private:
  friend LinearModel train_svm(std::span<const SparseVector>, std::span<const Label>, const Hyperparams&,
                               std::size_t);

  std::vector<double> weights_;
  double bias_ = 0;
  Hyperparams hyperparams_;
  std::string vectorizer_id_;
  std::vector<double> loss_history_;
};

inline double sign_of(Label l) { return l == Label::hateful ? 1.0 : -1.0; }

// c_y = n / (2 n_y) for balanced weighting, 1 otherwise.
inline std::array<double, 2> class_weights(std::span<const Label> y, ClassWeight mode) {
  if (mode == ClassWeight::none) return {1.0, 1.0};
  std::array<double, 2> count{0, 0};
  for (Label l : y) count[to_int(l)] += 1;
  const double n = static_cast<double>(y.size());
  return {n / (2.0 * count[0]), n / (2.0 * count[1])};
}

inline double dot(std::span<const double> w, const SparseVector& x) {
  double s = 0;
  for (std::size_t k = 0; k < x.indices.size(); ++k) s += w[x.indices[k]] * x.values[k];
  return s;
}

inline double objective(std::span<const double> w, double b, std::span<const SparseVector> X,
                        std::span<const Label> y, double lambda, std::array<double, 2> cw = {1.0, 1.0}) {
  double reg = b * b;
  for (double v : w) reg += v * v;
  double hinge = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double m = sign_of(y[i]) * (dot(w, X[i]) + b);
    hinge += cw[to_int(y[i])] * std::max(0.0, 1.0 - m);
  }
  return 0.5 * lambda * reg + hinge / static_cast<double>(X.size());
}

struct Gradient {
  std::vector<double> w;
  double b = 0;
};

// Subgradient of `objective`; at hinge kinks the zero branch is taken.
inline Gradient objective_subgradient(std::span<const double> w, double b, std::span<const SparseVector> X,
                                      std::span<const Label> y, double lambda,
                                      std::array<double, 2> cw = {1.0, 1.0}) {
  Gradient g;
  g.w.assign(w.begin(), w.end());
  for (double& v : g.w) v *= lambda;
  g.b = lambda * b;
  const double inv_n = 1.0 / static_cast<double>(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double ys = sign_of(y[i]);
    if (ys * (dot(w, X[i]) + b) < 1.0) {
      const double c = cw[to_int(y[i])] * ys * inv_n;
      for (std::size_t k = 0; k < X[i].indices.size(); ++k) g.w[X[i].indices[k]] -= c * X[i].values[k];
      g.b -= c;
    }
  }
  return g;
}

// `dimension` 0 means: one past the largest feature index seen.
inline LinearModel train_svm(std::span<const SparseVector> X, std::span<const Label> y, const Hyperparams& hp = {},
                             std::size_t dimension = 0) {
  if (X.size() != y.size()) throw Error("feature/label count mismatch");
  if (X.size() < 2) throw Error("need at least two training examples");
  if (hp.lambda <= 0 || !std::isfinite(hp.lambda)) throw Error("lambda must be positive");
  if (hp.epochs < 1) throw Error("epochs must be >= 1");
  bool has[2] = {false, false};
  for (Label l : y) has[to_int(l)] = true;
  if (!has[0] || !has[1]) throw Error("training labels contain a single class");
  std::size_t dim = dimension;
  for (const auto& x : X) {
    x.validate();
    for (double v : x.values) {
      if (!std::isfinite(v)) throw Error("non-finite feature value");
    }
    if (!x.indices.empty()) dim = std::max<std::size_t>(dim, x.indices.back() + 1);
  }
  if (dimension != 0 && dim > dimension) throw Error("feature index outside declared dimension");

  const auto cw = class_weights(y, hp.class_weight);
  // w = scale * v keeps the shrink step O(1).
  std::vector<double> v(dim, 0.0);
  double scale = 1.0;
  double b = 0.0;
  std::vector<std::size_t> order(X.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(hp.seed);
  std::uint64_t t = 0;
  LinearModel model;

  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    seeded_shuffle(order, rng);
    for (std::size_t i : order) {
      ++t;
      const double eta = 1.0 / (hp.lambda * static_cast<double>(t));
      const double ys = sign_of(y[i]);
      const double m = ys * (scale * dot(v, X[i]) + b);
      const double shrink = 1.0 - eta * hp.lambda;
      if (shrink <= 0.0) {
        std::fill(v.begin(), v.end(), 0.0);
        scale = 1.0;
        b = 0.0;
      } else {
        scale *= shrink;
        b *= shrink;
      }
      if (m < 1.0) {
        const double step = eta * cw[to_int(y[i])] * ys;
        for (std::size_t k = 0; k < X[i].indices.size(); ++k) v[X[i].indices[k]] += step * X[i].values[k] / scale;
        b += step;
      }
      if (scale < 1e-100) {
        for (double& e : v) e *= scale;
        scale = 1.0;
      }
    }
    std::vector<double> w(v);
    for (double& e : w) e *= scale;
    model.loss_history_.push_back(objective(w, b, X, y, hp.lambda, cw));
  }
  for (double& e : v) e *= scale;
  model.weights_ = std::move(v);
  model.bias_ = b;
  model.hyperparams_ = hp;
  return model;
}

inline Prediction predict_svm(const LinearModel& model, const SparseVector& x) { return model.predict(x); }

}  // namespace dzhate::svm
