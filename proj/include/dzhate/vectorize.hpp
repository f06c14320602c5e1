#pragma once

// TF-IDF over whitespace tokens with smoothed idf and L2 normalization.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "dzhate/error.hpp"
#include "dzhate/hash.hpp"
#include "dzhate/io.hpp"
#include "dzhate/unicode.hpp"

namespace dzhate::vectorize {

struct SparseVector {
  std::vector<std::uint32_t> indices;  // strictly increasing
  std::vector<double> values;

  std::size_t nnz() const { return indices.size(); }
  bool empty() const { return indices.empty(); }

  double norm() const {
    double s = 0;
    for (double v : values) s += v * v;
    return std::sqrt(s);
  }

  void validate() const {
    if (indices.size() != values.size()) throw Error("sparse vector length mismatch");
    for (std::size_t i = 1; i < indices.size(); ++i) {
      if (indices[i] <= indices[i - 1]) throw Error("sparse vector indices not increasing");
    }
  }

  bool operator==(const SparseVector&) const = default;
};

// Builds a sparse vector from unsorted (index, value) pairs; duplicates add.
inline SparseVector make_sparse(std::vector<std::pair<std::uint32_t, double>> entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVector v;
  for (const auto& [i, x] : entries) {
    if (!v.indices.empty() && v.indices.back() == i) {
      v.values.back() += x;
    } else {
      v.indices.push_back(i);
      v.values.push_back(x);
    }
  }
  return v;
}

struct TfIdfOptions {
  std::size_t min_df = 1;
  int max_ngram = 1;  // 2 adds space-joined bigrams
};

inline constexpr std::string_view kIdfFormula = "ln((1+N)/(1+df))+1";

inline std::vector<std::string> tokenize(std::string_view doc, int max_ngram = 1) {
  std::vector<std::string> unigrams = unicode::split_whitespace(doc);
  if (max_ngram < 2) return unigrams;
  std::vector<std::string> out = unigrams;
  for (std::size_t i = 0; i + 1 < unigrams.size(); ++i) out.push_back(unigrams[i] + " " + unigrams[i + 1]);
  return out;
}

class TfIdfModel {
 public:
  TfIdfModel() = default;

  static TfIdfModel fit(const std::vector<std::string>& docs, const TfIdfOptions& options = {}) {
    if (docs.empty()) throw Error("cannot fit on an empty document list");
    std::map<std::string, std::size_t> df;
    bool any_token = false;
    for (const auto& d : docs) {
      auto toks = tokenize(d, options.max_ngram);
      std::sort(toks.begin(), toks.end());
      toks.erase(std::unique(toks.begin(), toks.end()), toks.end());
      any_token = any_token || !toks.empty();
      for (auto& t : toks) ++df[t];
    }
    if (!any_token) throw Error("all documents are empty");

    TfIdfModel m;
    m.options_ = options;
    m.n_docs_ = docs.size();
    const double n = static_cast<double>(docs.size());
    for (const auto& [token, count] : df) {  // std::map iterates in lexicographic order
      if (count < options.min_df) continue;
      m.index_.emplace(token, static_cast<std::uint32_t>(m.terms_.size()));
      m.terms_.push_back(token);
      m.idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
    }
    if (m.terms_.empty()) throw Error("no token reaches min_df");
    return m;
  }

  SparseVector transform(std::string_view doc) const {
    std::vector<std::pair<std::uint32_t, double>> raw;
    for (const auto& t : tokenize(doc, options_.max_ngram)) {
      if (auto it = index_.find(t); it != index_.end()) raw.emplace_back(it->second, idf_[it->second]);
    }
    SparseVector v = make_sparse(std::move(raw));
    const double n = v.norm();
    if (n > 0) {
      for (double& x : v.values) x /= n;
    }
    return v;
  }

  std::size_t vocabulary_size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<double>& idf() const { return idf_; }
  std::size_t n_docs_fitted() const { return n_docs_; }
  const TfIdfOptions& options() const { return options_; }

  std::optional<std::uint32_t> index_of(std::string_view token) const {
    if (auto it = index_.find(std::string(token)); it != index_.end()) return it->second;
    return std::nullopt;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["format"] = "dzhate.tfidf";
    j["version"] = 1;
    j["idf_formula"] = kIdfFormula;
    j["n_docs"] = n_docs_;
    j["min_df"] = options_.min_df;
    j["max_ngram"] = options_.max_ngram;
    j["vocabulary"] = terms_;
    j["idf"] = idf_;
    return j;
  }

  // Fingerprint of the fitted state; a linear model records the id of the
  // vectorizer it was trained against.
  std::string id() const { return hex_digest(to_json().dump()); }

  static TfIdfModel from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "dzhate.tfidf") throw Error("not a TF-IDF model file");
    if (j.value("version", 0) != 1) throw Error("unsupported TF-IDF model version");
    if (j.value("idf_formula", "") != kIdfFormula) throw Error("unsupported idf formula");
    TfIdfModel m;
    m.n_docs_ = j.at("n_docs").get<std::size_t>();
    m.options_.min_df = j.at("min_df").get<std::size_t>();
    m.options_.max_ngram = j.at("max_ngram").get<int>();
    m.terms_ = j.at("vocabulary").get<std::vector<std::string>>();
    m.idf_ = j.at("idf").get<std::vector<double>>();
    if (m.terms_.size() != m.idf_.size()) throw Error("vocabulary/idf length mismatch");
    for (std::size_t i = 0; i < m.terms_.size(); ++i) {
      if (!m.index_.emplace(m.terms_[i], static_cast<std::uint32_t>(i)).second) {
        throw Error("duplicate vocabulary entry");
      }
    }
    return m;
  }

  void save(const std::filesystem::path& path) const { io::write_file(path, to_json().dump(1) + "\n"); }

  static TfIdfModel load(const std::filesystem::path& path) {
    try {
      return from_json(nlohmann::json::parse(io::read_file(path)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(path.string() + ": " + e.what());
    }
  }

 private:
  TfIdfOptions options_;
  std::size_t n_docs_ = 0;
  std::vector<std::string> terms_;
  std::vector<double> idf_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

inline TfIdfModel fit(const std::vector<std::string>& docs, const TfIdfOptions& options = {}) {
  return TfIdfModel::fit(docs, options);
}

inline SparseVector transform(const TfIdfModel& model, std::string_view doc) { return model.transform(doc); }

}  // namespace dzhate::vectorize
