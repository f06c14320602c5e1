#pragma once

// Run configuration shared by every subcommand.
//
// A config file is a JSON object using the keys below; anything omitted
// keeps its default. Unknown keys are rejected so typos do not silently
// fall back to defaults.
//
//   {
//     "paths":    {"corpus", "lexicon", "stopwords": [..], "emoticons", "rules",
//                  "vectorizer", "model"},
//     "pipeline": {"min_token_len": 2, "steps": [..], "translit": false},
//     "autolabel":{"mode": "token" | "substring"},
//     "split":    {"ratios": [0.8, 0.1, 0.1], "seed": 42},
//     "svm":      {"lambda": 1e-4, "epochs": 30, "seed": 42, "class_weight": "balanced",
//                  "min_df": 1, "max_ngram": 1},
//     "knn":      {"k": 3, "compressor": "deflate", "level": 6, "threads": 1},
//     "out_dir":  "out"
//   }
//
// Relative resource paths in a config file resolve against the file's
// directory; built-in defaults resolve against the data directory.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dzhate/autolabel.hpp"
#include "dzhate/corpus.hpp"
#include "dzhate/error.hpp"
#include "dzhate/hash.hpp"
#include "dzhate/io.hpp"
#include "dzhate/ncd.hpp"
#include "dzhate/svm.hpp"
#include "dzhate/textprep.hpp"
#include "dzhate/translit.hpp"
#include "dzhate/vectorize.hpp"

#ifndef DZHATE_DATA_DIR
#define DZHATE_DATA_DIR "data"
#endif

namespace dzhate {

inline constexpr const char* kConfigEnv = "DZHATE_CONFIG";
inline constexpr const char* kDataDirEnv = "DZHATE_DATA_DIR";

inline std::filesystem::path data_dir() {
  if (const char* env = std::getenv(kDataDirEnv); env && *env) return env;
  return DZHATE_DATA_DIR;
}

struct RunConfig {
  struct Paths {
    std::string corpus;
    std::string lexicon;
    std::vector<std::string> stopwords;
    std::string emoticons;
    std::string rules;
    std::string vectorizer;
    std::string model;
  } paths;

  struct PipelineOptions {
    int min_token_len = 2;
    std::vector<std::string> steps;  // empty = default order
    bool translit = false;           // route Latin/mixed documents through translit first
  } pipeline;

  std::string match_mode = "token";
  SplitRatios ratios;
  std::uint64_t split_seed = 42;
  svm::Hyperparams svm;
  vectorize::TfIdfOptions tfidf;
  std::size_t k = 3;
  std::string compressor = "deflate";
  int level = ncd::kDefaultLevel;
  unsigned threads = 1;
  std::string out_dir = "out";

  static RunConfig defaults() {
    RunConfig c;
    const auto d = data_dir();
    c.paths.lexicon = (d / "seed_lexicon.txt").string();
    c.paths.stopwords = {(d / "stopwords_ar.txt").string(), (d / "stopwords_dz.txt").string()};
    c.paths.emoticons = (d / "emoticons.tsv").string();
    c.paths.rules = (d / "arabizi_rules.tsv").string();
    return c;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["paths"] = {{"corpus", paths.corpus},     {"lexicon", paths.lexicon}, {"stopwords", paths.stopwords},
                  {"emoticons", paths.emoticons}, {"rules", paths.rules},     {"vectorizer", paths.vectorizer},
                  {"model", paths.model}};
    j["pipeline"] = pipeline_json();
    j["autolabel"] = {{"mode", match_mode}};
    j["split"] = {{"ratios", {ratios.train, ratios.validation, ratios.test}}, {"seed", split_seed}};
    j["svm"] = {{"lambda", svm.lambda},
                {"epochs", svm.epochs},
                {"seed", svm.seed},
                {"class_weight", svm.class_weight == svm::ClassWeight::balanced ? "balanced" : "none"},
                {"min_df", tfidf.min_df},
                {"max_ngram", tfidf.max_ngram}};
    j["knn"] = {{"k", k}, {"compressor", compressor}, {"level", level}, {"threads", threads}};
    j["out_dir"] = out_dir;
    return j;
  }

  // Applies the keys present in `j` on top of the current values.
  void merge(const nlohmann::json& j, const std::filesystem::path& base = {}) {
    if (!j.is_object()) throw Error("config must be a JSON object");
    static const std::set<std::string> top{"paths", "pipeline", "autolabel", "split", "svm", "knn", "out_dir"};
    check_keys(j, top, "");
    auto resolve = [&](const std::string& p) {
      if (p.empty() || base.empty() || std::filesystem::path(p).is_absolute()) return p;
      return (base / p).lexically_normal().string();
    };
    try {
      if (j.contains("paths")) {
        const auto& p = j["paths"];
        check_keys(p, {"corpus", "lexicon", "stopwords", "emoticons", "rules", "vectorizer", "model"}, "paths.");
        auto str = [&](const char* key, std::string& out) {
          if (p.contains(key)) out = resolve(p[key].get<std::string>());
        };
        str("corpus", paths.corpus);
        str("lexicon", paths.lexicon);
        str("emoticons", paths.emoticons);
        str("rules", paths.rules);
        str("vectorizer", paths.vectorizer);
        str("model", paths.model);
        if (p.contains("stopwords")) {
          paths.stopwords.clear();
          for (const auto& s : p["stopwords"]) paths.stopwords.push_back(resolve(s.get<std::string>()));
        }
      }
      if (j.contains("pipeline")) {
        const auto& p = j["pipeline"];
        check_keys(p, {"min_token_len", "steps", "translit"}, "pipeline.");
        pipeline.min_token_len = p.value("min_token_len", pipeline.min_token_len);
        if (p.contains("steps")) pipeline.steps = p["steps"].get<std::vector<std::string>>();
        pipeline.translit = p.value("translit", pipeline.translit);
      }
      if (j.contains("autolabel")) {
        check_keys(j["autolabel"], {"mode"}, "autolabel.");
        match_mode = j["autolabel"].value("mode", match_mode);
      }
      if (j.contains("split")) {
        const auto& s = j["split"];
        check_keys(s, {"ratios", "seed"}, "split.");
        if (s.contains("ratios")) {
          const auto r = s["ratios"].get<std::vector<double>>();
          if (r.size() != 3) throw Error("split.ratios needs three values");
          ratios = {r[0], r[1], r[2]};
        }
        split_seed = s.value("seed", split_seed);
      }
      if (j.contains("svm")) {
        const auto& s = j["svm"];
        check_keys(s, {"lambda", "epochs", "seed", "class_weight", "min_df", "max_ngram"}, "svm.");
        svm.lambda = s.value("lambda", svm.lambda);
        svm.epochs = s.value("epochs", svm.epochs);
        svm.seed = s.value("seed", svm.seed);
        if (s.contains("class_weight")) svm.class_weight = parse_class_weight(s["class_weight"].get<std::string>());
        tfidf.min_df = s.value("min_df", tfidf.min_df);
        tfidf.max_ngram = s.value("max_ngram", tfidf.max_ngram);
      }
      if (j.contains("knn")) {
        const auto& s = j["knn"];
        check_keys(s, {"k", "compressor", "level", "threads"}, "knn.");
        k = s.value("k", k);
        compressor = s.value("compressor", compressor);
        level = s.value("level", level);
        threads = s.value("threads", threads);
      }
      if (j.contains("out_dir")) out_dir = resolve(j["out_dir"].get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw Error(std::string("config: ") + e.what());
    }
  }

  void validate() const {
    pipeline_config_options();
    if (match_mode != "token" && match_mode != "substring") throw Error("autolabel.mode must be token or substring");
    if (!ncd::parse_compressor(compressor)) throw Error("unknown compressor \"" + compressor + "\"");
    if (level < 0 || level > 9) throw Error("knn.level must be in 0..9");
    if (k < 1) throw Error("knn.k must be >= 1");
    if (svm.lambda <= 0) throw Error("svm.lambda must be positive");
    if (svm.epochs < 1) throw Error("svm.epochs must be >= 1");
  }

  static svm::ClassWeight parse_class_weight(const std::string& s) {
    if (s == "balanced") return svm::ClassWeight::balanced;
    if (s == "none") return svm::ClassWeight::none;
    throw Error("class_weight must be balanced or none");
  }

  std::string hash() const { return hex_digest(to_json().dump()); }

  // Fingerprint of everything that shapes clean_text: options plus the
  // contents (not the paths) of the resource files.
  std::string pipeline_hash() const {
    nlohmann::ordered_json j = pipeline_json();
    std::vector<std::string> stop;
    for (const auto& p : paths.stopwords) stop.push_back(hex_digest(io::read_file(p)));
    j["stopwords"] = stop;
    j["emoticons"] = paths.emoticons.empty() ? "" : hex_digest(io::read_file(paths.emoticons));
    j["rules"] = paths.rules.empty() ? "" : hex_digest(io::read_file(paths.rules));
    return hex_digest(j.dump());
  }

  textprep::PipelineConfig pipeline_config() const {
    textprep::PipelineConfig pc = pipeline_config_options();
    for (const auto& p : paths.stopwords) pc.stop_words.merge(textprep::load_stopwords(p));
    if (!paths.emoticons.empty()) pc.emoticon_map = textprep::load_emoticons(paths.emoticons);
    pc.validate();
    return pc;
  }

  translit::RuleTable rule_table() const {
    if (paths.rules.empty()) return translit::default_rules();
    return translit::load_rules(paths.rules);
  }

  autolabel::MatchMode mode() const {
    return match_mode == "substring" ? autolabel::MatchMode::substring : autolabel::MatchMode::token;
  }

  ncd::NcdParams ncd_params() const { return {*ncd::parse_compressor(compressor), level}; }

 private:
  nlohmann::ordered_json pipeline_json() const {
    return {{"min_token_len", pipeline.min_token_len}, {"steps", pipeline.steps}, {"translit", pipeline.translit}};
  }

  textprep::PipelineConfig pipeline_config_options() const {
    textprep::PipelineConfig pc;
    pc.min_token_len = pipeline.min_token_len;
    if (!pipeline.steps.empty()) {
      pc.steps.clear();
      for (const auto& s : pipeline.steps) {
        const auto step = textprep::parse_step(s);
        if (!step) throw Error("unknown pipeline step \"" + s + "\"");
        pc.steps.push_back(*step);
      }
    }
    pc.validate();
    return pc;
  }

  static void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& prefix) {
    if (!j.is_object()) throw Error("config section " + prefix + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!allowed.count(it.key())) throw Error("unknown config key \"" + prefix + it.key() + "\"");
    }
  }
};

// Defaults, then the file named by `path` (or $DZHATE_CONFIG when empty).
inline RunConfig load_run_config(const std::filesystem::path& path = {}) {
  RunConfig c = RunConfig::defaults();
  std::filesystem::path p = path;
  if (p.empty()) {
    if (const char* env = std::getenv(kConfigEnv); env && *env) p = env;
  }
  if (!p.empty()) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(io::read_file(p));
    } catch (const nlohmann::json::exception& e) {
      throw Error(p.string() + ": " + e.what());
    }
    c.merge(j, p.parent_path());
  }
  return c;
}

}  // namespace dzhate
