// dzhate: command-line front end.
//
// Every subcommand reads files and writes files; the only long-running one
// is serve-annotation. Failures print a single JSON object on stderr and
// exit nonzero.

#include <CLI11.hpp>

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dzhate/annotation.hpp"
#include "dzhate/annotation_server.hpp"
#include "dzhate/autolabel.hpp"
#include "dzhate/config.hpp"
#include "dzhate/corpus.hpp"
#include "dzhate/csv.hpp"
#include "dzhate/io.hpp"
#include "dzhate/metrics.hpp"
#include "dzhate/ncd.hpp"
#include "dzhate/svm.hpp"
#include "dzhate/translit.hpp"
#include "dzhate/vectorize.hpp"
#include "dzhate/workflow.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

using namespace dzhate;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

void fail_line(const std::string& command, const std::string& message, int code) {
  ordered_json j;
  j["error"] = message;
  j["command"] = command;
  j["exit_code"] = code;
  std::cerr << j.dump() << '\n';
}

// Flags shared by every subcommand; each mirrors a config key.
struct Overrides {
  std::string config;
  std::optional<std::string> lexicon;
  std::vector<std::string> stopwords;
  std::optional<std::string> emoticons;
  std::optional<std::string> rules;
  std::optional<int> min_token_len;
  std::optional<bool> translit;
  std::optional<std::string> mode;
  std::optional<std::string> ratios;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda;
  std::optional<int> epochs;
  std::optional<std::string> class_weight;
  std::optional<std::size_t> min_df;
  std::optional<int> max_ngram;
  std::optional<std::size_t> k;
  std::optional<std::string> compressor;
  std::optional<int> level;
  std::optional<unsigned> threads;
  std::optional<std::string> out_dir;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "JSON run config (default: $DZHATE_CONFIG)");
    app->add_option("--lexicon", lexicon, "keyword lexicon file");
    app->add_option("--stopwords", stopwords, "stop-word files (replace the configured list)");
    app->add_option("--emoticons", emoticons, "emoticon map file");
    app->add_option("--rules", rules, "transliteration rule table");
    app->add_option("--min-token-len", min_token_len, "drop tokens shorter than this");
    app->add_option("--translit", translit, "transliterate Latin/mixed documents before preprocessing");
    app->add_option("--mode", mode, "lexicon match mode: token | substring");
    app->add_option("--ratios", ratios, "split ratios train,validation,test");
    app->add_option("--seed", seed, "split / training seed");
    app->add_option("--lambda", lambda, "SVM regularization strength");
    app->add_option("--epochs", epochs, "SVM epochs");
    app->add_option("--class-weight", class_weight, "balanced | none");
    app->add_option("--min-df", min_df, "TF-IDF minimum document frequency");
    app->add_option("--max-ngram", max_ngram, "1 = unigrams, 2 = unigrams + bigrams");
    app->add_option("--k", k, "neighbors for NCD+KNN");
    app->add_option("--compressor", compressor, "deflate | zlib | gzip");
    app->add_option("--level", level, "compression level 0..9");
    app->add_option("--threads", threads, "worker threads (0 = all cores)");
    app->add_option("--out-dir", out_dir, "output directory");
  }

  RunConfig resolve(const std::string& subcommand) const {
    RunConfig c = load_run_config(config);
    if (lexicon) c.paths.lexicon = *lexicon;
    if (!stopwords.empty()) c.paths.stopwords = stopwords;
    if (emoticons) c.paths.emoticons = *emoticons;
    if (rules) c.paths.rules = *rules;
    if (min_token_len) c.pipeline.min_token_len = *min_token_len;
    if (translit) c.pipeline.translit = *translit;
    if (mode) c.match_mode = *mode;
    if (ratios) c.ratios = parse_ratios(*ratios);
    if (seed) {
      if (subcommand == "split") c.split_seed = *seed;
      else c.svm.seed = *seed;
    }
    if (lambda) c.svm.lambda = *lambda;
    if (epochs) c.svm.epochs = *epochs;
    if (class_weight) c.svm.class_weight = RunConfig::parse_class_weight(*class_weight);
    if (min_df) c.tfidf.min_df = *min_df;
    if (max_ngram) c.tfidf.max_ngram = *max_ngram;
    if (k) c.k = *k;
    if (compressor) c.compressor = *compressor;
    if (level) c.level = *level;
    if (threads) c.threads = *threads;
    if (out_dir) c.out_dir = *out_dir;
    c.validate();
    return c;
  }

  static SplitRatios parse_ratios(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(part, &used));
        if (used != part.size()) throw std::invalid_argument(part);
      } catch (const std::exception&) {
        throw Error("invalid ratio \"" + part + "\"");
      }
    }
    if (v.size() != 3) throw Error("--ratios needs three comma-separated values");
    return {v[0], v[1], v[2]};
  }
};

// --- artifact metadata -------------------------------------------------------

fs::path meta_path(const fs::path& artifact) { return fs::path(artifact.string() + ".meta.json"); }

ordered_json provenance(const std::string& command, const RunConfig& cfg) {
  ordered_json j;
  j["command"] = command;
  j["config_hash"] = cfg.hash();
  j["pipeline_hash"] = cfg.pipeline_hash();
  j["config"] = cfg.to_json();
  return j;
}

void write_meta(const fs::path& artifact, const std::string& command, const RunConfig& cfg,
                const ordered_json& extra = ordered_json::object()) {
  auto j = provenance(command, cfg);
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  io::write_file(meta_path(artifact), j.dump(1) + "\n");
}

std::optional<std::string> pipeline_hash_of(const fs::path& artifact) {
  const auto mp = meta_path(artifact);
  if (!fs::exists(mp)) return std::nullopt;
  const auto j = nlohmann::json::parse(io::read_file(mp));
  if (!j.contains("pipeline_hash")) return std::nullopt;
  return j["pipeline_hash"].get<std::string>();
}

void save_csv(const Corpus& c, const fs::path& path) { save_corpus(c, path, format_for_path(path)); }

// --- subcommands -------------------------------------------------------------

struct PreprocessArgs {
  std::string in;
  std::string out;
};

void run_preprocess(const PreprocessArgs& a, const RunConfig& cfg) {
  const Corpus corpus = load_corpus(a.in);
  const textprep::Pipeline pipeline(cfg.pipeline_config());
  const Corpus clean = workflow::preprocess(corpus, pipeline, cfg.rule_table(), cfg.pipeline.translit);
  std::size_t empty = 0;
  for (const auto& d : clean) empty += d.clean_text->empty() ? 1 : 0;
  save_csv(clean, a.out);
  write_meta(a.out, "preprocess", cfg, {{"input", a.in}, {"documents", clean.size()}, {"empty_documents", empty}});
  std::cout << ordered_json{{"documents", clean.size()}, {"empty_documents", empty}, {"out", a.out}}.dump() << '\n';
}

struct TranslitArgs {
  std::optional<std::string> text;
  std::string in;
  bool json = false;
};

void run_translit(const TranslitArgs& a, const RunConfig& cfg) {
  const auto table = cfg.rule_table();
  auto emit = [&](std::string_view line) {
    const auto r = translit::transliterate(line, table);
    if (a.json) {
      std::cout << ordered_json{{"text", r.text}, {"unmatched", r.unmatched}}.dump() << '\n';
    } else {
      std::cout << r.text << '\n';
      if (r.unmatched) std::cerr << ordered_json{{"warning", "unmatched characters"}, {"count", r.unmatched}}.dump() << '\n';
    }
  };
  if (a.text) {
    emit(*a.text);
    return;
  }
  if (a.in.empty()) throw Error("translit needs --text or --in");
  io::for_each_line(io::read_file(a.in), [&](std::string_view line, std::size_t, bool) { emit(line); });
}

struct AnnotateArgs {
  std::string in;
  std::string out;
};

void run_annotate_auto(const AnnotateArgs& a, const RunConfig& cfg) {
  const Corpus corpus = load_corpus(a.in);
  const auto lexicon = autolabel::load_lexicon(cfg.paths.lexicon);
  const Corpus labeled = autolabel::auto_annotate(corpus, lexicon, cfg.mode());
  std::size_t ones = 0;
  for (const auto& d : labeled) ones += *d.label == Label::hateful;
  save_csv(labeled, a.out);
  write_meta(a.out, "annotate-auto", cfg,
             {{"input", a.in}, {"lexicon_size", lexicon.size()}, {"hateful", ones}, {"documents", labeled.size()}});
  std::cout << ordered_json{{"documents", labeled.size()}, {"hateful", ones}, {"out", a.out}}.dump() << '\n';
}

struct ServeArgs {
  std::string corpus;
  std::string out;
  std::string host = "127.0.0.1";
  int port = 8765;
  std::string cors_origin = "*";
  std::string annotator = "annotator";
};

annotation::Server* g_server = nullptr;

void run_serve(const ServeArgs& a, const RunConfig& cfg) {
  annotation::Session session(load_corpus(a.corpus), autolabel::load_lexicon(cfg.paths.lexicon),
                              {a.out, a.annotator});
  annotation::Server server(session, {a.host, a.port, a.cors_origin});
  const int port = server.bind();
  std::cout << ordered_json{{"listening", a.host + ":" + std::to_string(port)},
                            {"event_log", session.log_path().string()},
                            {"progress", session.progress().to_json()}}
                   .dump()
            << std::endl;
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (g_server) g_server->stop();
  });
  server.run();
  g_server = nullptr;
}

struct SplitArgs {
  std::string in;
};

void run_split(const SplitArgs& a, const RunConfig& cfg) {
  const Corpus corpus = load_corpus(a.in);
  const auto sets = stratified_split(corpus, cfg.ratios, cfg.split_seed);
  const fs::path dir = cfg.out_dir;
  const std::pair<const char*, const Corpus*> parts[] = {
      {"train.csv", &sets.train}, {"validation.csv", &sets.validation}, {"test.csv", &sets.test}};
  ordered_json counts;
  for (const auto& [name, c] : parts) {
    save_csv(*c, dir / name);
    write_meta(dir / name, "split", cfg, {{"input", a.in}, {"documents", c->size()}});
    counts[name] = c->size();
  }
  std::cout << counts.dump() << '\n';
}

struct TrainArgs {
  std::string train;
  std::string validation;
};

void run_train_svm(const TrainArgs& a, const RunConfig& cfg) {
  const Corpus train = load_corpus(a.train);
  const auto bundle = workflow::train_svm(train, cfg.tfidf, cfg.svm);
  const fs::path dir = cfg.out_dir;
  const auto prov = provenance("train-svm", cfg);

  auto vj = bundle.vectorizer.to_json();
  for (auto it = prov.begin(); it != prov.end(); ++it) vj[it.key()] = it.value();
  io::write_file(dir / "vectorizer.json", vj.dump(1) + "\n");

  ordered_json extra = prov;
  extra["vectorizer"] = "vectorizer.json";
  extra["train"] = a.train;
  bundle.model.save(dir / "svm.json", extra);

  ordered_json out{{"model", (dir / "svm.json").string()},
                   {"vocabulary", bundle.vectorizer.vocabulary_size()},
                   {"final_objective", bundle.model.loss_history().back()}};
  if (!a.validation.empty()) {
    const Corpus val = load_corpus(a.validation);
    std::vector<Label> gold = workflow::labels(val), pred;
    for (const auto& t : workflow::clean_texts(val)) pred.push_back(bundle.classify(t).label);
    out["validation_accuracy"] = metrics::evaluate(gold, pred).accuracy;
  }
  std::cout << out.dump() << '\n';
}

struct PredictArgs {
  std::string model;
  std::string vectorizer;
  std::string knn;
  std::string select_k;
  std::optional<std::string> text;
  std::string in;
  std::string out;
};

void run_predict(const PredictArgs& a, const RunConfig& cfg) {
  if (a.model.empty() == a.knn.empty()) throw Error("predict needs exactly one of --model or --knn");
  if (a.text.has_value() == !a.in.empty()) throw Error("predict needs exactly one of --text or --in");
  const textprep::Pipeline pipeline(cfg.pipeline_config());
  const auto rules = cfg.rule_table();

  std::optional<workflow::SvmBundle> svm_bundle;
  std::optional<ncd::NcdIndex> index;
  std::size_t k = cfg.k;
  std::string model_hash;
  if (!a.model.empty()) {
    const auto mj = nlohmann::json::parse(io::read_file(a.model));
    fs::path vec_path = a.vectorizer;
    if (vec_path.empty()) {
      if (!mj.contains("vectorizer")) throw Error("model names no vectorizer; pass --vectorizer");
      vec_path = fs::path(a.model).parent_path() / mj["vectorizer"].get<std::string>();
    }
    svm_bundle = workflow::SvmBundle{vectorize::TfIdfModel::load(vec_path), svm::LinearModel::from_json(mj)};
    workflow::check_pair(svm_bundle->vectorizer, svm_bundle->model);
    model_hash = mj.value("pipeline_hash", "");
  } else {
    index = ncd::NcdIndex::build(load_corpus(a.knn), cfg.ncd_params());
    if (!a.select_k.empty()) k = ncd::select_k(*index, load_corpus(a.select_k), {1, 3, 5, 7}, cfg.threads);
    model_hash = pipeline_hash_of(a.knn).value_or("");
  }
  if (!model_hash.empty() && model_hash != cfg.pipeline_hash()) {
    std::cerr << ordered_json{{"warning", "model was built with a different pipeline config"}}.dump() << '\n';
  }

  auto classify = [&](const std::string& clean) -> ordered_json {
    ordered_json j;
    if (svm_bundle) {
      const auto p = svm_bundle->classify(clean);
      j["label"] = to_int(p.label);
      j["margin"] = p.margin;
    } else {
      const auto r = ncd::knn_classify(*index, clean, ncd::KnnOptions{k, cfg.threads});
      j["label"] = to_int(r.label);
      j["neighbors"] = r.neighbor_ids;
      j["distances"] = r.distances;
    }
    return j;
  };

  if (a.text) {
    const auto p = workflow::prepare(*a.text, pipeline, rules, true);
    if (index && p.clean_text.empty()) throw Error("empty document");
    ordered_json j;
    j["script"] = to_string(p.script);
    j["transliterated"] = p.transliterated;
    j["clean_text"] = p.clean_text;
    const ordered_json verdict = classify(p.clean_text);
    for (auto it = verdict.begin(); it != verdict.end(); ++it) j[it.key()] = it.value();
    std::cout << j.dump() << '\n';
    return;
  }
  if (a.out.empty()) throw Error("--in needs --out");
  const Corpus input = load_corpus(a.in);
  const Corpus predicted = workflow::predict_corpus(input, pipeline, rules, [&](const std::string& clean) {
    if (index && clean.empty()) throw Error("empty document in " + a.in);
    return label_from_int(classify(clean)["label"].get<int>());
  });
  save_csv(predicted, a.out);
  write_meta(a.out, "predict", cfg,
             {{"input", a.in},
              {"classifier", svm_bundle ? "svm" : "ncd-knn"},
              {"model", svm_bundle ? a.model : a.knn},
              {"k", k},
              {"pipeline_hash", model_hash.empty() ? cfg.pipeline_hash() : model_hash}});
  std::cout << ordered_json{{"documents", predicted.size()}, {"out", a.out}}.dump() << '\n';
}

struct EvaluateArgs {
  std::string pred;
  std::string gold;
  std::string name = "model";
  std::string out;
  bool per_class = false;
};

std::map<std::string, Label> labels_by_id(const fs::path& path) {
  const auto table = csv::Table::from_text(io::read_file(path));
  const int c_id = table.require("id");
  const int c_label = table.require("label");
  std::map<std::string, Label> out;
  for (std::size_t i = 0; i < table.rows().size(); ++i) {
    const auto& row = table.rows()[i];
    if (static_cast<int>(row.size()) <= std::max(c_id, c_label)) {
      throw Error(path.string() + ": malformed row " + std::to_string(table.row_number(i)));
    }
    const auto& v = row[c_label];
    if (v != "0" && v != "1") {
      throw Error(path.string() + ": invalid label at row " + std::to_string(table.row_number(i)));
    }
    if (!out.emplace(row[c_id], v == "1" ? Label::hateful : Label::non_hateful).second) {
      throw Error(path.string() + ": duplicate id \"" + row[c_id] + "\"");
    }
  }
  return out;
}

void run_evaluate(const EvaluateArgs& a, const RunConfig& cfg) {
  const auto gold = labels_by_id(a.gold);
  const auto pred = labels_by_id(a.pred);
  std::vector<Label> g, p;
  std::string missing;
  for (const auto& [id, label] : gold) {
    const auto it = pred.find(id);
    if (it == pred.end()) {
      missing += (missing.empty() ? "" : ",") + id;
      continue;
    }
    g.push_back(label);
    p.push_back(it->second);
  }
  if (!missing.empty()) throw Error("predictions missing for ids: " + missing);
  const auto report = metrics::evaluate(g, p);
  std::cout << metrics::render_report({{a.name, report}}, a.per_class);
  if (!a.out.empty()) {
    ordered_json j;
    j["model_name"] = a.name;
    j["metrics"] = metrics::to_json(report);
    j["pred"] = a.pred;
    j["gold"] = a.gold;
    j["config_hash"] = cfg.hash();
    j["pipeline_hash"] = pipeline_hash_of(a.pred).value_or(cfg.pipeline_hash());
    io::write_file(a.out, j.dump(1) + "\n");
  }
}

struct ReportArgs {
  std::vector<std::string> runs;
  bool force = false;
  bool per_class = false;
};

void run_report(const ReportArgs& a) {
  std::vector<metrics::NamedReport> rows;
  std::optional<std::string> hash;
  for (const auto& path : a.runs) {
    const auto j = nlohmann::json::parse(io::read_file(path));
    const auto h = j.value("pipeline_hash", "");
    if (!hash) {
      hash = h;
    } else if (*hash != h && !a.force) {
      throw Error("runs use different pipeline configs (" + *hash + " vs " + h + " in " + path +
                  "); pass --force to compare anyway");
    }
    rows.push_back({j.at("model_name").get<std::string>(), metrics::from_json(j.at("metrics"))});
  }
  std::cout << metrics::render_report(rows, a.per_class);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hate-speech detection toolkit for Algerian-dialect Arabic"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dzhate 1.0.0");

  std::map<std::string, Overrides> overrides;
  auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    overrides[name].attach(s);
    return s;
  };

  PreprocessArgs pre;
  auto* c_pre = sub("preprocess", "apply the normalization pipeline to a corpus");
  c_pre->add_option("--in", pre.in, "input corpus (csv or jsonl)")->required();
  c_pre->add_option("--out", pre.out, "output corpus")->required();

  TranslitArgs tr;
  auto* c_tr = sub("translit", "transliterate Arabizi to Arabic script");
  c_tr->add_option("--text", tr.text, "text to transliterate");
  c_tr->add_option("--in", tr.in, "file with one text per line");
  c_tr->add_flag("--json", tr.json, "emit {text, unmatched} per line");

  AnnotateArgs an;
  auto* c_an = sub("annotate-auto", "label documents by lexicon match");
  c_an->add_option("--in", an.in, "preprocessed corpus")->required();
  c_an->add_option("--out", an.out, "auto-labeled corpus")->required();

  ServeArgs sv;
  auto* c_sv = sub("serve-annotation", "serve the manual review workflow over HTTP");
  c_sv->add_option("--corpus", sv.corpus, "auto-labeled corpus")->required();
  c_sv->add_option("--out", sv.out, "validated corpus path (event log is <out>.events.jsonl)")->required();
  c_sv->add_option("--host", sv.host, "bind address");
  c_sv->add_option("--port", sv.port, "bind port (0 = any)");
  c_sv->add_option("--cors-origin", sv.cors_origin, "Access-Control-Allow-Origin value");
  c_sv->add_option("--annotator", sv.annotator, "annotator id recorded in the event log");

  SplitArgs sp;
  auto* c_sp = sub("split", "stratified train/validation/test split");
  c_sp->add_option("--in", sp.in, "labeled corpus")->required();

  TrainArgs tn;
  auto* c_tn = sub("train-svm", "fit TF-IDF and a linear SVM");
  c_tn->add_option("--train", tn.train, "training corpus")->required();
  c_tn->add_option("--validation", tn.validation, "report accuracy on this corpus");

  PredictArgs pr;
  auto* c_pr = sub("predict", "classify text or a corpus");
  c_pr->add_option("--model", pr.model, "svm.json from train-svm");
  c_pr->add_option("--vectorizer", pr.vectorizer, "vectorizer.json (default: the one named in the model)");
  c_pr->add_option("--knn", pr.knn, "training corpus for NCD+KNN");
  c_pr->add_option("--select-k", pr.select_k, "validation corpus used to pick k from {1,3,5,7}");
  c_pr->add_option("--text", pr.text, "single text");
  c_pr->add_option("--in", pr.in, "corpus to label");
  c_pr->add_option("--out", pr.out, "predictions corpus");

  EvaluateArgs ev;
  auto* c_ev = sub("evaluate", "score predictions against gold labels");
  c_ev->add_option("--pred", ev.pred, "predictions (id,label)")->required();
  c_ev->add_option("--gold", ev.gold, "gold labels (id,label)")->required();
  c_ev->add_option("--name", ev.name, "model name for the report");
  c_ev->add_option("--out", ev.out, "write metrics JSON here");
  c_ev->add_flag("--per-class", ev.per_class, "per-class precision/recall/F1 cells");

  ReportArgs rp;
  auto* c_rp = app.add_subcommand("report", "tabulate metrics JSON files from evaluate");
  c_rp->add_option("runs", rp.runs, "metrics files")->required();
  c_rp->add_flag("--force", rp.force, "compare runs with different pipeline configs");
  c_rp->add_flag("--per-class", rp.per_class, "per-class cells");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    const auto subs = app.get_subcommands();
    fail_line(subs.empty() ? "" : subs.front()->get_name(), e.what(), kExitUsage);
    return kExitUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "report") {
      run_report(rp);
      return 0;
    }
    const RunConfig cfg = overrides.at(name).resolve(name);
    if (name == "preprocess") run_preprocess(pre, cfg);
    else if (name == "translit") run_translit(tr, cfg);
    else if (name == "annotate-auto") run_annotate_auto(an, cfg);
    else if (name == "serve-annotation") run_serve(sv, cfg);
    else if (name == "split") run_split(sp, cfg);
    else if (name == "train-svm") run_train_svm(tn, cfg);
    else if (name == "predict") run_predict(pr, cfg);
    else if (name == "evaluate") run_evaluate(ev, cfg);
  } catch (const std::exception& e) {
    fail_line(name, e.what(), kExitFailure);
    return kExitFailure;
  }
  return 0;
}
