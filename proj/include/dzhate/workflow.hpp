#pragma once

// Corpus-level glue between the modules: preprocessing, training and
// classification of whole corpora, with inference-time script routing.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dzhate/corpus.hpp"
#include "dzhate/error.hpp"
#include "dzhate/ncd.hpp"
#include "dzhate/script.hpp"
#include "dzhate/svm.hpp"
#include "dzhate/textprep.hpp"
#include "dzhate/translit.hpp"
#include "dzhate/vectorize.hpp"

namespace dzhate::workflow {

struct Prepared {
  std::string clean_text;
  Script script = Script::empty;
  bool transliterated = false;
  std::size_t unmatched = 0;
};

// Latin or mixed input goes through transliteration before the pipeline
// when `route_latin` is set.
inline Prepared prepare(std::string_view raw, const textprep::Pipeline& pipeline, const translit::RuleTable& rules,
                        bool route_latin) {
  Prepared p;
  p.script = detect_script(raw);
  std::string text(raw);
  if (route_latin && (p.script == Script::latin || p.script == Script::mixed)) {
    auto r = translit::transliterate_any(raw, rules);
    text = std::move(r.text);
    p.unmatched = r.unmatched;
    p.transliterated = true;
  }
  p.clean_text = pipeline.apply(text);
  return p;
}

inline Corpus preprocess(const Corpus& corpus, const textprep::Pipeline& pipeline, const translit::RuleTable& rules,
                         bool route_latin) {
  std::vector<Document> docs;
  docs.reserve(corpus.size());
  for (const auto& d : corpus) {
    Document out = d;
    auto p = prepare(d.raw_text, pipeline, rules, route_latin);
    out.clean_text = std::move(p.clean_text);
    out.script = p.script;
    docs.push_back(std::move(out));
  }
  return Corpus(std::move(docs), corpus.provenance());
}

inline std::vector<std::string> clean_texts(const Corpus& corpus) {
  std::vector<std::string> out;
  out.reserve(corpus.size());
  for (const auto& d : corpus) {
    if (!d.clean_text) throw Error("document \"" + d.id + "\" has no clean_text");
    out.push_back(*d.clean_text);
  }
  return out;
}

inline std::vector<Label> labels(const Corpus& corpus) {
  std::vector<Label> out;
  out.reserve(corpus.size());
  for (const auto& d : corpus) {
    if (!d.label) throw Error("document \"" + d.id + "\" is unlabeled");
    out.push_back(*d.label);
  }
  return out;
}

struct SvmBundle {
  vectorize::TfIdfModel vectorizer;
  svm::LinearModel model;

  svm::Prediction classify(std::string_view clean_text) const { return model.predict(vectorizer.transform(clean_text)); }
};

inline SvmBundle train_svm(const Corpus& train, const vectorize::TfIdfOptions& tfidf, const svm::Hyperparams& hp) {
  SvmBundle b;
  const auto texts = clean_texts(train);
  b.vectorizer = vectorize::fit(texts, tfidf);
  std::vector<vectorize::SparseVector> X;
  X.reserve(texts.size());
  for (const auto& t : texts) X.push_back(b.vectorizer.transform(t));
  b.model = svm::train_svm(X, labels(train), hp, b.vectorizer.vocabulary_size());
  b.model.set_vectorizer_id(b.vectorizer.id());
  return b;
}

inline void check_pair(const vectorize::TfIdfModel& vec, const svm::LinearModel& model) {
  if (vec.id() != model.vectorizer_id() || vec.vocabulary_size() != model.dimension()) {
    throw Error("incompatible model/vectorizer pair");
  }
}

// Labels every document of `corpus` with the given classifier. Documents
// that already carry clean_text are used as is; others are prepared first,
// as are Latin/mixed documents whose clean_text came out empty because
// they were preprocessed without transliteration.
template <typename Classify>
Corpus predict_corpus(const Corpus& corpus, const textprep::Pipeline& pipeline, const translit::RuleTable& rules,
                      Classify&& classify) {
  std::vector<Document> docs;
  docs.reserve(corpus.size());
  for (const auto& d : corpus) {
    Document out = d;
    const bool latin = out.script == Script::latin || out.script == Script::mixed;
    if (!out.clean_text || (out.clean_text->empty() && latin)) {
      auto p = prepare(d.raw_text, pipeline, rules, true);
      out.clean_text = std::move(p.clean_text);
      out.script = p.script;
    }
    out.set_label(classify(*out.clean_text), LabelSource::predicted);
    docs.push_back(std::move(out));
  }
  return Corpus(std::move(docs), corpus.provenance() + "#predicted");
}

}  // namespace dzhate::workflow
