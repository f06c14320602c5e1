#pragma once

// Documents, corpora, their CSV/JSONL files and the label-stratified split.

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "dzhate/csv.hpp"
#include "dzhate/error.hpp"
#include "dzhate/io.hpp"
#include "dzhate/random.hpp"
#include "dzhate/script.hpp"
#include "dzhate/unicode.hpp"

namespace dzhate {

enum class Label : std::uint8_t { non_hateful = 0, hateful = 1 };

inline constexpr int to_int(Label l) { return static_cast<int>(l); }

inline constexpr Label label_from_int(int v) {
  return v == 0 ? Label::non_hateful : Label::hateful;
}

enum class Source { youtube, twitter, facebook, external, unknown };
enum class LabelSource { automatic, manual, augmented, predicted, none };

inline constexpr std::string_view to_string(Source s) {
  switch (s) {
    case Source::youtube: return "youtube";
    case Source::twitter: return "twitter";
    case Source::facebook: return "facebook";
    case Source::external: return "external";
    case Source::unknown: return "unknown";
  }
  return "unknown";
}

inline constexpr std::string_view to_string(LabelSource s) {
  switch (s) {
    case LabelSource::automatic: return "auto";
    case LabelSource::manual: return "manual";
    case LabelSource::augmented: return "augmented";
    case LabelSource::predicted: return "predicted";
    case LabelSource::none: return "none";
  }
  return "none";
}

inline std::optional<Source> parse_source(std::string_view s) {
  if (s.empty() || s == "unknown") return Source::unknown;
  if (s == "youtube") return Source::youtube;
  if (s == "twitter") return Source::twitter;
  if (s == "facebook") return Source::facebook;
  if (s == "external") return Source::external;
  return std::nullopt;
}

inline std::optional<LabelSource> parse_label_source(std::string_view s) {
  if (s == "auto") return LabelSource::automatic;
  if (s == "manual") return LabelSource::manual;
  if (s == "augmented") return LabelSource::augmented;
  if (s == "predicted") return LabelSource::predicted;
  if (s == "none") return LabelSource::none;
  return std::nullopt;
}

inline std::optional<Script> parse_script(std::string_view s) {
  if (s == "arabic") return Script::arabic;
  if (s == "latin") return Script::latin;
  if (s == "mixed") return Script::mixed;
  if (s == "empty") return Script::empty;
  return std::nullopt;
}

struct Document {
  std::string id;
  Source source = Source::unknown;
  std::string raw_text;
  std::optional<std::string> clean_text;
  Script script = Script::empty;
  std::optional<Label> label;
  LabelSource label_source = LabelSource::none;

  bool operator==(const Document&) const = default;

  // Builds an unlabeled document; script is detected from the raw text.
  static Document make(std::string id, std::string raw_text, Source source = Source::unknown) {
    Document d;
    d.id = std::move(id);
    d.script = detect_script(raw_text);
    d.raw_text = std::move(raw_text);
    d.source = source;
    return d;
  }

  void set_label(Label l, LabelSource from) {
    label = l;
    label_source = from;
  }
};

enum class CorpusFormat { csv, jsonl };

inline CorpusFormat format_for_path(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  return (ext == ".jsonl" || ext == ".json") ? CorpusFormat::jsonl : CorpusFormat::csv;
}

class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Document> docs, std::string provenance = {})
      : documents_(std::move(docs)), provenance_(std::move(provenance)) {
    validate();
  }

  const std::vector<Document>& documents() const { return documents_; }
  const std::string& provenance() const { return provenance_; }
  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }
  const Document& operator[](std::size_t i) const { return documents_[i]; }
  auto begin() const { return documents_.begin(); }
  auto end() const { return documents_.end(); }

  // Field-level equality over documents; provenance is informational only.
  bool operator==(const Corpus& other) const { return documents_ == other.documents_; }

 private:
  void validate() const {
    std::unordered_set<std::string_view> seen;
    seen.reserve(documents_.size());
    for (const auto& d : documents_) {
      if (d.id.empty()) throw Error("document with empty id");
      if (!seen.insert(d.id).second) throw Error("duplicate id \"" + d.id + "\"");
      if (d.label.has_value() != (d.label_source != LabelSource::none)) {
        throw Error("document \"" + d.id + "\": label_source must be none iff label is absent");
      }
      if (d.clean_text) {
        for (char c : *d.clean_text) {
          if (unicode::is_ascii_letter(static_cast<unsigned char>(c))) {
            throw Error("document \"" + d.id + "\": clean_text contains Latin letters");
          }
        }
      }
    }
  }

  std::vector<Document> documents_;
  std::string provenance_;
};

namespace detail {

inline std::optional<Label> parse_label_field(std::string_view v, std::size_t row) {
  if (v.empty()) return std::nullopt;
  if (v == "0") return Label::non_hateful;
  if (v == "1") return Label::hateful;
  throw Error("invalid label at row " + std::to_string(row));
}

// Fills in label_source when the file carries a label but no provenance.
inline void finish_document(Document& d, std::optional<LabelSource> declared, std::size_t row,
                            std::string_view where) {
  if (declared) {
    d.label_source = *declared;
  } else {
    d.label_source = d.label ? LabelSource::manual : LabelSource::none;
  }
  if (d.label.has_value() != (d.label_source != LabelSource::none)) {
    throw Error("label/label_source mismatch at " + std::string(where) + " " + std::to_string(row));
  }
}

inline Corpus load_csv(std::string_view text, std::string provenance) {
  const auto table = csv::Table::from_text(text);
  const int c_id = table.require("id");
  const int c_text = table.require("text");
  const int c_label = table.column("label");
  const int c_source = table.column("source");
  const int c_clean = table.column("clean_text");
  const int c_script = table.column("script");
  const int c_label_source = table.column("label_source");
  const std::size_t width = table.header().size();

  std::vector<Document> docs;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < table.rows().size(); ++i) {
    const auto& row = table.rows()[i];
    const std::size_t rn = csv::Table::row_number(i);
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != width) {
      throw Error("malformed row " + std::to_string(rn) + ": expected " + std::to_string(width) +
                  " columns, got " + std::to_string(row.size()));
    }
    Document d;
    d.id = row[c_id];
    if (d.id.empty()) throw Error("empty id at row " + std::to_string(rn));
    if (!seen.insert(d.id).second) {
      throw Error("duplicate id \"" + d.id + "\" at row " + std::to_string(rn));
    }
    d.raw_text = row[c_text];
    if (c_label >= 0) d.label = parse_label_field(row[c_label], rn);
    if (c_source >= 0) {
      const auto s = parse_source(row[c_source]);
      if (!s) throw Error("invalid source at row " + std::to_string(rn));
      d.source = *s;
    }
    // An empty clean_text is written as "" and an absent one as a bare empty field.
    if (c_clean >= 0 && (!row[c_clean].empty() || table.quoted(i, static_cast<std::size_t>(c_clean)))) {
      d.clean_text = row[c_clean];
    }
    if (c_script >= 0 && !row[c_script].empty()) {
      const auto s = parse_script(row[c_script]);
      if (!s) throw Error("invalid script at row " + std::to_string(rn));
      d.script = *s;
    } else {
      d.script = detect_script(d.raw_text);
    }
    std::optional<LabelSource> declared;
    if (c_label_source >= 0 && !row[c_label_source].empty()) {
      declared = parse_label_source(row[c_label_source]);
      if (!declared) throw Error("invalid label_source at row " + std::to_string(rn));
    }
    finish_document(d, declared, rn, "row");
    docs.push_back(std::move(d));
  }
  return Corpus(std::move(docs), std::move(provenance));
}

inline Corpus load_jsonl(std::string_view text, std::string provenance) {
  std::vector<Document> docs;
  std::unordered_set<std::string> seen;
  io::for_each_line(text, [&](std::string_view line, std::size_t ln, bool) {
    if (line.find_first_not_of(" \t") == std::string_view::npos) return;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      throw Error("malformed JSON at line " + std::to_string(ln));
    }
    if (!j.is_object() || !j.contains("id") || !j.contains("text") || !j["id"].is_string() ||
        !j["text"].is_string()) {
      throw Error("malformed record at line " + std::to_string(ln));
    }
    Document d;
    d.id = j["id"].get<std::string>();
    if (d.id.empty()) throw Error("empty id at line " + std::to_string(ln));
    if (!seen.insert(d.id).second) {
      throw Error("duplicate id \"" + d.id + "\" at line " + std::to_string(ln));
    }
    d.raw_text = j["text"].get<std::string>();
    if (auto it = j.find("label"); it != j.end() && !it->is_null()) {
      if (it->is_number_integer() && (*it == 0 || *it == 1)) {
        d.label = label_from_int(it->get<int>());
      } else if (it->is_string()) {
        d.label = parse_label_field(it->get<std::string>(), ln);
      } else {
        throw Error("invalid label at line " + std::to_string(ln));
      }
    }
    if (auto it = j.find("source"); it != j.end() && it->is_string()) {
      const auto s = parse_source(it->get<std::string>());
      if (!s) throw Error("invalid source at line " + std::to_string(ln));
      d.source = *s;
    }
    if (auto it = j.find("clean_text"); it != j.end() && it->is_string()) {
      d.clean_text = it->get<std::string>();
    }
    if (auto it = j.find("script"); it != j.end() && it->is_string()) {
      const auto s = parse_script(it->get<std::string>());
      if (!s) throw Error("invalid script at line " + std::to_string(ln));
      d.script = *s;
    } else {
      d.script = detect_script(d.raw_text);
    }
    std::optional<LabelSource> declared;
    if (auto it = j.find("label_source"); it != j.end() && it->is_string()) {
      declared = parse_label_source(it->get<std::string>());
      if (!declared) throw Error("invalid label_source at line " + std::to_string(ln));
    }
    finish_document(d, declared, ln, "line");
    docs.push_back(std::move(d));
  });
  return Corpus(std::move(docs), std::move(provenance));
}

}  // namespace detail

inline Corpus parse_corpus(std::string_view text, CorpusFormat format, std::string provenance = {}) {
  return format == CorpusFormat::csv ? detail::load_csv(text, std::move(provenance))
                                     : detail::load_jsonl(text, std::move(provenance));
}

inline Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  return parse_corpus(io::read_file(path), format, path.string());
}

inline Corpus load_corpus(const std::filesystem::path& path) {
  return load_corpus(path, format_for_path(path));
}

inline const csv::Record& corpus_csv_header() {
  static const csv::Record header{"id", "text", "label", "source", "clean_text", "script",
                                  "label_source"};
  return header;
}

inline std::string serialize_corpus(const Corpus& corpus, CorpusFormat format) {
  std::string out;
  if (format == CorpusFormat::csv) {
    csv::write_record(out, corpus_csv_header());
    for (const auto& d : corpus) {
      csv::write_record(out, {d.id, d.raw_text, d.label ? std::to_string(to_int(*d.label)) : "",
                              std::string(to_string(d.source)), d.clean_text.value_or(""),
                              std::string(to_string(d.script)),
                              std::string(to_string(d.label_source))},
                        {false, false, false, false, d.clean_text && d.clean_text->empty()});
    }
    return out;
  }
  for (const auto& d : corpus) {
    nlohmann::ordered_json j;
    j["id"] = d.id;
    j["text"] = d.raw_text;
    j["label"] = d.label ? nlohmann::ordered_json(to_int(*d.label)) : nlohmann::ordered_json();
    j["source"] = to_string(d.source);
    j["clean_text"] = d.clean_text ? nlohmann::ordered_json(*d.clean_text) : nlohmann::ordered_json();
    j["script"] = to_string(d.script);
    j["label_source"] = to_string(d.label_source);
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

inline void save_corpus(const Corpus& corpus, const std::filesystem::path& path, CorpusFormat format) {
  io::write_file(path, serialize_corpus(corpus, format));
}

inline void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  save_corpus(corpus, path, format_for_path(path));
}

// --- stratified split --------------------------------------------------------

struct SplitRatios {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;
};

struct SplitSets {
  Corpus train;
  Corpus validation;
  Corpus test;
  std::uint64_t seed = 0;
  SplitRatios ratios;
};

// Per-class split sizes. Each split receives floor(ratio * n); the first
// leftover document goes to train, a second (at most two exist) to whichever
// of validation/test has the larger fractional share (validation on ties).
inline std::array<std::size_t, 3> split_counts(std::size_t n, const SplitRatios& r) {
  const std::array<double, 3> exact{r.train * static_cast<double>(n),
                                    r.validation * static_cast<double>(n),
                                    r.test * static_cast<double>(n)};
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> frac{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    const double f = std::floor(exact[i] + 1e-9);
    counts[i] = static_cast<std::size_t>(f);
    frac[i] = exact[i] - f;
    assigned += counts[i];
  }
  std::size_t leftover = n - assigned;
  if (leftover > 0) {
    ++counts[0];
    --leftover;
  }
  if (leftover > 0) {
    ++counts[frac[2] > frac[1] ? 2 : 1];
    --leftover;
  }
  counts[0] += leftover;
  return counts;
}

inline SplitSets stratified_split(const Corpus& corpus, const SplitRatios& ratios, std::uint64_t seed) {
  if (!(ratios.train > 0 && ratios.validation > 0 && ratios.test > 0)) {
    throw Error("split ratios must be positive");
  }
  if (std::abs(ratios.train + ratios.validation + ratios.test - 1.0) > 1e-9) {
    throw Error("split ratios must sum to 1");
  }
  std::string unlabeled;
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& d = corpus[i];
    if (!d.label) {
      unlabeled += (unlabeled.empty() ? "" : ",") + d.id;
      continue;
    }
    by_class[to_int(*d.label)].push_back(i);
  }
  if (!unlabeled.empty()) throw Error("unlabeled documents: " + unlabeled);
  for (int c = 0; c < 2; ++c) {
    if (by_class[c].size() < 3) {
      throw Error("class " + std::to_string(c) + " has " + std::to_string(by_class[c].size()) +
                  " documents");
    }
  }

  // 0 = train, 1 = validation, 2 = test
  std::vector<int> assignment(corpus.size(), 0);
  std::mt19937_64 rng(seed);
  for (auto& members : by_class) {
    seeded_shuffle(members, rng);
    const auto counts = split_counts(members.size(), ratios);
    for (std::size_t k = 0; k < members.size(); ++k) {
      assignment[members[k]] = k < counts[0] ? 0 : (k < counts[0] + counts[1] ? 1 : 2);
    }
  }

  std::array<std::vector<Document>, 3> parts;
  for (std::size_t i = 0; i < corpus.size(); ++i) parts[assignment[i]].push_back(corpus[i]);
  const std::string& prov = corpus.provenance();
  return SplitSets{Corpus(std::move(parts[0]), prov + "#train"),
                   Corpus(std::move(parts[1]), prov + "#validation"),
                   Corpus(std::move(parts[2]), prov + "#test"), seed, ratios};
}

}  // namespace dzhate
