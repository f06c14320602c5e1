#pragma once

// Keyword-lexicon annotation, external label remapping and match spans for
// the review service.

#include <cctype>
#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dzhate/corpus.hpp"
#include "dzhate/error.hpp"
#include "dzhate/io.hpp"
#include "dzhate/textprep.hpp"
#include "dzhate/unicode.hpp"

namespace dzhate::autolabel {

class Lexicon {
 public:
  using EntrySet = std::set<std::string, std::less<>>;

  Lexicon() = default;

  // Entries are normalized and deduplicated; blanks are ignored.
  Lexicon(const std::vector<std::string>& words, std::string name) : name_(std::move(name)) {
    for (const auto& w : words) {
      std::string e = textprep::collapse_whitespace(textprep::normalize_arabic(w));
      if (!e.empty()) entries_.insert(std::move(e));
    }
    if (entries_.empty()) throw Error("empty lexicon");
  }

  const EntrySet& entries() const { return entries_; }
  const std::string& name() const { return name_; }
  std::size_t size() const { return entries_.size(); }
  bool contains(std::string_view token) const { return entries_.find(token) != entries_.end(); }

 private:
  EntrySet entries_;
  std::string name_;
};

inline Lexicon parse_lexicon(std::string_view text, std::string name = "lexicon") {
  std::vector<std::string> words;
  io::for_each_line(text, [&](std::string_view line, std::size_t, bool) {
    std::string w = textprep::collapse_whitespace(line);
    if (w.empty() || w.front() == '#') return;
    words.push_back(std::move(w));
  });
  return Lexicon(words, std::move(name));
}

inline Lexicon load_lexicon(const std::filesystem::path& path) {
  return parse_lexicon(io::read_file(path), path.filename().string());
}

enum class MatchMode { token, substring };

inline bool matches(std::string_view clean_text, const Lexicon& lexicon, MatchMode mode = MatchMode::token) {
  if (mode == MatchMode::substring) {
    for (const auto& e : lexicon.entries()) {
      if (clean_text.find(e) != std::string_view::npos) return true;
    }
    return false;
  }
  for (const auto& tok : unicode::split_whitespace(clean_text)) {
    if (lexicon.contains(tok)) return true;
  }
  return false;
}

// Label 1 iff the cleaned text hits the lexicon; every document ends up with
// label_source auto. The input corpus is not modified.
inline Corpus auto_annotate(const Corpus& corpus, const Lexicon& lexicon, MatchMode mode = MatchMode::token) {
  std::string missing;
  for (const auto& d : corpus) {
    if (!d.clean_text) missing += (missing.empty() ? "" : ",") + d.id;
  }
  if (!missing.empty()) throw Error("documents without clean_text: " + missing);
  std::vector<Document> out;
  out.reserve(corpus.size());
  for (const auto& d : corpus) {
    Document copy = d;
    copy.set_label(matches(*d.clean_text, lexicon, mode) ? Label::hateful : Label::non_hateful,
                   LabelSource::automatic);
    out.push_back(std::move(copy));
  }
  return Corpus(std::move(out), corpus.provenance());
}

enum class ExternalLabel { offensive, abusive, normal };

inline ExternalLabel parse_external_label(std::string_view s) {
  std::string lower(s);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "offensive") return ExternalLabel::offensive;
  if (lower == "abusive") return ExternalLabel::abusive;
  if (lower == "normal") return ExternalLabel::normal;
  throw Error("unknown source label \"" + std::string(s) + "\"");
}

// Offensive and abusive fuse into hateful (1); normal is non-hateful (0).
inline std::vector<Label> remap_external(const std::vector<ExternalLabel>& labels) {
  std::vector<Label> out;
  out.reserve(labels.size());
  for (auto l : labels) out.push_back(l == ExternalLabel::normal ? Label::non_hateful : Label::hateful);
  return out;
}

inline std::vector<Label> remap_external(const std::vector<std::string>& labels) {
  std::vector<ExternalLabel> parsed;
  parsed.reserve(labels.size());
  for (const auto& l : labels) parsed.push_back(parse_external_label(l));
  return remap_external(parsed);
}

// Half-open [start, end) code point offsets into clean_text.
using Span = std::pair<std::size_t, std::size_t>;

inline std::vector<Span> highlight_matches(std::string_view clean_text, const Lexicon& lexicon) {
  std::vector<Span> spans;
  const std::u32string cps = unicode::decode(clean_text);
  std::size_t i = 0;
  while (i < cps.size()) {
    if (unicode::is_whitespace(cps[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < cps.size() && !unicode::is_whitespace(cps[j])) ++j;
    if (lexicon.contains(unicode::encode(std::u32string_view(cps).substr(i, j - i)))) spans.emplace_back(i, j);
    i = j;
  }
  return spans;
}

inline std::vector<Span> highlight_matches(const Document& doc, const Lexicon& lexicon) {
  if (!doc.clean_text) throw Error("document \"" + doc.id + "\" has no clean_text");
  return highlight_matches(*doc.clean_text, lexicon);
}

}  // namespace dzhate::autolabel
