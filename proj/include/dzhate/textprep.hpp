#pragma once

// Preprocessing pipeline for Algerian-dialect text in Arabic script.
//
// The default step order is fixed:
//   url -> stop words -> emoticons -> arabic digits -> letters -> diacritics
//   -> punctuation -> repeats -> whitespace -> latin -> digits -> short tokens
//
// Each step is a total function over UTF-8 and can be called on its own.

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "dzhate/error.hpp"
#include "dzhate/io.hpp"
#include "dzhate/unicode.hpp"

namespace dzhate::textprep {

enum class Step {
  remove_urls,
  remove_stopwords,
  map_emoticons,
  normalize_digits,
  normalize_letters,
  remove_diacritics,
  remove_punctuation,
  squeeze_repeats,
  collapse_whitespace,
  remove_latin,
  remove_digits,
  remove_short_tokens,
};

inline constexpr std::string_view to_string(Step s) {
  switch (s) {
    case Step::remove_urls: return "remove_urls";
    case Step::remove_stopwords: return "remove_stopwords";
    case Step::map_emoticons: return "map_emoticons";
    case Step::normalize_digits: return "normalize_digits";
    case Step::normalize_letters: return "normalize_letters";
    case Step::remove_diacritics: return "remove_diacritics";
    case Step::remove_punctuation: return "remove_punctuation";
    case Step::squeeze_repeats: return "squeeze_repeats";
    case Step::collapse_whitespace: return "collapse_whitespace";
    case Step::remove_latin: return "remove_latin";
    case Step::remove_digits: return "remove_digits";
    case Step::remove_short_tokens: return "remove_short_tokens";
  }
  return "";
}

inline const std::vector<Step>& default_steps() {
  static const std::vector<Step> steps{
      Step::remove_urls,        Step::remove_stopwords,  Step::map_emoticons,
      Step::normalize_digits,   Step::normalize_letters, Step::remove_diacritics,
      Step::remove_punctuation, Step::squeeze_repeats,   Step::collapse_whitespace,
      Step::remove_latin,       Step::remove_digits,     Step::remove_short_tokens};
  return steps;
}

inline std::optional<Step> parse_step(std::string_view name) {
  for (Step s : default_steps()) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

using LetterMap = std::map<char32_t, char32_t>;
using EmoticonMap = std::map<std::string, std::string>;

// ى/ی -> ي, گ/ک -> ك, hamza-carrying and wasla alef forms -> bare alef.
inline const LetterMap& default_letter_map() {
  static const LetterMap m{
      {U'ى', U'ي'}, {U'ی', U'ي'},  // alef maksura, farsi yeh
      {U'گ', U'ك'}, {U'ک', U'ك'},  // gaf, keheh
      {U'أ', U'ا'}, {U'إ', U'ا'},  // alef with hamza above/below
      {U'آ', U'ا'}, {U'ٱ', U'ا'},  // alef with madda, alef wasla
  };
  return m;
}

inline const EmoticonMap& default_emoticon_map() {
  static const EmoticonMap m{
      {":)", "\U0001F642"},  {":-)", "\U0001F642"}, {"(:", "\U0001F642"},
      {":))", "\U0001F604"}, {"^^", "\U0001F60A"},  {"^_^", "\U0001F60A"},
      {":(", "\U0001F641"},  {":-(", "\U0001F641"}, {"):", "\U0001F641"},
      {":((", "\U0001F622"}, {":'(", "\U0001F622"}, {";)", "\U0001F609"},
      {";-)", "\U0001F609"}, {":*", "\U0001F618"},  {":-*", "\U0001F618"},
      {":|", "\U0001F610"},  {":/", "\U0001F615"},  {"-_-", "\U0001F611"},
      {":@", "\U0001F620"},  {">:(", "\U0001F621"},
  };
  return m;
}

struct PipelineConfig {
  std::set<std::string> stop_words;
  EmoticonMap emoticon_map = default_emoticon_map();
  LetterMap letter_map = default_letter_map();
  int min_token_len = 2;
  std::vector<Step> steps = default_steps();

  void validate() const {
    if (min_token_len < 1) throw Error("min_token_len must be >= 1");
    std::set<Step> seen;
    for (Step s : steps) {
      if (!seen.insert(s).second) throw Error("duplicate pipeline step " + std::string(to_string(s)));
    }
    for (const auto& [key, emoji] : emoticon_map) {
      if (key.empty()) throw Error("empty emoticon key");
      for (char32_t c : unicode::decode(key)) {
        if (!unicode::is_punctuation(c)) {
          throw Error("emoticon key \"" + key + "\" must be pure punctuation");
        }
      }
      for (char32_t c : unicode::decode(emoji)) {
        if (!unicode::is_emoji(c)) throw Error("emoticon target for \"" + key + "\" is not an emoji");
      }
    }
    for (const auto& [from, to] : letter_map) {
      if (letter_map.count(to)) throw Error("letter map is not idempotent");
    }
  }
};

// --- single-purpose transforms ---------------------------------------------

namespace detail {

inline bool starts_with_ci(std::u32string_view s, std::size_t i, std::string_view prefix) {
  if (s.size() - i < prefix.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    char32_t c = s[i + k];
    if (c >= U'A' && c <= U'Z') c = c - U'A' + U'a';
    if (c != static_cast<unsigned char>(prefix[k])) return false;
  }
  return true;
}

inline bool is_url_start(std::u32string_view s, std::size_t i) {
  if (starts_with_ci(s, i, "www.")) {
    return i == 0 || unicode::is_whitespace(s[i - 1]) || unicode::is_punctuation(s[i - 1]);
  }
  // scheme "://" with scheme = [A-Za-z][A-Za-z0-9+.-]*
  if (!unicode::is_ascii_letter(s[i])) return false;
  if (i > 0 && (unicode::is_ascii_letter(s[i - 1]) || unicode::is_ascii_digit(s[i - 1]))) return false;
  std::size_t j = i;
  while (j < s.size() && (unicode::is_ascii_letter(s[j]) || unicode::is_ascii_digit(s[j]) ||
                          s[j] == U'+' || s[j] == U'.' || s[j] == U'-'))
    ++j;
  return j + 2 < s.size() && s[j] == U':' && s[j + 1] == U'/' && s[j + 2] == U'/';
}

inline std::u32string collapse(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char32_t c : s) {
    if (unicode::is_whitespace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(U' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace detail

// Deletes scheme://... and www.... tokens up to the next whitespace.
inline std::string remove_urls(std::string_view text) {
  const std::u32string s = unicode::decode(text);
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (detail::is_url_start(s, i)) {
      while (i < s.size() && !unicode::is_whitespace(s[i])) ++i;
      continue;
    }
    out.push_back(s[i++]);
  }
  return unicode::encode(out);
}

// Runs of whitespace become one ASCII space; leading/trailing whitespace goes.
inline std::string collapse_whitespace(std::string_view text) {
  return unicode::encode(detail::collapse(unicode::decode(text)));
}

template <typename Pred>
std::string remove_if(std::string_view text, Pred&& pred) {
  std::u32string s = unicode::decode(text);
  std::erase_if(s, pred);
  return unicode::encode(s);
}

// Latin letters and any other code point that is not Arabic script, a digit,
// whitespace or emoji. Punctuation is left to its own step.
inline bool is_foreign(char32_t c) {
  return !(unicode::is_arabic_letter(c) || unicode::is_arabic_diacritic(c) ||
           unicode::arabic_digit_value(c) >= 0 || unicode::is_ascii_digit(c) ||
           unicode::is_whitespace(c) || unicode::is_emoji(c) || unicode::is_punctuation(c));
}

inline std::string remove_latin(std::string_view text) { return remove_if(text, is_foreign); }

inline std::string remove_digits(std::string_view text) {
  return remove_if(text, [](char32_t c) { return unicode::is_ascii_digit(c); });
}

inline std::string remove_punctuation(std::string_view text) {
  return remove_if(text, [](char32_t c) { return unicode::is_punctuation(c); });
}

inline std::string remove_diacritics(std::string_view text) {
  return remove_if(text, [](char32_t c) { return unicode::is_arabic_diacritic(c); });
}

inline std::string normalize_digits(std::string_view text) {
  std::u32string s = unicode::decode(text);
  for (char32_t& c : s) {
    if (const int v = unicode::arabic_digit_value(c); v >= 0) c = U'0' + static_cast<char32_t>(v);
  }
  return unicode::encode(s);
}

inline std::string normalize_letters(std::string_view text, const LetterMap& map = default_letter_map()) {
  std::u32string s = unicode::decode(text);
  for (char32_t& c : s) {
    if (auto it = map.find(c); it != map.end()) c = it->second;
  }
  return unicode::encode(s);
}

// URLs, Latin characters (and other foreign script), ASCII digits, extra
// whitespace.
inline std::string strip_noise(std::string_view text) {
  return collapse_whitespace(remove_digits(remove_latin(remove_urls(text))));
}

// Letter unification, Arabic-Indic digits to ASCII, diacritics removed.
inline std::string normalize_arabic(std::string_view text, const LetterMap& map = default_letter_map()) {
  return remove_diacritics(normalize_letters(normalize_digits(text), map));
}

// Leftmost-longest replacement of emoticon keys; everything else untouched.
inline std::string map_emoticons(std::string_view text, const EmoticonMap& map = default_emoticon_map()) {
  if (map.empty()) return std::string(text);
  std::size_t max_key = 0;
  for (const auto& [k, v] : map) max_key = std::max(max_key, k.size());
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    bool hit = false;
    for (std::size_t len = std::min(max_key, text.size() - i); len > 0; --len) {
      if (auto it = map.find(std::string(text.substr(i, len))); it != map.end()) {
        out += it->second;
        i += len;
        hit = true;
        break;
      }
    }
    if (!hit) out.push_back(text[i++]);
  }
  return out;
}

// Drops whitespace tokens whose normalize_arabic form equals that of a stop
// word. Surviving tokens are rejoined with single spaces.
inline std::string remove_stopwords(std::string_view text, const std::set<std::string>& stop_words,
                                    const LetterMap& map = default_letter_map()) {
  auto tokens = unicode::split_whitespace(text);
  if (stop_words.empty()) return unicode::join(tokens);
  std::unordered_set<std::string> keys;
  for (const auto& w : stop_words) keys.insert(normalize_arabic(w, map));
  std::erase_if(tokens, [&](const std::string& t) { return keys.count(normalize_arabic(t, map)) > 0; });
  return unicode::join(tokens);
}

// Any run of one repeated code point becomes a single occurrence.
inline std::string squeeze_repeats(std::string_view text) {
  std::u32string s = unicode::decode(text);
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return unicode::encode(s);
}

inline bool is_emoji_token(std::u32string_view token) {
  return !token.empty() && std::all_of(token.begin(), token.end(), unicode::is_emoji);
}

// Drops tokens shorter than min_len code points. Tokens made only of emoji
// are kept whatever their length.
inline std::string remove_short_tokens(std::string_view text, int min_len = 2) {
  std::vector<std::string> kept;
  for (auto& t : unicode::split_whitespace(text)) {
    const std::u32string cps = unicode::decode(t);
    if (static_cast<int>(cps.size()) >= min_len || is_emoji_token(cps)) kept.push_back(std::move(t));
  }
  return unicode::join(kept);
}

// Punctuation removal (emoji exempt), repeated-character squeeze,
// short-token removal.
inline std::string dedup_and_filter(std::string_view text, int min_token_len = 2) {
  return remove_short_tokens(collapse_whitespace(squeeze_repeats(remove_punctuation(text))),
                             min_token_len);
}

// --- pipeline ----------------------------------------------------------------

class Pipeline {
 public:
  explicit Pipeline(PipelineConfig config = {}) : config_(std::move(config)) {
    config_.validate();
    for (const auto& w : config_.stop_words) stop_keys_.insert(normalize_arabic(w, config_.letter_map));
  }

  const PipelineConfig& config() const { return config_; }

  std::string apply_step(Step step, std::string_view text) const {
    switch (step) {
      case Step::remove_urls: return remove_urls(text);
      case Step::remove_stopwords: return drop_stopwords(text);
      case Step::map_emoticons: return map_emoticons(text, config_.emoticon_map);
      case Step::normalize_digits: return normalize_digits(text);
      case Step::normalize_letters: return normalize_letters(text, config_.letter_map);
      case Step::remove_diacritics: return remove_diacritics(text);
      case Step::remove_punctuation: return remove_punctuation(text);
      case Step::squeeze_repeats: return squeeze_repeats(text);
      case Step::collapse_whitespace: return collapse_whitespace(text);
      case Step::remove_latin: return remove_latin(text);
      case Step::remove_digits: return remove_digits(text);
      case Step::remove_short_tokens: return remove_short_tokens(text, config_.min_token_len);
    }
    return std::string(text);
  }

  // One pass over the configured steps, in order.
  std::string apply_once(std::string_view text) const {
    std::string cur(text);
    for (Step s : config_.steps) cur = apply_step(s, cur);
    return cur;
  }

  // Repeats the ordered pass until the text stops changing. Ordinary input
  // settles after the first pass; a second one is only needed when a late
  // step exposes work for an early one (a Latin letter between two equal
  // Arabic letters, a token that becomes a stop word once squeezed).
  std::string apply(std::string_view text) const {
    std::string cur = apply_once(text);
    for (int pass = 0; pass < kMaxPasses; ++pass) {
      std::string next = apply_once(cur);
      if (next == cur) break;
      cur = std::move(next);
    }
    return cur;
  }

  std::string operator()(std::string_view text) const { return apply(text); }

 private:
  static constexpr int kMaxPasses = 64;

  std::string drop_stopwords(std::string_view text) const {
    auto tokens = unicode::split_whitespace(text);
    if (!stop_keys_.empty()) {
      std::erase_if(tokens, [&](const std::string& t) {
        return stop_keys_.count(normalize_arabic(t, config_.letter_map)) > 0;
      });
    }
    return unicode::join(tokens);
  }

  PipelineConfig config_;
  std::unordered_set<std::string> stop_keys_;
};

inline std::string apply_pipeline(std::string_view text, const PipelineConfig& config) {
  return Pipeline(config).apply(text);
}

// --- resource files ----------------------------------------------------------

// One token per line; blank lines and '#' comments skipped.
inline std::set<std::string> parse_stopwords(std::string_view text) {
  std::set<std::string> words;
  io::for_each_line(text, [&](std::string_view line, std::size_t, bool) {
    std::string w = collapse_whitespace(line);
    if (w.empty() || w.front() == '#') return;
    words.insert(std::move(w));
  });
  return words;
}

inline std::set<std::string> load_stopwords(const std::filesystem::path& path) {
  return parse_stopwords(io::read_file(path));
}

// key<TAB>emoji per line.
inline EmoticonMap parse_emoticons(std::string_view text) {
  EmoticonMap map;
  io::for_each_line(text, [&](std::string_view line, std::size_t n, bool) {
    if (line.empty() || line.front() == '#') return;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0 || tab + 1 >= line.size()) {
      throw Error("malformed emoticon line " + std::to_string(n));
    }
    map[std::string(line.substr(0, tab))] = std::string(line.substr(tab + 1));
  });
  return map;
}

inline EmoticonMap load_emoticons(const std::filesystem::path& path) {
  return parse_emoticons(io::read_file(path));
}

}  // namespace dzhate::textprep
