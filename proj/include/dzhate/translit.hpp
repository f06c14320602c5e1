#pragma once

// Rule-driven Arabizi -> Arabic script transliteration.
//
// A word is a maximal run of ASCII letters/digits. Each word is scanned left
// to right; at every position the longest applicable pattern wins, with
// position-specific rules preferred over `any` at equal length and file order
// breaking the remaining ties. Characters outside ASCII letters/digits
// (Arabic script, punctuation, emoji, whitespace) pass through unchanged.

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dzhate/error.hpp"
#include "dzhate/io.hpp"
#include "dzhate/script.hpp"
#include "dzhate/unicode.hpp"

namespace dzhate::translit {

enum class Position { any, word_initial, word_final };

inline constexpr std::string_view to_string(Position p) {
  switch (p) {
    case Position::any: return "any";
    case Position::word_initial: return "word_initial";
    case Position::word_final: return "word_final";
  }
  return "any";
}

struct Rule {
  std::string latin;
  std::string arabic;  // may be empty: the pattern is consumed silently
  Position position = Position::any;
};

struct RuleTable {
  std::vector<Rule> rules;
  bool case_insensitive = true;
  // Collapse doubled Latin letters ("bezzaf" -> "bezaf") before matching.
  bool squeeze_doubles = true;
  // A standalone word whose output is exactly the article "ال" is glued onto
  // the following word ("el aliha" -> "الاليها").
  bool fuse_article = true;

  void validate() const {
    if (rules.empty()) throw Error("empty rule table");
    for (const auto& r : rules) {
      if (r.latin.empty()) throw Error("rule with empty pattern");
    }
  }
};

// Default Algerian Arabizi conventions. Vowels: a is written as alef, i as
// yeh, o/u/ou as waw; e is dropped except word-initially where it carries the
// alef of the article.
inline const RuleTable& default_rules() {
  static const RuleTable table = [] {
    RuleTable t;
    t.rules = {
        // digit conventions
        {"2", "ء"}, {"3", "ع"}, {"5", "خ"}, {"6", "ط"}, {"7", "ح"}, {"9", "ق"},
        // digraphs
        {"ch", "ش"}, {"sh", "ش"}, {"kh", "خ"}, {"gh", "غ"}, {"th", "ث"}, {"dh", "ذ"},
        {"ou", "و"},
        // consonants
        {"b", "ب"}, {"c", "ك"}, {"d", "د"}, {"f", "ف"}, {"g", "ق"}, {"h", "ه"}, {"j", "ج"},
        {"k", "ك"}, {"l", "ل"}, {"m", "م"}, {"n", "ن"}, {"p", "ب"}, {"q", "ق"}, {"r", "ر"},
        {"s", "س"}, {"t", "ت"}, {"v", "ف"}, {"w", "و"}, {"x", "كس"}, {"y", "ي"}, {"z", "ز"},
        // vowels
        {"a", "ا"}, {"i", "ي"}, {"o", "و"}, {"u", "و"},
        {"e", "ا", Position::word_initial}, {"e", ""},
    };
    return t;
  }();
  return table;
}

inline std::optional<Position> parse_position(std::string_view s) {
  if (s.empty() || s == "any") return Position::any;
  if (s == "word_initial" || s == "initial") return Position::word_initial;
  if (s == "word_final" || s == "final") return Position::word_final;
  return std::nullopt;
}

// latin<TAB>arabic<TAB>position per line, '#' comments. The arabic field may
// be empty; the position field may be omitted. Table flags are set with
// directive lines of the form "#!case_insensitive=false".
inline RuleTable parse_rules(std::string_view text) {
  RuleTable t;
  io::for_each_line(text, [&](std::string_view line, std::size_t n, bool) {
    if (line.starts_with("#!")) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw Error("malformed directive at line " + std::to_string(n));
      const auto key = line.substr(2, eq - 2);
      const auto value = line.substr(eq + 1);
      if (value != "true" && value != "false") {
        throw Error("directive value must be true or false at line " + std::to_string(n));
      }
      const bool on = value == "true";
      if (key == "case_insensitive") {
        t.case_insensitive = on;
      } else if (key == "squeeze_doubles") {
        t.squeeze_doubles = on;
      } else if (key == "fuse_article") {
        t.fuse_article = on;
      } else {
        throw Error("unknown directive at line " + std::to_string(n));
      }
      return;
    }
    if (line.empty() || line.front() == '#') return;
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab == std::string_view::npos ? line.npos : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (fields.size() < 2 || fields.size() > 3 || fields[0].empty()) {
      throw Error("malformed rule at line " + std::to_string(n));
    }
    const auto pos = parse_position(fields.size() == 3 ? fields[2] : "any");
    if (!pos) throw Error("unknown rule position at line " + std::to_string(n));
    t.rules.push_back({std::string(fields[0]), std::string(fields[1]), *pos});
  });
  t.validate();
  return t;
}

inline RuleTable load_rules(const std::filesystem::path& path) {
  return parse_rules(io::read_file(path));
}

struct Result {
  std::string text;
  std::size_t unmatched = 0;  // ASCII letters/digits no rule covered; dropped
};

namespace detail {

inline bool is_word_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return unicode::is_ascii_letter(u) || unicode::is_ascii_digit(u);
}

inline char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

inline std::string transliterate_word(std::string_view word, const RuleTable& table,
                                      std::size_t& unmatched) {
  std::string out;
  std::size_t i = 0;
  while (i < word.size()) {
    const Rule* best = nullptr;
    for (const auto& r : table.rules) {
      const std::size_t len = r.latin.size();
      if (len > word.size() - i) continue;
      bool match = true;
      for (std::size_t k = 0; k < len; ++k) {
        const char a = table.case_insensitive ? lower(word[i + k]) : word[i + k];
        const char b = table.case_insensitive ? lower(r.latin[k]) : r.latin[k];
        if (a != b) {
          match = false;
          break;
        }
      }
      if (!match) continue;
      if (r.position == Position::word_initial && i != 0) continue;
      if (r.position == Position::word_final && i + len != word.size()) continue;
      if (!best || len > best->latin.size() ||
          (len == best->latin.size() && best->position == Position::any && r.position != Position::any)) {
        best = &r;
      }
    }
    if (best) {
      out += best->arabic;
      i += best->latin.size();
    } else {
      ++unmatched;
      ++i;
    }
  }
  return out;
}

}  // namespace detail

inline Result transliterate_any(std::string_view text, const RuleTable& table) {
  table.validate();
  // hyphens and apostrophes are deleted before matching
  std::string prepared;
  prepared.reserve(text.size());
  for (char c : text) {
    if (c == '-' || c == '\'') continue;
    if (table.squeeze_doubles && unicode::is_ascii_letter(static_cast<unsigned char>(c)) &&
        !prepared.empty() && detail::lower(prepared.back()) == detail::lower(c)) {
      continue;
    }
    prepared.push_back(c);
  }

  Result result;
  std::string& out = result.text;
  bool glue_next = false;
  std::size_t i = 0;
  while (i < prepared.size()) {
    if (!detail::is_word_char(prepared[i])) {
      const char c = prepared[i++];
      if (glue_next && c == ' ') continue;
      glue_next = false;
      out.push_back(c);
      continue;
    }
    std::size_t j = i;
    while (j < prepared.size() && detail::is_word_char(prepared[j])) ++j;
    const bool standalone = (i == 0 || prepared[i - 1] == ' ') &&
                            (j == prepared.size() || prepared[j] == ' ');
    std::string word = detail::transliterate_word(std::string_view(prepared).substr(i, j - i), table,
                                                  result.unmatched);
    glue_next = table.fuse_article && standalone && word == "ال" && j < prepared.size();
    out += word;
    i = j;
  }
  return result;
}

// Arabic-script input is returned unchanged; anything else is transliterated.
inline Result transliterate(std::string_view text, const RuleTable& table = default_rules()) {
  table.validate();
  if (detect_script(text) == Script::arabic) return {std::string(text), 0};
  return transliterate_any(text, table);
}

}  // namespace dzhate::translit
