#pragma once

#include <cstddef>
#include <string_view>

#include "dzhate/unicode.hpp"

namespace dzhate {

enum class Script { arabic, latin, mixed, empty };

inline constexpr std::string_view to_string(Script s) {
  switch (s) {
    case Script::arabic: return "arabic";
    case Script::latin: return "latin";
    case Script::mixed: return "mixed";
    case Script::empty: return "empty";
  }
  return "empty";
}

// Share of letters that must belong to one block for a text to be classed as
// that block. Digits, punctuation and emoji are not letters.
inline constexpr double kDefaultScriptThreshold = 0.9;

inline Script detect_script(std::string_view text, double threshold = kDefaultScriptThreshold) {
  std::size_t arabic = 0;
  std::size_t latin = 0;
  for (char32_t c : unicode::decode(text)) {
    if (unicode::is_arabic_letter(c)) {
      ++arabic;
    } else if (unicode::is_latin_letter(c)) {
      ++latin;
    }
  }
  const std::size_t total = arabic + latin;
  if (total == 0) return Script::empty;
  const double share = static_cast<double>(arabic) / static_cast<double>(total);
  if (share >= threshold) return Script::arabic;
  if (1.0 - share >= threshold) return Script::latin;
  return Script::mixed;
}

}  // namespace dzhate
