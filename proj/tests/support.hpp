#pragma once

// Helpers shared by the unit tests: fixture paths, scratch directories,
// random text generators and small reference implementations.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "dzhate/corpus.hpp"
#include "dzhate/unicode.hpp"

namespace testing_support {

inline std::filesystem::path repo_data() { return DZHATE_DATA_DIR; }
inline std::filesystem::path fixture(std::string_view name) { return repo_data() / "fixtures" / name; }

// Fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(std::string_view tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("dzhate_" + std::string(tag) + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Code point edit distance.
inline std::size_t levenshtein(std::string_view a, std::string_view b) {
  const auto x = dzhate::unicode::decode(a);
  const auto y = dzhate::unicode::decode(b);
  std::vector<std::size_t> prev(y.size() + 1), cur(y.size() + 1);
  for (std::size_t j = 0; j <= y.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= y.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[y.size()];
}

// Mixed social-media-like strings: Arabic letters and diacritics, Latin,
// digits of both kinds, punctuation, emoticons, URLs, emoji, stray
// combining marks and odd whitespace.
inline std::string random_mixed_text(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces = {
      "ا", "ب", "ت", "ث", "ج", "ح", "خ", "د", "ذ", "ر", "ز", "س", "ش", "ص", "ض", "ط", "ظ", "ع", "غ",
      "ف", "ق", "ك", "ل", "م", "ن", "ه", "و", "ي", "ى", "ة", "أ", "إ", "آ", "گ", "ک", "ی", "ء", "ؤ", "ئ",
      "َ", "ُ", "ِ", "ّ", "ْ", "ً", "ٌ", "ٍ", "ـ", "٠", "١", "٢", "٩", "۴", "0", "7", "3", "a", "b", "Z", "é",
      "ß", ".", ",", "!", "?", "،", "؟", "؛", "…", "«", "»", ":)", ":(", ":-)", ";)", "^^", "-_-", ">:(",
      " ", " ", " ", "  ", "\t", "\n", " ", "‍", "🙂", "😂", "❤", "❤️", "👍🏽",
      "http://x.dz/a?b=1", "www.site.com", "https://t.co/Ab3", "هههههه", "واااو", "lol", "\xC3", "\xFF",
      "من", "في", "راني", "ﻻ", "ﷺ"};
  std::uniform_int_distribution<std::size_t> len(0, 40);
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::string s;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) s += pieces[pick(rng)];
  return s;
}

// Corpus with `ones` documents of label 1 and `n - ones` of label 0.
inline dzhate::Corpus labeled_corpus(std::size_t n, std::size_t ones, std::mt19937_64& rng) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<dzhate::Document> docs;
  for (std::size_t i = 0; i < n; ++i) {
    auto d = dzhate::Document::make("doc" + std::to_string(i), "نص " + std::to_string(i));
    d.set_label(order[i] < ones ? dzhate::Label::hateful : dzhate::Label::non_hateful,
                dzhate::LabelSource::manual);
    docs.push_back(std::move(d));
  }
  return dzhate::Corpus(std::move(docs), "generated");
}

}  // namespace testing_support
