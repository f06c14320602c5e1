#include <gtest/gtest.h>

#include "dzhate/autolabel.hpp"
#include "support.hpp"

using namespace dzhate;
using namespace dzhate::autolabel;

namespace {

Document cleaned(std::string id, std::string clean) {
  auto d = Document::make(std::move(id), clean);
  d.clean_text = std::move(clean);
  return d;
}

}  // namespace

TEST(Lexicon, DedupAndNormalize) {
  const auto lex = parse_lexicon("كلب\n# comment\n\nحمار\nكلب\n");
  EXPECT_EQ(lex.size(), 2u);
  const auto shadda = parse_lexicon("مكّار\n");
  EXPECT_TRUE(shadda.contains("مكار"));
  EXPECT_FALSE(shadda.contains("مكّار"));
}

TEST(Lexicon, EmptyIsError) {
  try {
    parse_lexicon("# only comments\n\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "empty lexicon");
  }
}

TEST(Lexicon, BundledSeedList) {
  const auto lex = load_lexicon(testing_support::repo_data() / "seed_lexicon.txt");
  EXPECT_GE(lex.size(), 30u);
  EXPECT_TRUE(lex.contains("كلب"));
}

TEST(AutoAnnotate, TokenMatching) {
  const auto lex = parse_lexicon("كلب\n");
  const Corpus c({cleaned("a", "يا كلب روح"), cleaned("b", "صباح الخير"), cleaned("c", "كلبهم جا")});
  const Corpus out = auto_annotate(c, lex);
  EXPECT_EQ(out[0].label, Label::hateful);
  EXPECT_EQ(out[1].label, Label::non_hateful);
  EXPECT_EQ(out[2].label, Label::non_hateful);
  for (const auto& d : out) EXPECT_EQ(d.label_source, LabelSource::automatic);
  EXPECT_FALSE(c[0].label.has_value()) << "input must stay unmodified";
}

TEST(AutoAnnotate, SubstringModeCatchesAffixes) {
  const auto lex = parse_lexicon("كلب\n");
  const Corpus c({cleaned("c", "كلبهم جا")});
  EXPECT_EQ(auto_annotate(c, lex, MatchMode::substring)[0].label, Label::hateful);
}

TEST(AutoAnnotate, MissingCleanTextListsIds) {
  const auto lex = parse_lexicon("كلب\n");
  const Corpus c({Document::make("x1", "نص"), cleaned("x2", "نص"), Document::make("x3", "نص")});
  try {
    auto_annotate(c, lex);
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "documents without clean_text: x1,x3");
  }
}

TEST(Remap, ExternalLabels) {
  EXPECT_EQ(remap_external(std::vector<ExternalLabel>{ExternalLabel::offensive, ExternalLabel::abusive,
                                                      ExternalLabel::normal}),
            (std::vector<Label>{Label::hateful, Label::hateful, Label::non_hateful}));
  EXPECT_TRUE(remap_external(std::vector<std::string>{}).empty());
  EXPECT_THROW(remap_external(std::vector<std::string>{"hateful"}), Error);
  EXPECT_EQ(remap_external(std::vector<std::string>{"Offensive", "NORMAL"}),
            (std::vector<Label>{Label::hateful, Label::non_hateful}));
}

TEST(Remap, CountsPreserved) {
  std::vector<ExternalLabel> in;
  in.insert(in.end(), 3227, ExternalLabel::offensive);
  in.insert(in.end(), 1334, ExternalLabel::abusive);
  in.insert(in.end(), 2000, ExternalLabel::normal);
  const auto out = remap_external(in);
  EXPECT_EQ(std::count(out.begin(), out.end(), Label::hateful), 4561);
  EXPECT_EQ(out.size(), in.size());
}

TEST(Highlight, Spans) {
  const auto lex = parse_lexicon("كلب\n");
  EXPECT_EQ(highlight_matches("يا كلب روح", lex), (std::vector<Span>{{3, 6}}));
  EXPECT_TRUE(highlight_matches("صباح الخير", lex).empty());
  EXPECT_EQ(highlight_matches("كلب و كلب", lex), (std::vector<Span>{{0, 3}, {6, 9}}));
  EXPECT_THROW(highlight_matches(Document::make("a", "x"), lex), Error);
}
