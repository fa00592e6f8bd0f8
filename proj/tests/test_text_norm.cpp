#include <doctest.h>

#include <random>

#include "spatial/annotator.hpp"
#include "spatial/error.hpp"
#include "spatial/lexicon.hpp"
#include "spatial/text_norm.hpp"
#include "spatial/utf8.hpp"
#include "test_util.hpp"

using namespace spatial;
using spatial::testing::random_text;
using spatial::testing::slice;

TEST_CASE("utf8 decode/encode round-trips and replaces invalid bytes") {
  const std::string s = "جلست على";
  CHECK(utf8::encode(utf8::decode(s)) == s);
  CHECK(utf8::length(s) == 8);
  const auto bad = utf8::decode(std::string("a\xff" "b"));
  REQUIRE(bad.size() == 3);
  CHECK(bad[1] == U'�');
}

TEST_CASE("normalize folds letters and drops diacritics") {
  CHECK(normalize_form("أمام") == "امام");
  CHECK(normalize_form("إلى") == "الي");
  CHECK(normalize_form("آتين") == "اتين");
  CHECK(normalize_form("صعدتُ") == "صعدت");
  CHECK(normalize_form("مقدّمة") == "مقدمة");
  CHECK(normalize_form("طويلاً") == "طويلا");
  CHECK(normalize_form("جـــميل") == "جميل");
  CHECK(normalize_form("کتاب") == "كتاب");
  CHECK(normalize_form("مدينة") == "مدينة");  // ta marbuta kept
  CHECK(normalize_form("") == "");
}

TEST_CASE("alef maqsura folds to yeh, so على normalizes to a fixed point spelled with yeh") {
  const auto once = normalize_form("على");
  CHECK(once == "علي");
  CHECK(normalize_form(once) == once);
}

TEST_CASE("offset map of أمام is the identity") {
  const auto n = normalize(std::string_view("أمام"));
  CHECK(n.utf8() == "امام");
  CHECK(n.to_original == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("offset map skips dropped diacritics") {
  const auto n = normalize(std::string_view("صَعِدَ"));
  CHECK(n.utf8() == "صعد");
  CHECK(n.to_original == std::vector<std::size_t>{0, 2, 4});
}

TEST_CASE("variant table folds سين to سان") {
  const auto& v = default_variants();
  CHECK(normalize_form("سين جيرمان", v) == normalize_form("سان جيرمان", v));
  CHECK(normalize_form("سين جيرمان", v) == "سان جيرمان");
  // Whole words only.
  CHECK(normalize_form("سينما", v) == "سينما");
}

TEST_CASE("variant table parsing and validation") {
  const auto t = VariantTable::parse("# comment\nسين\tسان\n\nباريز\tباريس\n");
  CHECK(t.size() == 2);
  CHECK_THROWS_AS(VariantTable::parse("سين\n"), ParseError);
  CHECK_THROWS_AS(VariantTable::parse("سين جيرمان\tسان\n"), ParseError);
  // Chains would make normalization non-idempotent.
  CHECK_THROWS_AS(VariantTable::parse("ا1\tب1\nب1\tج1\n"), ParseError);
  try {
    VariantTable::parse("ok\tfine\nbroken\n", "v.tsv");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.origin() == "v.tsv");
  }
}

TEST_CASE("property: normalization is idempotent") {
  std::mt19937 rng(7);
  const auto& v = default_variants();
  for (int i = 0; i < 3000; ++i) {
    auto text = random_text(rng, 24);
    if (i % 5 == 0) text += " سين";
    const auto once = normalize(std::string_view(text), v);
    const auto twice = normalize(std::u32string_view(once.text), v);
    REQUIRE(twice.text == once.text);
  }
}

TEST_CASE("property: offset map is total, increasing and in range") {
  std::mt19937 rng(11);
  for (int i = 0; i < 3000; ++i) {
    const auto text = random_text(rng, 24);
    const auto original = utf8::decode(text);
    const auto n = normalize(std::u32string_view(original));
    REQUIRE(n.to_original.size() == n.text.size());
    for (std::size_t k = 0; k < n.text.size(); ++k) {
      REQUIRE(n.to_original[k] < original.size());
      if (k > 0) REQUIRE(n.to_original[k] > n.to_original[k - 1]);
      REQUIRE(fold_char(original[n.to_original[k]]) == n.text[k]);
    }
  }
}

TEST_CASE("tokenize detaches ب and ال from بالطائرة") {
  const auto toks = tokenize("بالطائرة");
  REQUIRE(toks.size() == 1);
  const auto& t = toks[0];
  REQUIRE(t.proclitics.size() == 2);
  CHECK(t.proclitics[0].kind == CliticKind::Preposition);
  CHECK(t.proclitics[0].form == "ب");
  CHECK(t.proclitics[1].kind == CliticKind::Article);
  CHECK(t.proclitics[1].form == "ال");
  CHECK(t.stem == "طائرة");
  CHECK(t.stem_span == OffsetSpan{3, 8});
}

TEST_CASE("tokenize detaches coordination from وعن with the lexicon") {
  const auto toks = tokenize("وعن بيت اللواريه", seed_lexicon());
  REQUIRE(toks.size() == 3);
  REQUIRE(toks[0].proclitics.size() == 1);
  CHECK(toks[0].proclitics[0].kind == CliticKind::Coordination);
  CHECK(toks[0].stem == "عن");
  // Known words are never split: بيت is not ب+يت, اللواريه keeps its ال.
  CHECK(toks[1].proclitics.empty());
  CHECK(toks[2].proclitics.empty());
  CHECK(toks[2].stem == "اللواريه");
}

TEST_CASE("tokenize على المقعد") {
  const auto toks = tokenize("على المقعد");
  REQUIRE(toks.size() == 2);
  CHECK(toks[0].surface == "على");
  CHECK(toks[0].proclitics.empty());
  REQUIRE(toks[1].proclitics.size() == 1);
  CHECK(toks[1].proclitics[0].kind == CliticKind::Article);
  CHECK(toks[1].stem == "مقعد");
}

TEST_CASE("tokenize handles the assimilated article لل") {
  const auto toks = tokenize("للمطر");
  REQUIRE(toks.size() == 1);
  REQUIRE(toks[0].proclitics.size() == 2);
  CHECK(toks[0].proclitics[0].form == "ل");
  CHECK(toks[0].proclitics[1].form == "ال");
  CHECK(toks[0].stem == "مطر");
}

TEST_CASE("unknown words without the article stay whole") {
  const auto toks = tokenize("برغبة لورا", seed_lexicon());
  REQUIRE(toks.size() == 2);
  CHECK(toks[0].proclitics.empty());
  CHECK(toks[1].proclitics.empty());
}

TEST_CASE("empty and separator-only input") {
  CHECK(tokenize("").empty());
  CHECK(tokenize(" ،. \n").empty());
}

TEST_CASE("segments split off prepositional proclitics only") {
  const auto toks = tokenize("وبالباخرة", seed_lexicon());
  const auto segs = segment(toks);
  REQUIRE(segs.size() == 2);
  CHECK(segs[0].is_proclitic);
  CHECK(segs[0].form == "ب");
  CHECK(segs[0].coordinated);
  CHECK(segs[0].span == OffsetSpan{1, 2});
  CHECK(segs[1].form == "باخرة");
  CHECK(segs[1].has_article);
  CHECK(segs[1].span == OffsetSpan{2, 9});
}

// Text between tokens: separators, or word material that normalizes away
// entirely (a lone diacritic or joiner).
bool skippable(char32_t c) { return !is_word_char(c) || fold_char(c) == U'\0'; }

TEST_CASE("property: token offsets round-trip and clitics partition the token") {
  std::mt19937 rng(23);
  const auto& lex = seed_lexicon();
  for (int i = 0; i < 3000; ++i) {
    const auto text = random_text(rng, 30);
    const auto original = utf8::decode(text);
    const auto toks = tokenize(text, lex);
    REQUIRE(toks == tokenize(text, lex));  // deterministic

    std::u32string rebuilt;
    std::size_t pos = 0;
    for (const auto& t : toks) {
      REQUIRE(t.span.start >= pos);
      REQUIRE(t.span.start < t.span.end);
      REQUIRE(t.span.end <= original.size());
      for (std::size_t k = pos; k < t.span.start; ++k) REQUIRE(skippable(original[k]));
      rebuilt += original.substr(pos, t.span.start - pos);
      REQUIRE(slice(text, t.span.start, t.span.end) == t.surface);
      rebuilt += utf8::decode(t.surface);
      pos = t.span.end;

      std::size_t at = t.span.start;
      for (const auto& p : t.proclitics) {
        REQUIRE(p.span.start == at);
        REQUIRE(p.span.end > p.span.start);
        at = p.span.end;
      }
      REQUIRE(t.stem_span.start == at);
      REQUIRE(t.stem_span.end == t.span.end);
      REQUIRE(normalize_form(t.norm) == t.norm);
    }
    for (std::size_t k = pos; k < original.size(); ++k) REQUIRE(skippable(original[k]));
    rebuilt += original.substr(pos);
    REQUIRE(rebuilt == original);
  }
}
