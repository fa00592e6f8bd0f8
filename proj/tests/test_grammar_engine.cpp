#include <doctest.h>

#include <random>

#include "engine_oracle.hpp"
#include "spatial/error.hpp"
#include "spatial/grammar_engine.hpp"
#include "spatial/spatial_grammar.hpp"

using namespace spatial;

namespace {

const char* kDirGoal =
    "RULE dir_goal PRIO 40 : (verb=[VERB_MOTION])? trigger=[SENSE DIRECTIONAL.GOAL] site=[NOUN_SITE|PLACE_NAME] "
    "=> DIRECTIONAL.GOAL GUARD NEG_SCOPE\n";

ParseError compile_error(std::string_view src) {
  try {
    compile_rules(src, seed_lexicon(), default_map(), "r.dsl");
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error for: " << src);
  throw std::logic_error("unreachable");
}

std::string form_of(const std::vector<Segment>& segs, const SegmentRange& r) {
  std::string s;
  for (std::size_t i = r.begin; i < r.end; ++i) s += (s.empty() ? "" : " ") + segs[i].form;
  return s;
}

}  // namespace

TEST_CASE("a single rule compiles") {
  const auto g = compile_rules(kDirGoal, seed_lexicon(), default_map());
  REQUIRE(g.size() == 1);
  const auto& r = g.rules()[0];
  CHECK(r.name == "dir_goal");
  CHECK(r.priority == 40);
  CHECK(r.output == "DIRECTIONAL.GOAL");
  CHECK(r.guards == std::vector<std::string>{"NEG_SCOPE"});
  REQUIRE(r.atoms.size() == 3);
  CHECK(r.atoms[0].optional);
  CHECK(r.atoms[1].capture == std::optional<std::string>("trigger"));
}

TEST_CASE("empty and comment-only sources compile to an empty grammar") {
  CHECK(compile("", seed_lexicon(), default_map()).empty());
  CHECK(compile("# nothing here\n\n", seed_lexicon(), default_map()).empty());
}

TEST_CASE("two triggers are rejected") {
  const auto e = compile_error("RULE x PRIO 1 : trigger=[PREP] trigger=[PREP] => DIRECTIONAL.GOAL\n");
  CHECK(std::string(e.what()).find("trigger") != std::string::npos);
}

TEST_CASE("missing and optional trigger are rejected") {
  compile_error("RULE x PRIO 1 : site=[NOUN_SITE] => DIRECTIONAL.GOAL\n");
  compile_error("RULE x PRIO 1 : (trigger=[PREP])? => DIRECTIONAL.GOAL\n");
}

TEST_CASE("syntax errors carry line and column") {
  const auto e = compile_error(std::string(kDirGoal) + "\nRULE broken PRIO 1 trigger=[PREP] => DIRECTIONAL.GOAL\n");
  CHECK(e.line() == 3);
  CHECK(e.column() == 20);
  CHECK(e.origin() == "r.dsl");
}

TEST_CASE("semantic errors are reported") {
  const auto unknown_class = compile_error("RULE x PRIO 1 : trigger=[NOUN_SPACESHIP] => DIRECTIONAL.GOAL\n");
  CHECK(std::string(unknown_class.what()).find("NOUN_SPACESHIP") != std::string::npos);
  compile_error("RULE x PRIO 1 : trigger=[FLAG SHINY] => DIRECTIONAL.GOAL\n");
  const auto bad_path = compile_error("RULE x PRIO 1 : trigger=[PREP] => TOPOLOGICAL.BOGUS\n");
  CHECK(std::string(bad_path.what()).find("TOPOLOGICAL.BOGUS") != std::string::npos);
  compile_error("RULE x PRIO 1 : trigger=[SENSE TEMPORAL] => DIRECTIONAL.GOAL\n");
  const auto guard = compile_error("RULE x PRIO 1 : trigger=[PREP] => DIRECTIONAL.GOAL GUARD NOT_A_GUARD\n");
  CHECK(std::string(guard.what()).find("NOT_A_GUARD") != std::string::npos);
  compile_error("RULE x PRIO 1 : trigger=[PREP] => DIRECTIONAL.GOAL\nRULE x PRIO 2 : trigger=[PREP] => DIRECTIONAL.GOAL\n");
  compile_error("RULE x PRIO 1 : trigger=[PREP] GAP 6 [PREP] => DIRECTIONAL.GOAL\n");
  compile_error("RULE x PRIO 1 : other=[PREP] trigger=[PREP] => DIRECTIONAL.GOAL\n");
}

TEST_CASE("guard names are unchecked without a known-guard set") {
  CHECK_NOTHROW(compile("RULE x PRIO 1 : trigger=[PREP] => DIRECTIONAL.GOAL GUARD ANYTHING\n", seed_lexicon(),
                        default_map()));
}

TEST_CASE("apply finds the goal expression") {
  const auto g = compile_rules(kDirGoal, seed_lexicon(), default_map());
  const auto segs = segment(tokenize("اتجهت نحو بلدة مرسى", seed_lexicon()));
  const auto matches = apply(g, segs, seed_lexicon());
  REQUIRE(matches.size() == 1);
  const auto& m = matches[0];
  CHECK(m.rule == "dir_goal");
  CHECK(form_of(segs, m.trigger().range) == "نحو");
  REQUIRE(m.capture("site") != nullptr);
  CHECK(form_of(segs, m.capture("site")->range) == "بلدة مرسي");
  REQUIRE(m.capture("verb") != nullptr);
  CHECK(form_of(segs, m.capture("verb")->range) == "اتجهت");
}

TEST_CASE("equal priority prefers the longer match, then declaration order") {
  const char* src =
      "RULE short PRIO 50 : trigger=[LIT في] [NOUN_SITE] => TOPOLOGICAL.INCLUSION.CONTAINMENT\n"
      "RULE long PRIO 50 : trigger=[LIT في] [NOUN_SITE] [NOUN_SITE] => TOPOLOGICAL.INCLUSION.CONTAINMENT\n"
      "RULE twin PRIO 50 : trigger=[LIT في] [NOUN_SITE] [NOUN_SITE] => TOPOLOGICAL.SUPPORT\n";
  const auto g = compile(src, seed_lexicon(), default_map());
  const auto three = segment(tokenize("في بيت مدينة", seed_lexicon()));
  auto m = apply(g, three, seed_lexicon());
  REQUIRE(m.size() == 1);
  CHECK(m[0].rule == "long");
  CHECK(m[0].span == SegmentRange{0, 3});
  const auto two = segment(tokenize("في بيت", seed_lexicon()));
  m = apply(g, two, seed_lexicon());
  REQUIRE(m.size() == 1);
  CHECK(m[0].rule == "short");
}

TEST_CASE("higher priority wins over length") {
  const char* src =
      "RULE long PRIO 10 : trigger=[LIT في] [NOUN_SITE] [NOUN_SITE] => TOPOLOGICAL.INCLUSION.CONTAINMENT\n"
      "RULE short PRIO 20 : trigger=[LIT في] => TOPOLOGICAL.SUPPORT\n";
  const auto g = compile(src, seed_lexicon(), default_map());
  const auto m = apply(g, segment(tokenize("في بيت مدينة", seed_lexicon())), seed_lexicon());
  REQUIRE(m.size() == 1);
  CHECK(m[0].rule == "short");
}

TEST_CASE("apply on no segments yields nothing") {
  CHECK(apply(default_grammar(), {}, seed_lexicon()).empty());
}

TEST_CASE("gap atoms offer every length from the maximum down to zero") {
  PatternAtom gap;
  gap.gap = 3;
  const auto segs = segment(tokenize("في بيت مدينة", seed_lexicon()));
  const auto opts = atom_options(gap, segs, 1, seed_lexicon());
  REQUIRE(opts.size() == 3);
  CHECK(opts[0].first == 2);
  CHECK(opts[2].first == 0);
}

TEST_CASE("property: engine agrees with a brute-force matcher on all short sequences") {
  const auto res = spatial::testing::check_engine_equivalence(6);
  CHECK(res.sequences == 19531);
  CHECK(res.matches > 10000);
  CHECK_MESSAGE(res.mismatches == 0, "first mismatch: " << res.first_mismatch);
  CHECK(res.seconds < 10.0);
}

TEST_CASE("property: matches are ordered, non-overlapping in triggers, and captures lie in the span") {
  const auto& alpha = spatial::testing::toy_alphabet();
  const auto lex = Lexicon::parse(spatial::testing::toy_lexicon_tsv(), default_map());
  const auto g = compile(spatial::testing::toy_rules_dsl(), lex, default_map());
  std::mt19937 rng(5);
  for (int i = 0; i < 2000; ++i) {
    std::vector<Segment> segs(rng() % 12);
    for (std::size_t k = 0; k < segs.size(); ++k) segs[k].form = alpha[rng() % alpha.size()];
    const auto m = apply(g, segs, lex);
    std::size_t last_trigger_end = 0;
    for (const auto& x : m) {
      REQUIRE(x.trigger().range.begin >= last_trigger_end);
      last_trigger_end = x.trigger().range.end;
      for (const auto& [name, c] : x.captures) REQUIRE(x.span.contains(c.range));
      REQUIRE(x.span.end <= segs.size());
    }
    REQUIRE(apply(g, segs, lex) == m);
  }
}
