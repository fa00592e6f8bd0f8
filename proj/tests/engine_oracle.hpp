#pragma once

// Brute-force reference matcher for a fixed toy grammar. It enumerates every
// per-atom consumption vector and shares no code with the engine.

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spatial/grammar_engine.hpp"
#include "spatial/lexicon.hpp"
#include "spatial/semantic_map.hpp"

namespace spatial::testing {

struct ToyEntry {
  std::vector<std::string> words;
  std::string cls;
  std::vector<std::string> senses;
};

inline const std::vector<ToyEntry>& toy_entries() {
  static const std::vector<ToyEntry> e = {
      {{"علي"}, "PREP", {"TOPOLOGICAL.SUPPORT"}},
      {{"في"}, "PREP", {"TOPOLOGICAL.INCLUSION.CONTAINMENT"}},
      {{"وسط"}, "PREP", {"TOPOLOGICAL.INCLUSION.CONTAINMENT"}},
      {{"وسط"}, "NOUN_SITE", {}},
      {{"في", "وسط"}, "PREP_LOCUTION", {"TOPOLOGICAL.INCLUSION.CONTAINMENT"}},
      {{"بيت"}, "NOUN_SITE", {}},
      {{"سار"}, "VERB_MOTION", {}},
  };
  return e;
}

inline const char* toy_lexicon_tsv() {
  return "على\tPREP\tTOPOLOGICAL.SUPPORT\t\n"
         "في\tPREP\tTOPOLOGICAL.INCLUSION.CONTAINMENT\t\n"
         "وسط\tPREP\tTOPOLOGICAL.INCLUSION.CONTAINMENT\t\n"
         "وسط\tNOUN_SITE\t-\n"
         "في وسط\tPREP_LOCUTION\tTOPOLOGICAL.INCLUSION.CONTAINMENT\t\n"
         "بيت\tNOUN_SITE\t-\n"
         "سار\tVERB_MOTION\t-\n";
}

inline const char* toy_rules_dsl() {
  return "RULE sup PRIO 50 : trigger=[LIT على] ([LIT وسط])? site=[NOUN_SITE] => TOPOLOGICAL.SUPPORT\n"
         "RULE cont PRIO 50 : trigger=[SENSE TOPOLOGICAL.INCLUSION] site=[NOUN_SITE] => "
         "TOPOLOGICAL.INCLUSION.CONTAINMENT\n"
         "RULE mot PRIO 40 : verb=[VERB_MOTION] GAP 2 trigger=[PREP] (site=[NOUN_SITE])? => DIRECTIONAL.GOAL\n"
         "RULE rel PRIO 40 : site=[NOUN_SITE] GAP 1 trigger=[LIT في وسط|LIT على] => TOPOLOGICAL.SUPPORT\n"
         "RULE any PRIO 10 : trigger=[ANY] بيت => DIRECTIONAL.PATH\n";
}

// Alphabet of normalized words for exhaustive enumeration.
inline const std::vector<std::string>& toy_alphabet() {
  static const std::vector<std::string> a = {"علي", "في", "وسط", "بيت", "سار"};
  return a;
}

struct OracleTest {
  enum Kind { Class, Sense, Lit, Any } kind;
  std::string arg;
  std::vector<std::string> words;
};

struct OracleAtom {
  std::string capture;  // empty: none
  bool optional = false;
  int gap = 0;
  std::vector<OracleTest> tests;
};

struct OracleRule {
  std::string name;
  int priority;
  std::vector<OracleAtom> atoms;
};

inline const std::vector<OracleRule>& toy_oracle_rules() {
  using T = OracleTest;
  static const std::vector<OracleRule> r = {
      {"sup", 50,
       {{"trigger", false, 0, {T{T::Lit, "", {"علي"}}}},
        {"", true, 0, {T{T::Lit, "", {"وسط"}}}},
        {"site", false, 0, {T{T::Class, "NOUN_SITE", {}}}}}},
      {"cont", 50,
       {{"trigger", false, 0, {T{T::Sense, "TOPOLOGICAL.INCLUSION", {}}}},
        {"site", false, 0, {T{T::Class, "NOUN_SITE", {}}}}}},
      {"mot", 40,
       {{"verb", false, 0, {T{T::Class, "VERB_MOTION", {}}}},
        {"", false, 2, {}},
        {"trigger", false, 0, {T{T::Class, "PREP", {}}}},
        {"site", true, 0, {T{T::Class, "NOUN_SITE", {}}}}}},
      {"rel", 40,
       {{"site", false, 0, {T{T::Class, "NOUN_SITE", {}}}},
        {"", false, 1, {}},
        {"trigger", false, 0, {T{T::Lit, "", {"في", "وسط"}}, T{T::Lit, "", {"علي"}}}}}},
      {"any", 10, {{"trigger", false, 0, {T{T::Any, "", {}}}}, {"", false, 0, {T{T::Lit, "", {"بيت"}}}}}},
  };
  return r;
}

struct OracleMatch {
  std::string rule;
  std::size_t start, end;
  std::map<std::string, std::pair<std::size_t, std::size_t>> captures;
};

inline bool words_at(const std::vector<std::string>& seq, std::size_t pos, const std::vector<std::string>& w) {
  if (pos + w.size() > seq.size()) return false;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (seq[pos + k] != w[k]) return false;
  }
  return true;
}

// Lengths an atom may consume at pos (set semantics).
inline std::vector<std::size_t> oracle_lengths(const OracleAtom& a, const std::vector<std::string>& seq,
                                               std::size_t pos) {
  std::vector<bool> ok(seq.size() - pos + 1, false);
  if (a.gap > 0) {
    for (std::size_t n = 0; n <= static_cast<std::size_t>(a.gap) && pos + n <= seq.size(); ++n) ok[n] = true;
  } else {
    if (a.optional) ok[0] = true;
    for (const auto& t : a.tests) {
      switch (t.kind) {
        case OracleTest::Any:
          if (pos < seq.size()) ok[1] = true;
          break;
        case OracleTest::Lit:
          if (words_at(seq, pos, t.words)) ok[t.words.size()] = true;
          break;
        case OracleTest::Class:
        case OracleTest::Sense:
          for (const auto& e : toy_entries()) {
            if (!words_at(seq, pos, e.words)) continue;
            bool pass = false;
            if (t.kind == OracleTest::Class) {
              pass = e.cls == t.arg;
            } else {
              for (const auto& s : e.senses) pass = pass || s == t.arg || s.rfind(t.arg + ".", 0) == 0;
            }
            if (pass) ok[e.words.size()] = true;
          }
          break;
      }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n < ok.size(); ++n) {
    if (ok[n]) out.push_back(n);
  }
  return out;
}

inline std::optional<OracleMatch> oracle_rule_at(const OracleRule& r, const std::vector<std::string>& seq,
                                                 std::size_t start) {
  std::optional<std::vector<std::size_t>> best;
  std::size_t best_end = 0;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t k, std::size_t pos) -> void {
    if (k == r.atoms.size()) {
      if (!best || pos > best_end || (pos == best_end && cur > *best)) {
        best = cur;
        best_end = pos;
      }
      return;
    }
    for (const auto n : oracle_lengths(r.atoms[k], seq, pos)) {
      cur.push_back(n);
      self(self, k + 1, pos + n);
      cur.pop_back();
    }
  };
  rec(rec, 0, start);
  if (!best) return std::nullopt;
  OracleMatch m{r.name, start, best_end, {}};
  std::size_t p = start;
  for (std::size_t k = 0; k < r.atoms.size(); ++k) {
    const auto n = (*best)[k];
    if (!r.atoms[k].capture.empty() && n > 0) m.captures[r.atoms[k].capture] = {p, p + n};
    p += n;
  }
  return m;
}

inline std::vector<OracleMatch> oracle_apply(const std::vector<std::string>& seq) {
  const auto& rules = toy_oracle_rules();
  std::vector<OracleMatch> out;
  std::size_t i = 0;
  while (i < seq.size()) {
    std::optional<OracleMatch> win;
    int win_prio = 0;
    for (const auto& r : rules) {
      auto m = oracle_rule_at(r, seq, i);
      if (!m) continue;
      const bool better = !win || r.priority > win_prio ||
                          (r.priority == win_prio && m->end - m->start > win->end - win->start);
      if (better) {
        win = std::move(m);
        win_prio = r.priority;
      }
    }
    if (!win) {
      ++i;
      continue;
    }
    i = win->captures.at("trigger").second;
    out.push_back(std::move(*win));
  }
  return out;
}

struct EquivalenceResult {
  std::size_t sequences = 0;
  std::size_t mismatches = 0;
  std::size_t matches = 0;  // oracle matches seen, to show the run is not vacuous
  std::string first_mismatch;
  double seconds = 0;
};

// Compares the engine with the oracle on every sequence over the alphabet
// up to max_len words.
inline EquivalenceResult check_engine_equivalence(std::size_t max_len) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& map = default_map();
  const auto lex = Lexicon::parse(toy_lexicon_tsv(), map, "<toy>");
  const auto grammar = compile(toy_rules_dsl(), lex, map);
  const auto& alpha = toy_alphabet();
  EquivalenceResult res;
  for (std::size_t len = 0; len <= max_len; ++len) {
    std::vector<std::size_t> digits(len, 0);
    while (true) {
      std::vector<std::string> seq;
      std::vector<Segment> segs;
      for (std::size_t k = 0; k < len; ++k) {
        seq.push_back(alpha[digits[k]]);
        Segment s;
        s.form = seq.back();
        s.token = k;
        s.span = OffsetSpan{k * 10, k * 10 + seq.back().size()};
        segs.push_back(s);
      }
      ++res.sequences;
      const auto got = apply(grammar, segs, lex);
      const auto want = oracle_apply(seq);
      res.matches += want.size();
      bool same = got.size() == want.size();
      for (std::size_t k = 0; same && k < got.size(); ++k) {
        same = got[k].rule == want[k].rule && got[k].span.begin == want[k].start && got[k].span.end == want[k].end &&
               got[k].captures.size() == want[k].captures.size();
        for (const auto& [name, range] : want[k].captures) {
          const auto* c = same ? got[k].capture(name) : nullptr;
          same = same && c != nullptr && c->range.begin == range.first && c->range.end == range.second;
        }
      }
      if (!same) {
        if (res.mismatches++ == 0) {
          for (const auto& w : seq) res.first_mismatch += w + " ";
        }
      }
      std::size_t k = 0;
      while (k < len && ++digits[k] == alpha.size()) digits[k++] = 0;
      if (k == len) break;
    }
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace spatial::testing
