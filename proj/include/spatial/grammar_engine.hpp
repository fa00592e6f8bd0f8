#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spatial/lexicon.hpp"
#include "spatial/semantic_map.hpp"
#include "spatial/text_norm.hpp"

namespace spatial {

// Half-open range of segment indices.
struct SegmentRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool contains(const SegmentRange& o) const { return begin <= o.begin && o.end <= end; }
  friend bool operator==(const SegmentRange&, const SegmentRange&) = default;
  friend auto operator<=>(const SegmentRange&, const SegmentRange&) = default;
};

enum class TestKind { Class, Sense, Literal, Flag, Any };

struct AtomTest {
  TestKind kind = TestKind::Any;
  LexClass cls = LexClass::NOUN_SITE;
  std::string path;                // Sense
  std::set<std::string, std::less<>> sense_closure;  // Sense: path and all its descendants
  std::vector<std::string> words;  // Literal, normalized
  LexFlag flag = LexFlag::TEMPORAL_CAPABLE;
};

struct PatternAtom {
  static constexpr std::size_t kMaxGap = 5;

  std::optional<std::string> capture;
  std::vector<AtomTest> tests;  // disjunction; empty for a gap
  bool optional = false;
  std::size_t gap = 0;  // > 0: skip 0..gap segments of any kind

  bool is_gap() const { return gap > 0; }
};

struct Rule {
  std::string name;
  int priority = 0;
  std::vector<PatternAtom> atoms;
  std::string output;
  std::vector<std::string> guards;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::size_t line = 0;
};

// Capture names a rule may bind. Exactly one trigger per rule.
inline constexpr std::string_view kCaptureNames[] = {"trigger", "site", "target", "verb"};

struct Capture {
  SegmentRange range;
  const LexEntry* entry = nullptr;  // lexicon entry that satisfied the atom, if any

  friend bool operator==(const Capture& a, const Capture& b) { return a.range == b.range && a.entry == b.entry; }
};

struct RawMatch {
  std::string rule;
  std::size_t rule_index = 0;  // declaration order
  SegmentRange span;
  std::map<std::string, Capture> captures;
  std::string output;
  int priority = 0;

  const Capture& trigger() const { return captures.at("trigger"); }
  const Capture* capture(std::string_view name) const;
  friend bool operator==(const RawMatch&, const RawMatch&) = default;
};

class CompiledGrammar {
 public:
  CompiledGrammar() = default;
  explicit CompiledGrammar(std::vector<Rule> rules) : rules_(std::move(rules)) {}

  const std::vector<Rule>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }
  const Rule* find(std::string_view name) const;

 private:
  std::vector<Rule> rules_;
};

struct CompileOptions {
  // When set, every GUARD name must be in this set.
  std::optional<std::set<std::string, std::less<>>> known_guards;
  std::string origin = "<rules>";
};

// Parses and validates rule DSL source. Throws ParseError for syntax errors
// (with line and column) and for semantic errors (unknown class or flag,
// unresolved category path, duplicate rule name, unknown guard...).
CompiledGrammar compile(std::string_view source, const Lexicon& lexicon, const SpatialityMap& map,
                        const CompileOptions& options = {});

// Leftmost scan: at each position the winner is chosen by priority desc, match
// length desc, declaration order asc; scanning resumes after the winner's
// trigger. Within a rule and start, the longest match is kept and, among its
// alignments, the one whose per-atom consumption vector is lexicographically
// greatest (earlier atoms consume as much as possible).
std::vector<RawMatch> apply(const CompiledGrammar& grammar, std::span<const Segment> segments,
                            const Lexicon& lexicon);

// All ways a single atom can consume segments at position pos: (length, entry)
// pairs with distinct lengths, in preference order. Exposed for tests.
std::vector<std::pair<std::size_t, const LexEntry*>> atom_options(const PatternAtom& atom,
                                                                   std::span<const Segment> segments,
                                                                   std::size_t pos, const Lexicon& lexicon);

}  // namespace spatial
