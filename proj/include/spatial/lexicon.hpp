#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "spatial/semantic_map.hpp"
#include "spatial/text_norm.hpp"

namespace spatial {

enum class LexClass {
  PREP,
  PREP_LOCUTION,
  NOUN_SITE,
  NOUN_TARGET,
  NOUN_ABSTRACT_SITE,
  VERB_MOTION,
  VERB_POSTURE,
  PLACE_NAME,
  NOUN_TEMPORAL,
};

enum class LexFlag : std::uint32_t {
  TEMPORAL_CAPABLE = 1u << 0,
  ABSTRACT_CAPABLE = 1u << 1,
  REQUIRES_POSSESSIVE_DISAMBIG = 1u << 2,
  INTRINSIC_ORIENTATION = 1u << 3,
  CONTACT_IMPLIED = 1u << 4,
  NO_CONTACT_REQUIRED = 1u << 5,
  POLYSEMOUS_SOURCE = 1u << 6,
  AMBIGUOUS_DUAL = 1u << 7,
};

std::string_view to_string(LexClass c);
std::string_view to_string(LexFlag f);
std::optional<LexClass> parse_lex_class(std::string_view name);
std::optional<LexFlag> parse_lex_flag(std::string_view name);
const std::vector<LexClass>& all_lex_classes();
const std::vector<LexFlag>& all_lex_flags();

bool is_noun_class(LexClass c);

struct LexEntry {
  std::string lemma;               // normalized, words joined by single spaces
  std::vector<std::string> words;  // lemma split on spaces
  LexClass cls = LexClass::NOUN_SITE;
  std::vector<std::string> senses;
  std::uint32_t flags = 0;
  std::string possessive_suffix;  // set on forms generated from a base entry
  std::string origin;             // "file:line" of the defining line

  bool has(LexFlag f) const { return (flags & static_cast<std::uint32_t>(f)) != 0; }
  std::size_t length() const { return words.size(); }
};

struct LexMatch {
  const LexEntry* entry = nullptr;
  std::size_t length = 0;  // covered segments

  friend bool operator==(const LexMatch&, const LexMatch&) = default;
};

// Closed set of attached pronoun suffixes used to generate possessed forms.
const std::vector<std::string>& pronoun_suffixes();

class Lexicon : public CliticLicense {
 public:
  struct Source {
    std::string text;
    std::string origin;
  };

  Lexicon() = default;

  // TSV: lemma<TAB>class<TAB>sense;sense<TAB>flag,flag. Throws ParseError
  // (with line) or ValidationError (naming the entry) on bad input.
  static Lexicon parse(std::string_view source, const SpatialityMap& map, std::string_view origin = "<lexicon>");
  static Lexicon from_sources(std::span<const Source> sources, const SpatialityMap& map);
  static Lexicon load(const std::filesystem::path& path, const SpatialityMap& map);
  static Lexicon load(std::span<const std::filesystem::path> paths, const SpatialityMap& map);

  // Entries whose word sequence equals the segment forms starting at i,
  // longest first, then PREP_LOCUTION before PREP before the other classes.
  std::vector<LexMatch> lookup(std::span<const Segment> window, std::size_t i) const;

  // All entries with this exact lemma.
  std::vector<const LexEntry*> find(std::string_view lemma) const;

  const std::vector<LexEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  bool is_known_word(std::string_view normalized_word) const override;
  bool licenses_unknown(std::span<const CliticKind> sequence) const override;

  // Proclitic sequences that may be detached from words the lexicon does not
  // know. Defaults to every sequence that contains the article.
  void set_licensed_sequences(std::vector<std::vector<CliticKind>> sequences);

 private:
  void add(LexEntry entry);
  void finish(const SpatialityMap& map);

  std::vector<LexEntry> entries_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_first_word_;
  std::unordered_set<std::string> words_;
  std::optional<std::vector<std::vector<CliticKind>>> licensed_;
};

// The shipped baseline lexicon, validated against default_map().
const Lexicon& seed_lexicon();

}  // namespace spatial
