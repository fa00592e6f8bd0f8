#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace spatial {

// Half-open range of Unicode scalar indices into the ORIGINAL text.
struct OffsetSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool contains(const OffsetSpan& other) const { return start <= other.start && other.end <= end; }
  bool overlaps(const OffsetSpan& other) const { return start < other.end && other.start < end; }
  friend bool operator==(const OffsetSpan&, const OffsetSpan&) = default;
};

// Maps listed spelling variants (mostly transliterated place names) to one
// canonical form. Keys and values are stored normalized.
class VariantTable {
 public:
  VariantTable() = default;

  // TSV: variant<TAB>canonical, '#' comments. Throws ParseError/ValidationError.
  static VariantTable parse(std::string_view source, std::string_view origin = "<variants>");
  static VariantTable load(const std::filesystem::path& path);

  // Adds one mapping. Both sides must be single words; a canonical form may
  // not itself be a variant (keeps normalization idempotent).
  void add(std::string_view variant, std::string_view canonical);

  // Canonical form for a normalized word, or the word itself.
  const std::u32string* find(std::u32string_view word) const;
  std::size_t size() const { return map_.size(); }
  bool empty() const { return map_.empty(); }

 private:
  std::unordered_map<std::u32string, std::u32string> map_;
};

// Result of normalize(): the normalized text plus, for every output index,
// the index of the original scalar it came from.
struct Normalized {
  std::u32string text;
  std::vector<std::size_t> to_original;

  std::string utf8() const;
};

// Character-level folding: diacritics and tatweel dropped, alef variants to
// bare alef, alef maqsura to ya. Returns U'\0' for dropped characters.
char32_t fold_char(char32_t c);
bool is_word_char(char32_t c);

Normalized normalize(std::u32string_view text, const VariantTable& variants = {});
Normalized normalize(std::string_view text, const VariantTable& variants = {});
// Convenience: normalized form only, as UTF-8.
std::string normalize_form(std::string_view text, const VariantTable& variants = {});

enum class CliticKind { Coordination, Preposition, Article };

std::string_view to_string(CliticKind kind);

struct Proclitic {
  CliticKind kind;
  std::string form;  // normalized, e.g. "و", "ب", "ال"
  OffsetSpan span;

  friend bool operator==(const Proclitic&, const Proclitic&) = default;
};

struct Token {
  OffsetSpan span;
  std::string surface;  // original text under span
  std::string norm;     // normalized whole word
  std::vector<Proclitic> proclitics;
  OffsetSpan stem_span;
  std::string stem;  // normalized residue after clitic removal

  bool has(CliticKind kind) const;
  friend bool operator==(const Token&, const Token&) = default;
};

// Word list consulted when deciding whether a proclitic may be detached.
// Implemented by Lexicon.
class CliticLicense {
 public:
  virtual ~CliticLicense() = default;
  virtual bool is_known_word(std::string_view normalized_word) const = 0;
  // Whether detaching this proclitic sequence from a word is allowed when the
  // residue is NOT a known word.
  virtual bool licenses_unknown(std::span<const CliticKind> sequence) const = 0;
};

// Default policy without a lexicon: unknown residues may be split only when the
// article is among the detached proclitics.
class ArticleLicense : public CliticLicense {
 public:
  bool is_known_word(std::string_view) const override { return false; }
  bool licenses_unknown(std::span<const CliticKind> sequence) const override;
};

std::vector<Token> tokenize(std::string_view text, const CliticLicense& license,
                            const VariantTable& variants = {});
std::vector<Token> tokenize(std::string_view text);

// Unit of pattern matching: a detached prepositional proclitic, or a token's
// remaining stem. A token yields one or two segments.
struct Segment {
  OffsetSpan span;  // prep proclitic span, or stem including any article
  std::string form;  // normalized lookup form (stem without article)
  std::size_t token = 0;
  bool is_proclitic = false;
  bool coordinated = false;  // token carries و/ف (first segment of the token only)
  bool has_article = false;

  friend bool operator==(const Segment&, const Segment&) = default;
};

std::vector<Segment> segment(std::span<const Token> tokens);

}  // namespace spatial
