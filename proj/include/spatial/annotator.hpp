#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spatial/grammar_engine.hpp"
#include "spatial/lexicon.hpp"
#include "spatial/semantic_map.hpp"
#include "spatial/text_norm.hpp"

namespace spatial {

// One standoff annotation. Offsets are Unicode scalar indices into the
// original text; span is the hull of trigger, site and target.
struct SpatialAnnotation {
  OffsetSpan span;
  std::string category;
  OffsetSpan trigger;
  std::optional<OffsetSpan> site;
  std::optional<OffsetSpan> target;
  std::map<std::string, std::string> attributes;
  std::vector<std::string> alternates;
  std::string rule;  // empty in gold files

  friend bool operator==(const SpatialAnnotation&, const SpatialAnnotation&) = default;
};

struct AnnotatedDocument {
  std::string doc_id;
  std::string text;
  std::vector<SpatialAnnotation> annotations;

  friend bool operator==(const AnnotatedDocument&, const AnnotatedDocument&) = default;
};

// A match that a guard rejected, kept for diagnostics.
struct VetoedMatch {
  RawMatch match;
  std::string guard;
};

// Bundles the resources of one pipeline. The referenced objects must outlive
// the annotator; the grammar must have been compiled against the same
// lexicon and map.
class Annotator {
 public:
  Annotator(const Lexicon& lexicon, const CompiledGrammar& grammar, const SpatialityMap& map,
            const VariantTable& variants = {});

  AnnotatedDocument annotate(std::string_view text, std::string doc_id = {}) const;
  // Same as annotate, also reporting guard vetoes.
  AnnotatedDocument annotate(std::string_view text, std::string doc_id, std::vector<VetoedMatch>& vetoed) const;

  const Lexicon& lexicon() const { return lexicon_; }
  const CompiledGrammar& grammar() const { return grammar_; }
  const SpatialityMap& map() const { return map_; }
  const VariantTable& variants() const { return variants_; }

 private:
  const Lexicon& lexicon_;
  const CompiledGrammar& grammar_;
  const SpatialityMap& map_;
  const VariantTable& variants_;
};

AnnotatedDocument annotate(std::string_view text, const Lexicon& lexicon, const CompiledGrammar& grammar,
                           const SpatialityMap& map);

// The shipped pipeline: seed lexicon, default grammar, default map and the
// shipped variant table.
const Annotator& default_annotator();
const VariantTable& default_variants();

// JSON annotation files. Writing is byte-stable (fixed key order, two-space
// indent, trailing newline); reading validates spans against the text and
// categories against the map.
std::string to_json(const AnnotatedDocument& doc);
void write_annotations(const AnnotatedDocument& doc, std::ostream& sink);
AnnotatedDocument parse_annotations(std::string_view source, const SpatialityMap& map,
                                    std::string_view origin = "<annotations>");
AnnotatedDocument read_annotations(std::istream& source, const SpatialityMap& map,
                                   std::string_view origin = "<annotations>");
AnnotatedDocument read_annotations(const std::filesystem::path& path, const SpatialityMap& map);

}  // namespace spatial
