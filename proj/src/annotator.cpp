#include "spatial/annotator.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "spatial/error.hpp"
#include "spatial/resources.hpp"
#include "spatial/spatial_grammar.hpp"
#include "spatial/utf8.hpp"

namespace spatial {

using ojson = nlohmann::ordered_json;

namespace {

OffsetSpan to_offsets(std::span<const Segment> segs, const SegmentRange& r) {
  return OffsetSpan{segs[r.begin].span.start, segs[r.end - 1].span.end};
}

OffsetSpan hull(const OffsetSpan& a, const OffsetSpan& b) {
  return OffsetSpan{std::min(a.start, b.start), std::max(a.end, b.end)};
}

}  // namespace

Annotator::Annotator(const Lexicon& lexicon, const CompiledGrammar& grammar, const SpatialityMap& map,
                     const VariantTable& variants)
    : lexicon_(lexicon), grammar_(grammar), map_(map), variants_(variants) {}

AnnotatedDocument Annotator::annotate(std::string_view text, std::string doc_id) const {
  std::vector<VetoedMatch> ignored;
  return annotate(text, std::move(doc_id), ignored);
}

AnnotatedDocument Annotator::annotate(std::string_view text, std::string doc_id,
                                      std::vector<VetoedMatch>& vetoed) const {
  AnnotatedDocument doc{std::move(doc_id), std::string(text), {}};
  const auto tokens = tokenize(text, lexicon_, variants_);
  const auto segs = segment(tokens);
  const GuardContext ctx{tokens, segs, lexicon_};

  for (auto& m : apply(grammar_, segs, lexicon_)) {
    const Rule& rule = grammar_.rules().at(m.rule_index);
    auto outcome = evaluate_guards(ctx, rule, m);
    if (outcome.vetoed) {
      vetoed.push_back(VetoedMatch{std::move(m), std::move(outcome.vetoed_by)});
      continue;
    }
    SpatialAnnotation a;
    a.category = m.output;
    a.trigger = to_offsets(segs, m.trigger().range);
    a.span = a.trigger;
    if (const auto* site = m.capture("site")) {
      a.site = to_offsets(segs, site->range);
      a.span = hull(a.span, *a.site);
    }
    if (const auto* target = m.capture("target")) {
      a.target = to_offsets(segs, target->range);
      a.span = hull(a.span, *a.target);
    }
    for (const auto& [k, v] : rule.attributes) a.attributes[k] = v;
    a.alternates = std::move(outcome.alternates);
    a.rule = m.rule;
    doc.annotations.push_back(std::move(a));
  }
  std::stable_sort(doc.annotations.begin(), doc.annotations.end(),
                   [](const SpatialAnnotation& x, const SpatialAnnotation& y) {
                     if (x.span.start != y.span.start) return x.span.start < y.span.start;
                     return x.trigger.start < y.trigger.start;
                   });
  return doc;
}

AnnotatedDocument annotate(std::string_view text, const Lexicon& lexicon, const CompiledGrammar& grammar,
                           const SpatialityMap& map) {
  return Annotator(lexicon, grammar, map).annotate(text);
}

const VariantTable& default_variants() {
  static const VariantTable table = VariantTable::parse(resources::variants_tsv(), "<shipped variants>");
  return table;
}

const Annotator& default_annotator() {
  static const Annotator annotator(seed_lexicon(), default_grammar(), default_map(), default_variants());
  return annotator;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

ojson span_json(const OffsetSpan& s) { return ojson{{"start", s.start}, {"end", s.end}}; }

struct Reader {
  std::string_view origin;
  const SpatialityMap& map;
  std::size_t text_len = 0;

  [[noreturn]] void invalid(const std::string& where, const std::string& msg) const {
    throw ValidationError(std::string(origin) + ": " + where + ": " + msg);
  }

  const ojson& field(const ojson& obj, const char* key, const std::string& where) const {
    const auto it = obj.find(key);
    if (it == obj.end()) invalid(where, std::string("missing field '") + key + "'");
    return *it;
  }

  std::size_t offset(const ojson& v, const std::string& where) const {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      invalid(where, "offset must be a non-negative integer");
    }
    return v.get<std::size_t>();
  }

  OffsetSpan span(const ojson& obj, const std::string& where) const {
    if (!obj.is_object()) invalid(where, "span must be an object");
    OffsetSpan s{offset(field(obj, "start", where), where + ".start"), offset(field(obj, "end", where), where + ".end")};
    if (s.start > s.end) invalid(where, "start " + std::to_string(s.start) + " > end " + std::to_string(s.end));
    if (s.end > text_len) {
      invalid(where, "span end " + std::to_string(s.end) + " exceeds text length " + std::to_string(text_len));
    }
    return s;
  }

  std::string category(const ojson& v, const std::string& where) const {
    if (!v.is_string()) invalid(where, "category must be a string");
    auto path = v.get<std::string>();
    if (map.resolve(path) == nullptr) invalid(where, "unknown category path '" + path + "'");
    return path;
  }
};

std::string string_field(const Reader& r, const ojson& obj, const char* key, const std::string& where) {
  const auto& v = r.field(obj, key, where);
  if (!v.is_string()) r.invalid(where, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

std::string to_json(const AnnotatedDocument& doc) {
  ojson anns = ojson::array();
  for (const auto& a : doc.annotations) {
    ojson j;
    j["start"] = a.span.start;
    j["end"] = a.span.end;
    j["category"] = a.category;
    j["trigger"] = span_json(a.trigger);
    if (a.site) j["site"] = span_json(*a.site);
    if (a.target) j["target"] = span_json(*a.target);
    if (!a.attributes.empty()) {
      ojson attrs = ojson::object();
      for (const auto& [k, v] : a.attributes) attrs[k] = v;
      j["attributes"] = std::move(attrs);
    }
    if (!a.alternates.empty()) j["alternates"] = a.alternates;
    if (!a.rule.empty()) j["rule"] = a.rule;
    anns.push_back(std::move(j));
  }
  ojson root;
  root["doc_id"] = doc.doc_id;
  root["text"] = doc.text;
  root["annotations"] = std::move(anns);
  return root.dump(2) + "\n";
}

void write_annotations(const AnnotatedDocument& doc, std::ostream& sink) {
  sink << to_json(doc);
  if (!sink) throw Error("failed to write annotations for document '" + doc.doc_id + "'");
}

AnnotatedDocument parse_annotations(std::string_view source, const SpatialityMap& map, std::string_view origin) {
  ojson root;
  try {
    root = ojson::parse(source);
  } catch (const nlohmann::json::parse_error& e) {
    // Byte position -> 1-based line and column (in scalars).
    const std::size_t pos = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, source.size());
    std::size_t line = 1;
    std::size_t line_start = 0;
    for (std::size_t i = 0; i < pos; ++i) {
      if (source[i] == '\n') {
        ++line;
        line_start = i + 1;
      }
    }
    const std::size_t col = utf8::length(source.substr(line_start, pos - line_start)) + 1;
    throw ParseError(std::string(origin), line, col, "malformed JSON");
  }

  Reader r{origin, map};
  if (!root.is_object()) r.invalid("document", "top level must be an object");
  AnnotatedDocument doc;
  doc.doc_id = string_field(r, root, "doc_id", "document");
  doc.text = string_field(r, root, "text", "document");
  r.text_len = utf8::length(doc.text);
  const auto& anns = r.field(root, "annotations", "document");
  if (!anns.is_array()) r.invalid("document", "'annotations' must be an array");

  for (std::size_t i = 0; i < anns.size(); ++i) {
    const std::string where = "annotations[" + std::to_string(i) + "]";
    const auto& j = anns[i];
    if (!j.is_object()) r.invalid(where, "annotation must be an object");
    SpatialAnnotation a;
    a.span = r.span(j, where);
    a.category = r.category(r.field(j, "category", where), where + ".category");
    a.trigger = r.span(r.field(j, "trigger", where), where + ".trigger");
    if (!a.span.contains(a.trigger)) r.invalid(where, "trigger lies outside the annotation span");
    if (j.contains("site")) {
      a.site = r.span(j["site"], where + ".site");
      if (!a.span.contains(*a.site)) r.invalid(where, "site lies outside the annotation span");
    }
    if (j.contains("target")) {
      a.target = r.span(j["target"], where + ".target");
      if (!a.span.contains(*a.target)) r.invalid(where, "target lies outside the annotation span");
    }
    if (j.contains("attributes")) {
      const auto& attrs = j["attributes"];
      if (!attrs.is_object()) r.invalid(where, "'attributes' must be an object");
      for (const auto& [k, v] : attrs.items()) {
        if (!v.is_string()) r.invalid(where, "attribute '" + k + "' must be a string");
        a.attributes[k] = v.get<std::string>();
      }
    }
    if (j.contains("alternates")) {
      const auto& alts = j["alternates"];
      if (!alts.is_array()) r.invalid(where, "'alternates' must be an array");
      for (const auto& alt : alts) a.alternates.push_back(r.category(alt, where + ".alternates"));
    }
    if (j.contains("rule")) a.rule = string_field(r, j, "rule", where);
    doc.annotations.push_back(std::move(a));
  }
  return doc;
}

AnnotatedDocument read_annotations(std::istream& source, const SpatialityMap& map, std::string_view origin) {
  std::ostringstream buf;
  buf << source.rdbuf();
  return parse_annotations(buf.str(), map, origin);
}

AnnotatedDocument read_annotations(const std::filesystem::path& path, const SpatialityMap& map) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open annotation file " + path.string());
  return read_annotations(in, map, path.string());
}

}  // namespace spatial
