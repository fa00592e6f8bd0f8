#include "spatial/lexicon.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "spatial/error.hpp"
#include "spatial/resources.hpp"

namespace spatial {

namespace {

constexpr std::array<std::pair<LexClass, std::string_view>, 9> kClassNames{{
    {LexClass::PREP, "PREP"},
    {LexClass::PREP_LOCUTION, "PREP_LOCUTION"},
    {LexClass::NOUN_SITE, "NOUN_SITE"},
    {LexClass::NOUN_TARGET, "NOUN_TARGET"},
    {LexClass::NOUN_ABSTRACT_SITE, "NOUN_ABSTRACT_SITE"},
    {LexClass::VERB_MOTION, "VERB_MOTION"},
    {LexClass::VERB_POSTURE, "VERB_POSTURE"},
    {LexClass::PLACE_NAME, "PLACE_NAME"},
    {LexClass::NOUN_TEMPORAL, "NOUN_TEMPORAL"},
}};

constexpr std::array<std::pair<LexFlag, std::string_view>, 8> kFlagNames{{
    {LexFlag::TEMPORAL_CAPABLE, "TEMPORAL_CAPABLE"},
    {LexFlag::ABSTRACT_CAPABLE, "ABSTRACT_CAPABLE"},
    {LexFlag::REQUIRES_POSSESSIVE_DISAMBIG, "REQUIRES_POSSESSIVE_DISAMBIG"},
    {LexFlag::INTRINSIC_ORIENTATION, "INTRINSIC_ORIENTATION"},
    {LexFlag::CONTACT_IMPLIED, "CONTACT_IMPLIED"},
    {LexFlag::NO_CONTACT_REQUIRED, "NO_CONTACT_REQUIRED"},
    {LexFlag::POLYSEMOUS_SOURCE, "POLYSEMOUS_SOURCE"},
    {LexFlag::AMBIGUOUS_DUAL, "AMBIGUOUS_DUAL"},
}};

// Lookup tie-break among equal-length matches.
int class_rank(LexClass c) {
  switch (c) {
    case LexClass::PREP_LOCUTION:
      return 0;
    case LexClass::PREP:
      return 1;
    default:
      return 2 + static_cast<int>(c);
  }
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \r\n\t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \r\n\t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto at = s.find(sep, pos);
    out.push_back(s.substr(pos, at == std::string_view::npos ? std::string_view::npos : at - pos));
    if (at == std::string_view::npos) break;
    pos = at + 1;
  }
  return out;
}

std::string read_file(const std::filesystem::path& path, std::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + std::string(what) + ": " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void parse_into(std::string_view source, std::string_view origin, std::vector<LexEntry>& out) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= source.size()) {
    auto nl = source.find('\n', pos);
    if (nl == std::string_view::npos) nl = source.size();
    const auto raw = source.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    const auto fail = [&](const std::string& msg) { throw ParseError(std::string(origin), line_no, 0, msg); };
    const auto cols = split(line, '\t');
    if (cols.size() < 3 || cols.size() > 4) fail("expected 3 or 4 tab-separated columns, got " + std::to_string(cols.size()));

    LexEntry e;
    e.origin = std::string(origin) + ":" + std::to_string(line_no);

    const auto lemma_raw = trim(cols[0]);
    if (lemma_raw.empty()) fail("empty lemma");
    for (auto w : split(lemma_raw, ' ')) {
      if (w.empty()) fail("lemma words must be separated by single spaces");
      auto norm = normalize_form(w);
      if (norm.empty() || !std::all_of(norm.begin(), norm.end(), [](char c) { return c != ' '; })) {
        fail("lemma word '" + std::string(w) + "' normalizes to nothing");
      }
      e.words.push_back(std::move(norm));
    }
    for (const auto& w : e.words) e.lemma += (e.lemma.empty() ? "" : " ") + w;

    const auto cls = parse_lex_class(trim(cols[1]));
    if (!cls) fail("unknown lexical class '" + std::string(trim(cols[1])) + "'");
    e.cls = *cls;

    const auto senses = trim(cols[2]);
    if (!senses.empty() && senses != "-") {
      for (auto s : split(senses, ';')) {
        s = trim(s);
        if (s.empty()) fail("empty sense path");
        e.senses.emplace_back(s);
      }
    }
    if (cols.size() == 4) {
      const auto flags = trim(cols[3]);
      if (!flags.empty() && flags != "-") {
        for (auto f : split(flags, ',')) {
          f = trim(f);
          const auto flag = parse_lex_flag(f);
          if (!flag) fail("unknown flag '" + std::string(f) + "'");
          e.flags |= static_cast<std::uint32_t>(*flag);
        }
      }
    }
    out.push_back(std::move(e));
  }
}

}  // namespace

std::string_view to_string(LexClass c) {
  for (const auto& [k, name] : kClassNames) {
    if (k == c) return name;
  }
  return "?";
}

std::string_view to_string(LexFlag f) {
  for (const auto& [k, name] : kFlagNames) {
    if (k == f) return name;
  }
  return "?";
}

std::optional<LexClass> parse_lex_class(std::string_view name) {
  for (const auto& [k, n] : kClassNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

std::optional<LexFlag> parse_lex_flag(std::string_view name) {
  for (const auto& [k, n] : kFlagNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

const std::vector<LexClass>& all_lex_classes() {
  static const std::vector<LexClass> all = [] {
    std::vector<LexClass> v;
    for (const auto& [k, n] : kClassNames) v.push_back(k);
    return v;
  }();
  return all;
}

const std::vector<LexFlag>& all_lex_flags() {
  static const std::vector<LexFlag> all = [] {
    std::vector<LexFlag> v;
    for (const auto& [k, n] : kFlagNames) v.push_back(k);
    return v;
  }();
  return all;
}

bool is_noun_class(LexClass c) {
  return c == LexClass::NOUN_SITE || c == LexClass::NOUN_TARGET || c == LexClass::NOUN_ABSTRACT_SITE ||
         c == LexClass::PLACE_NAME || c == LexClass::NOUN_TEMPORAL;
}

const std::vector<std::string>& pronoun_suffixes() {
  static const std::vector<std::string> suffixes{"ي", "ك", "ه", "ها", "نا", "كم", "كن", "هم", "هن", "هما", "كما"};
  return suffixes;
}

// ---------------------------------------------------------------------------

Lexicon Lexicon::parse(std::string_view source, const SpatialityMap& map, std::string_view origin) {
  const std::array<Source, 1> one{Source{std::string(source), std::string(origin)}};
  return from_sources(one, map);
}

Lexicon Lexicon::from_sources(std::span<const Source> sources, const SpatialityMap& map) {
  std::vector<LexEntry> parsed;
  for (const auto& src : sources) parse_into(src.text, src.origin, parsed);

  Lexicon lex;
  std::set<std::pair<std::string, LexClass>> seen;
  for (auto& e : parsed) {
    for (const auto& sense : e.senses) {
      if (!map.contains(sense)) {
        throw ValidationError(e.origin + ": entry '" + e.lemma + "' has unresolved sense path " + sense);
      }
    }
    if ((e.cls == LexClass::PREP || e.cls == LexClass::PREP_LOCUTION) && e.senses.empty()) {
      throw ValidationError(e.origin + ": preposition '" + e.lemma + "' needs at least one sense");
    }
    if (!seen.emplace(e.lemma, e.cls).second) {
      throw ValidationError(e.origin + ": duplicate entry '" + e.lemma + "' " + std::string(to_string(e.cls)));
    }
  }
  for (auto& e : parsed) lex.add(std::move(e));

  // Possessed forms of entries that need a pronoun suffix to be read spatially.
  std::vector<LexEntry> generated;
  for (const auto& e : lex.entries_) {
    if (!e.has(LexFlag::REQUIRES_POSSESSIVE_DISAMBIG) || e.words.size() != 1) continue;
    for (const auto& suffix : pronoun_suffixes()) {
      LexEntry g = e;
      g.words = {e.words.front() + suffix};
      g.lemma = g.words.front();
      g.possessive_suffix = suffix;
      if (seen.emplace(g.lemma, g.cls).second) generated.push_back(std::move(g));
    }
  }
  for (auto& g : generated) lex.add(std::move(g));

  lex.finish(map);
  return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& path, const SpatialityMap& map) {
  const std::array<std::filesystem::path, 1> one{path};
  return load(one, map);
}

Lexicon Lexicon::load(std::span<const std::filesystem::path> paths, const SpatialityMap& map) {
  std::vector<Source> sources;
  for (const auto& p : paths) sources.push_back(Source{read_file(p, "lexicon"), p.string()});
  return from_sources(sources, map);
}

void Lexicon::add(LexEntry entry) {
  for (const auto& w : entry.words) words_.insert(w);
  by_first_word_[entry.words.front()].push_back(entries_.size());
  entries_.push_back(std::move(entry));
}

void Lexicon::finish(const SpatialityMap&) {
  // Multiword entries are matched against segment stems, so each of their
  // words must survive tokenization unsplit.
  for (const auto& e : entries_) {
    if (e.words.size() < 2) continue;
    for (const auto& w : e.words) {
      const auto toks = tokenize(w, *this);
      if (toks.size() != 1 || !toks.front().proclitics.empty()) {
        throw ValidationError(e.origin + ": multiword entry '" + e.lemma + "' contains clitic-bearing word '" + w +
                              "'");
      }
    }
  }
}

std::vector<LexMatch> Lexicon::lookup(std::span<const Segment> window, std::size_t i) const {
  std::vector<LexMatch> out;
  if (i >= window.size()) return out;
  const auto it = by_first_word_.find(window[i].form);
  if (it == by_first_word_.end()) return out;
  for (const auto idx : it->second) {
    const auto& e = entries_[idx];
    if (i + e.words.size() > window.size()) continue;
    bool ok = true;
    for (std::size_t k = 1; k < e.words.size() && ok; ++k) ok = window[i + k].form == e.words[k];
    if (ok) out.push_back(LexMatch{&e, e.words.size()});
  }
  std::stable_sort(out.begin(), out.end(), [](const LexMatch& a, const LexMatch& b) {
    if (a.length != b.length) return a.length > b.length;
    return class_rank(a.entry->cls) < class_rank(b.entry->cls);
  });
  return out;
}

std::vector<const LexEntry*> Lexicon::find(std::string_view lemma) const {
  std::vector<const LexEntry*> out;
  const auto first = lemma.substr(0, lemma.find(' '));
  const auto it = by_first_word_.find(std::string(first));
  if (it == by_first_word_.end()) return out;
  for (const auto idx : it->second) {
    if (entries_[idx].lemma == lemma) out.push_back(&entries_[idx]);
  }
  return out;
}

bool Lexicon::is_known_word(std::string_view normalized_word) const {
  return words_.count(std::string(normalized_word)) > 0;
}

bool Lexicon::licenses_unknown(std::span<const CliticKind> sequence) const {
  if (!licensed_) return ArticleLicense{}.licenses_unknown(sequence);
  return std::any_of(licensed_->begin(), licensed_->end(), [&](const std::vector<CliticKind>& allowed) {
    return std::equal(allowed.begin(), allowed.end(), sequence.begin(), sequence.end());
  });
}

void Lexicon::set_licensed_sequences(std::vector<std::vector<CliticKind>> sequences) {
  licensed_ = std::move(sequences);
}

const Lexicon& seed_lexicon() {
  static const Lexicon lex = Lexicon::parse(resources::lexicon_tsv(), default_map(), "<seed lexicon>");
  return lex;
}

}  // namespace spatial
