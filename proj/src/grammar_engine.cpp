#include "spatial/grammar_engine.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_map>

#include "spatial/error.hpp"
#include "spatial/utf8.hpp"

namespace spatial {

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { Word, LParen, RParen, Question, LBracket, RBracket, Pipe, Equals, Arrow, Colon, Comma, End };

struct Lexeme {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
};

bool is_special(char32_t c) {
  switch (c) {
    case '(':
    case ')':
    case '?':
    case '[':
    case ']':
    case '|':
    case '=':
    case ':':
    case ',':
    case '#':
      return true;
    default:
      return false;
  }
}

bool is_space(char32_t c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == 0xA0; }

std::vector<Lexeme> lex(std::string_view source, const std::string& origin) {
  const std::u32string text = utf8::decode(source);
  std::vector<Lexeme> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  const auto advance = [&] {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  while (i < text.size()) {
    const char32_t c = text[i];
    if (is_space(c)) {
      advance();
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance();
      continue;
    }
    Lexeme lx;
    lx.line = line;
    lx.column = col;
    if (c == '=' && i + 1 < text.size() && text[i + 1] == '>') {
      lx.kind = Tok::Arrow;
      lx.text = "=>";
      advance();
      advance();
      out.push_back(std::move(lx));
      continue;
    }
    if (is_special(c)) {
      switch (c) {
        case '(':
          lx.kind = Tok::LParen;
          break;
        case ')':
          lx.kind = Tok::RParen;
          break;
        case '?':
          lx.kind = Tok::Question;
          break;
        case '[':
          lx.kind = Tok::LBracket;
          break;
        case ']':
          lx.kind = Tok::RBracket;
          break;
        case '|':
          lx.kind = Tok::Pipe;
          break;
        case '=':
          lx.kind = Tok::Equals;
          break;
        case ':':
          lx.kind = Tok::Colon;
          break;
        default:
          lx.kind = Tok::Comma;
          break;
      }
      utf8::append(lx.text, c);
      advance();
      out.push_back(std::move(lx));
      continue;
    }
    lx.kind = Tok::Word;
    std::u32string word;
    while (i < text.size() && !is_space(text[i]) && !is_special(text[i])) {
      word.push_back(text[i]);
      advance();
    }
    lx.text = utf8::encode(word);
    out.push_back(std::move(lx));
  }
  Lexeme end;
  end.kind = Tok::End;
  end.line = line;
  end.column = col;
  out.push_back(end);
  (void)origin;
  return out;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(std::vector<Lexeme> toks, const Lexicon& lexicon, const SpatialityMap& map, const CompileOptions& opts)
      : toks_(std::move(toks)), lexicon_(lexicon), map_(map), opts_(opts) {}

  std::vector<Rule> rules() {
    std::vector<Rule> out;
    std::unordered_map<std::string, std::size_t> names;
    while (peek().kind != Tok::End) {
      const Lexeme& start = peek();
      Rule r = rule();
      if (!names.emplace(r.name, out.size()).second) {
        throw ParseError(opts_.origin, start.line, start.column, "duplicate rule name '" + r.name + "'");
      }
      out.push_back(std::move(r));
    }
    (void)lexicon_;
    return out;
  }

 private:
  const Lexeme& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Lexeme& next() {
    const Lexeme& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const Lexeme& at, const std::string& msg) const {
    throw ParseError(opts_.origin, at.line, at.column, msg);
  }

  const Lexeme& expect(Tok kind, std::string_view what) {
    if (peek().kind != kind) fail(peek(), "expected " + std::string(what) + ", found '" + describe(peek()) + "'");
    return next();
  }

  const Lexeme& expect_word(std::string_view keyword) {
    if (peek().kind != Tok::Word || peek().text != keyword) {
      fail(peek(), "expected '" + std::string(keyword) + "', found '" + describe(peek()) + "'");
    }
    return next();
  }

  static std::string describe(const Lexeme& t) { return t.kind == Tok::End ? "end of input" : t.text; }

  bool at_keyword(std::string_view kw) const { return peek().kind == Tok::Word && peek().text == kw; }

  void check_path(const Lexeme& at, const std::string& path) const {
    if (!map_.contains(path)) fail(at, "unresolved category path '" + path + "'");
  }

  Rule rule() {
    Rule r;
    const Lexeme& kw = expect_word("RULE");
    r.line = kw.line;
    r.name = expect(Tok::Word, "rule name").text;
    expect_word("PRIO");
    const Lexeme& prio = expect(Tok::Word, "integer priority");
    {
      const auto* first = prio.text.data();
      const auto* last = first + prio.text.size();
      const auto [ptr, ec] = std::from_chars(first, last, r.priority);
      if (ec != std::errc() || ptr != last) fail(prio, "invalid priority '" + prio.text + "'");
    }
    expect(Tok::Colon, "':'");

    while (peek().kind != Tok::Arrow) {
      if (peek().kind == Tok::End || at_keyword("RULE")) fail(peek(), "expected '=>' to end rule '" + r.name + "'");
      r.atoms.push_back(atom());
    }
    if (r.atoms.empty()) fail(peek(), "rule '" + r.name + "' has no pattern atoms");
    next();  // =>

    const Lexeme& out = expect(Tok::Word, "output category path");
    check_path(out, out.text);
    r.output = out.text;

    while (at_keyword("GUARD") || at_keyword("ATTR")) {
      if (next().text == "GUARD") {
        do {
          const Lexeme& g = expect(Tok::Word, "guard name");
          if (opts_.known_guards && !opts_.known_guards->count(g.text)) {
            fail(g, "rule '" + r.name + "' references unknown guard '" + g.text + "'");
          }
          r.guards.push_back(g.text);
        } while (peek().kind == Tok::Comma && (next(), true));
      } else {
        do {
          const Lexeme& k = expect(Tok::Word, "attribute name");
          expect(Tok::Equals, "'='");
          const Lexeme& v = expect(Tok::Word, "attribute value");
          r.attributes.emplace_back(k.text, v.text);
        } while (peek().kind == Tok::Comma && (next(), true));
      }
    }
    if (!(peek().kind == Tok::End || at_keyword("RULE"))) {
      fail(peek(), "unexpected '" + describe(peek()) + "' after rule '" + r.name + "'");
    }

    validate_captures(r, kw);
    return r;
  }

  void validate_captures(const Rule& r, const Lexeme& at) const {
    std::set<std::string> seen;
    std::size_t triggers = 0;
    for (const auto& a : r.atoms) {
      if (!a.capture) continue;
      if (!seen.insert(*a.capture).second) {
        fail(at, "rule '" + r.name + "' binds capture '" + *a.capture + "' twice");
      }
      if (*a.capture == "trigger") {
        ++triggers;
        if (a.optional) fail(at, "rule '" + r.name + "': the trigger capture cannot be optional");
      }
    }
    if (triggers != 1) {
      fail(at, "rule '" + r.name + "' must contain exactly one trigger capture, found " + std::to_string(triggers));
    }
  }

  PatternAtom atom() {
    if (at_keyword("GAP")) {
      next();
      const Lexeme& n = expect(Tok::Word, "gap length");
      std::size_t gap = 0;
      const auto [ptr, ec] = std::from_chars(n.text.data(), n.text.data() + n.text.size(), gap);
      if (ec != std::errc() || ptr != n.text.data() + n.text.size() || gap == 0) {
        fail(n, "invalid gap length '" + n.text + "'");
      }
      if (gap > PatternAtom::kMaxGap) {
        fail(n, "gap length " + n.text + " exceeds the maximum of " + std::to_string(PatternAtom::kMaxGap));
      }
      PatternAtom a;
      a.gap = gap;
      return a;
    }
    if (peek().kind == Tok::LParen) {
      next();
      PatternAtom a = inner();
      expect(Tok::RParen, "')'");
      expect(Tok::Question, "'?' after ')'");
      a.optional = true;
      return a;
    }
    return inner();
  }

  PatternAtom inner() {
    PatternAtom a;
    if (peek().kind == Tok::Word && peek(1).kind == Tok::Equals) {
      const Lexeme& cap = next();
      next();
      const bool known = std::find(std::begin(kCaptureNames), std::end(kCaptureNames), cap.text) !=
                         std::end(kCaptureNames);
      if (!known) fail(cap, "unknown capture name '" + cap.text + "'");
      a.capture = cap.text;
      if (peek().kind != Tok::LBracket) fail(peek(), "expected '[' after capture '" + cap.text + "='");
    }
    if (peek().kind == Tok::LBracket) {
      next();
      a.tests.push_back(test());
      while (peek().kind == Tok::Pipe) {
        next();
        a.tests.push_back(test());
      }
      expect(Tok::RBracket, "']'");
      return a;
    }
    // Bareword: a class name tests the class, anything else is a literal.
    const Lexeme& w = expect(Tok::Word, "pattern atom");
    if (is_keyword(w.text)) fail(w, "unexpected keyword '" + w.text + "'");
    AtomTest t;
    if (const auto cls = parse_lex_class(w.text)) {
      t.kind = TestKind::Class;
      t.cls = *cls;
    } else {
      t.kind = TestKind::Literal;
      t.words = {literal_word(w)};
    }
    a.tests.push_back(std::move(t));
    return a;
  }

  static bool is_keyword(std::string_view w) {
    return w == "RULE" || w == "PRIO" || w == "GAP" || w == "GUARD" || w == "ATTR" || w == "SENSE" ||
           w == "FLAG" || w == "LIT" || w == "ANY";
  }

  std::string literal_word(const Lexeme& w) const {
    auto norm = normalize_form(w.text);
    if (norm.empty()) fail(w, "literal '" + w.text + "' normalizes to nothing");
    return norm;
  }

  AtomTest test() {
    AtomTest t;
    const Lexeme& head = expect(Tok::Word, "test");
    if (head.text == "SENSE") {
      const Lexeme& p = expect(Tok::Word, "category path");
      check_path(p, p.text);
      t.kind = TestKind::Sense;
      t.path = p.text;
      for (const auto& node : map_.nodes()) {
        if (map_.subsumes(p.text, node.id)) t.sense_closure.insert(node.id);
      }
    } else if (head.text == "FLAG") {
      const Lexeme& f = expect(Tok::Word, "flag name");
      const auto flag = parse_lex_flag(f.text);
      if (!flag) fail(f, "unknown flag '" + f.text + "'");
      t.kind = TestKind::Flag;
      t.flag = *flag;
    } else if (head.text == "LIT") {
      t.kind = TestKind::Literal;
      while (peek().kind == Tok::Word) t.words.push_back(literal_word(next()));
      if (t.words.empty()) fail(peek(), "LIT needs at least one word");
    } else if (head.text == "ANY") {
      t.kind = TestKind::Any;
    } else if (const auto cls = parse_lex_class(head.text)) {
      t.kind = TestKind::Class;
      t.cls = *cls;
    } else {
      fail(head, "unknown class or test '" + head.text + "'");
    }
    return t;
  }

  std::vector<Lexeme> toks_;
  std::size_t pos_ = 0;
  const Lexicon& lexicon_;
  const SpatialityMap& map_;
  const CompileOptions& opts_;
};

// ---------------------------------------------------------------------------
// Matching

bool entry_passes(const AtomTest& t, const LexEntry& e) {
  switch (t.kind) {
    case TestKind::Class:
      return e.cls == t.cls;
    case TestKind::Sense:
      return std::any_of(e.senses.begin(), e.senses.end(),
                         [&](const std::string& s) { return t.sense_closure.count(s) > 0; });
    case TestKind::Flag:
      return e.has(t.flag);
    default:
      return false;
  }
}

using Options = std::vector<std::pair<std::size_t, const LexEntry*>>;

// Memoized per-position lexicon lookups for one apply() call.
class LookupCache {
 public:
  LookupCache(std::span<const Segment> segs, const Lexicon& lex) : segs_(segs), lex_(lex), cache_(segs.size()) {}

  const std::vector<LexMatch>& at(std::size_t pos) {
    auto& slot = cache_[pos];
    if (!slot) slot = lex_.lookup(segs_, pos);
    return *slot;
  }

  std::span<const Segment> segments() const { return segs_; }

 private:
  std::span<const Segment> segs_;
  const Lexicon& lex_;
  std::vector<std::optional<std::vector<LexMatch>>> cache_;
};

Options options_at(const PatternAtom& atom, std::size_t pos, LookupCache& cache) {
  const auto segs = cache.segments();
  const std::size_t remaining = segs.size() - pos;
  Options opts;
  const auto add = [&opts](std::size_t len, const LexEntry* entry) {
    for (const auto& o : opts) {
      if (o.first == len) return;
    }
    opts.emplace_back(len, entry);
  };

  if (atom.is_gap()) {
    for (std::size_t len = std::min(atom.gap, remaining) + 1; len-- > 0;) add(len, nullptr);
    return opts;
  }
  if (remaining > 0) {
    const auto& matches = cache.at(pos);
    for (const auto& t : atom.tests) {
      switch (t.kind) {
        case TestKind::Literal: {
          if (t.words.size() > remaining) break;
          bool ok = true;
          for (std::size_t k = 0; k < t.words.size() && ok; ++k) ok = segs[pos + k].form == t.words[k];
          if (!ok) break;
          const LexEntry* entry = nullptr;
          for (const auto& m : matches) {
            if (m.length == t.words.size()) {
              entry = m.entry;
              break;
            }
          }
          add(t.words.size(), entry);
          break;
        }
        case TestKind::Any: {
          const LexEntry* entry = nullptr;
          for (const auto& m : matches) {
            if (m.length == 1) {
              entry = m.entry;
              break;
            }
          }
          add(1, entry);
          break;
        }
        default:
          for (const auto& m : matches) {
            if (entry_passes(t, *m.entry)) add(m.length, m.entry);
          }
          break;
      }
    }
  }
  if (atom.optional) add(0, nullptr);
  std::stable_sort(opts.begin(), opts.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  return opts;
}

struct Alignment {
  std::size_t end = 0;
  std::vector<std::pair<std::size_t, const LexEntry*>> steps;  // per atom: consumed, entry
};

// Longest match of one rule at start, or nothing.
std::optional<Alignment> match_rule(const Rule& rule, std::size_t start, LookupCache& cache) {
  const std::size_t n_atoms = rule.atoms.size();
  // reach[k]: sorted positions reachable after the first k atoms.
  std::vector<std::vector<std::size_t>> reach(n_atoms + 1);
  reach[0] = {start};
  for (std::size_t k = 0; k < n_atoms; ++k) {
    auto& next = reach[k + 1];
    for (const std::size_t p : reach[k]) {
      for (const auto& [len, entry] : options_at(rule.atoms[k], p, cache)) next.push_back(p + len);
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    if (next.empty()) return std::nullopt;
  }
  const std::size_t end = reach[n_atoms].back();

  // live[k]: positions in reach[k] from which atoms k.. can still end at `end`.
  std::vector<std::vector<std::size_t>> live(n_atoms + 1);
  live[n_atoms] = {end};
  for (std::size_t k = n_atoms; k-- > 0;) {
    for (const std::size_t p : reach[k]) {
      for (const auto& [len, entry] : options_at(rule.atoms[k], p, cache)) {
        if (std::binary_search(live[k + 1].begin(), live[k + 1].end(), p + len)) {
          live[k].push_back(p);
          break;
        }
      }
    }
  }

  Alignment al;
  al.end = end;
  std::size_t p = start;
  for (std::size_t k = 0; k < n_atoms; ++k) {
    // Options come longest first: the first live one is the greedy choice.
    for (const auto& [len, entry] : options_at(rule.atoms[k], p, cache)) {
      if (std::binary_search(live[k + 1].begin(), live[k + 1].end(), p + len)) {
        al.steps.emplace_back(len, entry);
        p += len;
        break;
      }
    }
  }
  return al;
}

RawMatch to_raw(const Rule& rule, std::size_t rule_index, std::size_t start, const Alignment& al) {
  RawMatch m;
  m.rule = rule.name;
  m.rule_index = rule_index;
  m.span = {start, al.end};
  m.output = rule.output;
  m.priority = rule.priority;
  std::size_t p = start;
  for (std::size_t k = 0; k < rule.atoms.size(); ++k) {
    const auto [len, entry] = al.steps[k];
    if (rule.atoms[k].capture && len > 0) m.captures[*rule.atoms[k].capture] = Capture{{p, p + len}, entry};
    p += len;
  }
  return m;
}

}  // namespace

const Capture* RawMatch::capture(std::string_view name) const {
  const auto it = captures.find(std::string(name));
  return it == captures.end() ? nullptr : &it->second;
}

const Rule* CompiledGrammar::find(std::string_view name) const {
  for (const auto& r : rules_) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

CompiledGrammar compile(std::string_view source, const Lexicon& lexicon, const SpatialityMap& map,
                        const CompileOptions& options) {
  Parser parser(lex(source, options.origin), lexicon, map, options);
  return CompiledGrammar(parser.rules());
}

std::vector<std::pair<std::size_t, const LexEntry*>> atom_options(const PatternAtom& atom,
                                                                   std::span<const Segment> segments,
                                                                   std::size_t pos, const Lexicon& lexicon) {
  LookupCache cache(segments, lexicon);
  return options_at(atom, pos, cache);
}

std::vector<RawMatch> apply(const CompiledGrammar& grammar, std::span<const Segment> segments,
                            const Lexicon& lexicon) {
  std::vector<RawMatch> out;
  LookupCache cache(segments, lexicon);
  const auto& rules = grammar.rules();
  std::size_t i = 0;
  while (i < segments.size()) {
    std::optional<RawMatch> best;
    for (std::size_t r = 0; r < rules.size(); ++r) {
      const auto al = match_rule(rules[r], i, cache);
      if (!al) continue;
      const std::size_t len = al->end - i;
      if (best) {
        const bool better = rules[r].priority > best->priority ||
                            (rules[r].priority == best->priority && len > best->span.size());
        if (!better) continue;  // equal keys keep the earlier declaration
      }
      best = to_raw(rules[r], r, i, *al);
    }
    if (!best) {
      ++i;
      continue;
    }
    i = best->trigger().range.end;
    out.push_back(std::move(*best));
  }
  return out;
}

}  // namespace spatial
