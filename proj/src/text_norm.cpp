#include "spatial/text_norm.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <optional>
#include <sstream>

#include "spatial/error.hpp"
#include "spatial/utf8.hpp"

namespace spatial {

namespace {

constexpr char32_t kAlef = U'ا';
constexpr char32_t kLam = U'ل';
constexpr char32_t kWaw = U'و';
constexpr char32_t kFa = U'ف';
constexpr char32_t kBa = U'ب';
constexpr char32_t kKaf = U'ك';

bool in(char32_t c, char32_t lo, char32_t hi) { return c >= lo && c <= hi; }

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto tab = line.find('\t', pos);
    out.push_back(line.substr(pos, tab == std::string_view::npos ? std::string_view::npos : tab - pos));
    if (tab == std::string_view::npos) break;
    pos = tab + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \r\n\t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \r\n\t");
  return s.substr(first, last - first + 1);
}

// Folds a word; positions[i] is the original index of folded char i.
void fold_word(std::u32string_view text, std::size_t begin, std::size_t end, std::u32string& folded,
               std::vector<std::size_t>& positions) {
  folded.clear();
  positions.clear();
  for (std::size_t i = begin; i < end; ++i) {
    const char32_t f = fold_char(text[i]);
    if (f == U'\0') continue;
    folded.push_back(f);
    positions.push_back(i);
  }
}

struct Split {
  bool coord = false;
  bool prep = false;
  std::size_t article_len = 0;  // 0, 2 ("ال") or 1 (the ل of "لل" after prep ل)

  std::size_t clitic_chars() const { return (coord ? 1 : 0) + (prep ? 1 : 0) + article_len; }
  std::size_t count() const { return (coord ? 1 : 0) + (prep ? 1 : 0) + (article_len > 0 ? 1 : 0); }
};

bool is_prep_letter(char32_t c) { return c == kBa || c == kLam || c == kKaf; }

// Candidate splits in greedy order: more proclitics first, coordination
// preferred over preposition over article.
std::vector<Split> candidate_splits(std::u32string_view w) {
  std::vector<Split> out;
  const std::array<bool, 2> yes_no{true, false};
  for (bool c : yes_no) {
    if (c && (w.empty() || (w[0] != kWaw && w[0] != kFa))) continue;
    const std::size_t after_c = c ? 1 : 0;
    for (bool p : yes_no) {
      if (p && (w.size() <= after_c || !is_prep_letter(w[after_c]))) continue;
      const std::size_t after_p = after_c + (p ? 1 : 0);
      for (bool a : yes_no) {
        std::size_t alen = 0;
        if (a) {
          const bool full = w.size() > after_p + 1 && w[after_p] == kAlef && w[after_p + 1] == kLam;
          // ل + ال is written لل.
          const bool assimilated = p && w[after_c] == kLam && w.size() > after_p && w[after_p] == kLam;
          if (full) {
            alen = 2;
          } else if (assimilated) {
            alen = 1;
          } else {
            continue;
          }
        }
        if (!c && !p && alen == 0) continue;
        out.push_back(Split{c, p, alen});
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Split& a, const Split& b) { return a.count() > b.count(); });
  return out;
}

std::u32string apply_variant(const VariantTable& variants, std::u32string_view word) {
  if (const auto* canon = variants.find(word)) return *canon;
  return std::u32string(word);
}

}  // namespace

char32_t fold_char(char32_t c) {
  if (in(c, 0x064B, 0x065F) || c == 0x0670 || c == 0x0640 || in(c, 0x0610, 0x061A) || in(c, 0x06D6, 0x06ED) ||
      c == 0x200C || c == 0x200D) {
    return U'\0';
  }
  switch (c) {
    case 0x0622:  // آ
    case 0x0623:  // أ
    case 0x0625:  // إ
    case 0x0671:  // ٱ
      return kAlef;
    case 0x0649:  // ى
    case 0x06CC:  // Farsi yeh
      return U'ي';
    case 0x06A9:  // keheh
      return kKaf;
    default:
      return c;
  }
}

bool is_word_char(char32_t c) {
  if (c < 0x80) return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  if (in(c, 0x00C0, 0x024F)) return c != 0x00D7 && c != 0x00F7;
  if (in(c, 0x0610, 0x061A) || in(c, 0x0620, 0x0669) || in(c, 0x066E, 0x06D3) || in(c, 0x06D5, 0x06FF)) return true;
  if (in(c, 0x0750, 0x077F) || in(c, 0x08A0, 0x08FF)) return true;
  if (in(c, 0xFB50, 0xFDFF)) return c != 0xFD3E && c != 0xFD3F;
  if (in(c, 0xFE70, 0xFEFE)) return true;
  return c == 0x200C || c == 0x200D;
}

// ---------------------------------------------------------------------------
// VariantTable

void VariantTable::add(std::string_view variant, std::string_view canonical) {
  const auto v = normalize(variant).text;
  const auto c = normalize(canonical).text;
  const auto single_word = [](const std::u32string& w) {
    return !w.empty() && std::all_of(w.begin(), w.end(), is_word_char);
  };
  if (!single_word(v) || !single_word(c)) {
    throw ValidationError("variant mapping must relate two single words: '" + std::string(variant) + "' -> '" +
                          std::string(canonical) + "'");
  }
  if (v == c) return;
  if (map_.count(c)) {
    throw ValidationError("canonical form '" + std::string(canonical) + "' is itself listed as a variant");
  }
  for (const auto& [key, value] : map_) {
    if (value == v) {
      throw ValidationError("variant '" + std::string(variant) + "' is already used as a canonical form");
    }
  }
  const auto [it, inserted] = map_.emplace(v, c);
  if (!inserted && it->second != c) {
    throw ValidationError("variant '" + std::string(variant) + "' mapped to two canonical forms");
  }
}

VariantTable VariantTable::parse(std::string_view source, std::string_view origin) {
  VariantTable table;
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
    const auto cols = split_tabs(line);
    if (cols.size() != 2 || trim(cols[0]).empty() || trim(cols[1]).empty()) {
      throw ParseError(std::string(origin), line_no, 0, "expected 'variant<TAB>canonical'");
    }
    try {
      table.add(trim(cols[0]), trim(cols[1]));
    } catch (const ValidationError& e) {
      throw ParseError(std::string(origin), line_no, 0, e.what());
    }
  }
  return table;
}

VariantTable VariantTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open variant table: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

const std::u32string* VariantTable::find(std::u32string_view word) const {
  const auto it = map_.find(std::u32string(word));
  return it == map_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// normalize

std::string Normalized::utf8() const { return utf8::encode(text); }

Normalized normalize(std::u32string_view text, const VariantTable& variants) {
  Normalized out;
  out.text.reserve(text.size());
  out.to_original.reserve(text.size());
  std::u32string folded;
  std::vector<std::size_t> positions;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_word_char(text[i])) {
      out.text.push_back(text[i]);
      out.to_original.push_back(i);
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_word_char(text[j])) ++j;
    fold_word(text, i, j, folded, positions);
    if (const auto* canon = variants.find(folded); canon != nullptr && !positions.empty()) {
      for (std::size_t k = 0; k < canon->size(); ++k) {
        out.text.push_back((*canon)[k]);
        out.to_original.push_back(positions[std::min(k, positions.size() - 1)]);
      }
    } else {
      out.text += folded;
      out.to_original.insert(out.to_original.end(), positions.begin(), positions.end());
    }
    i = j;
  }
  return out;
}

Normalized normalize(std::string_view text, const VariantTable& variants) {
  return normalize(std::u32string_view(utf8::decode(text)), variants);
}

std::string normalize_form(std::string_view text, const VariantTable& variants) {
  return normalize(text, variants).utf8();
}

// ---------------------------------------------------------------------------
// tokenize

std::string_view to_string(CliticKind kind) {
  switch (kind) {
    case CliticKind::Coordination:
      return "coordination";
    case CliticKind::Preposition:
      return "preposition";
    case CliticKind::Article:
      return "article";
  }
  return "?";
}

bool Token::has(CliticKind kind) const {
  return std::any_of(proclitics.begin(), proclitics.end(), [kind](const Proclitic& p) { return p.kind == kind; });
}

bool ArticleLicense::licenses_unknown(std::span<const CliticKind> sequence) const {
  return std::find(sequence.begin(), sequence.end(), CliticKind::Article) != sequence.end();
}

std::vector<Token> tokenize(std::string_view text, const CliticLicense& license, const VariantTable& variants) {
  const std::u32string chars = utf8::decode(text);
  std::vector<Token> tokens;
  std::u32string folded;
  std::vector<std::size_t> positions;

  std::size_t i = 0;
  while (i < chars.size()) {
    if (!is_word_char(chars[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < chars.size() && is_word_char(chars[j])) ++j;
    const std::size_t begin = i;
    const std::size_t end = j;
    i = j;

    fold_word(chars, begin, end, folded, positions);
    if (folded.empty()) continue;

    Token tok;
    tok.span = {begin, end};
    tok.surface = utf8::encode(std::u32string_view(chars).substr(begin, end - begin));
    const std::u32string whole = apply_variant(variants, folded);
    tok.norm = utf8::encode(whole);

    std::optional<Split> chosen;
    std::u32string residue;
    if (!license.is_known_word(tok.norm)) {
      const auto candidates = candidate_splits(folded);
      const auto residue_of = [&](const Split& s) {
        std::u32string_view rest = std::u32string_view(folded).substr(s.clitic_chars());
        return s.article_len > 0 ? std::u32string(rest) : apply_variant(variants, rest);
      };
      for (const auto& s : candidates) {
        if (folded.size() < s.clitic_chars() + 2) continue;
        auto r = residue_of(s);
        if (license.is_known_word(utf8::encode(r))) {
          chosen = s;
          residue = std::move(r);
          break;
        }
      }
      if (!chosen) {
        for (const auto& s : candidates) {
          if (folded.size() < s.clitic_chars() + 2) continue;
          std::vector<CliticKind> seq;
          if (s.coord) seq.push_back(CliticKind::Coordination);
          if (s.prep) seq.push_back(CliticKind::Preposition);
          if (s.article_len > 0) seq.push_back(CliticKind::Article);
          if (license.licenses_unknown(seq)) {
            chosen = s;
            residue = residue_of(s);
            break;
          }
        }
      }
    }

    if (!chosen) {
      tok.stem_span = tok.span;
      tok.stem = tok.norm;
    } else {
      std::size_t k = 0;
      const auto piece = [&](CliticKind kind, std::size_t len, std::string form) {
        const std::size_t s = (k == 0) ? begin : positions[k];
        const std::size_t e = positions[k + len];
        tok.proclitics.push_back(Proclitic{kind, std::move(form), {s, e}});
        k += len;
      };
      if (chosen->coord) piece(CliticKind::Coordination, 1, utf8::encode(std::u32string(1, folded[0])));
      if (chosen->prep) piece(CliticKind::Preposition, 1, utf8::encode(std::u32string(1, folded[k])));
      if (chosen->article_len > 0) piece(CliticKind::Article, chosen->article_len, "ال");
      tok.stem_span = {positions[k], end};
      tok.stem = utf8::encode(residue);
    }
    tokens.push_back(std::move(tok));
  }
  return tokens;
}

std::vector<Token> tokenize(std::string_view text) { return tokenize(text, ArticleLicense{}); }

std::vector<Segment> segment(std::span<const Token> tokens) {
  std::vector<Segment> out;
  out.reserve(tokens.size() + tokens.size() / 4);
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    const Token& tok = tokens[t];
    bool coordinated = tok.has(CliticKind::Coordination);
    std::size_t stem_start = tok.span.start;
    for (const auto& p : tok.proclitics) {
      if (p.kind == CliticKind::Coordination) {
        stem_start = p.span.end;
      } else if (p.kind == CliticKind::Preposition) {
        Segment seg;
        seg.span = p.span;
        seg.form = p.form;
        seg.token = t;
        seg.is_proclitic = true;
        seg.coordinated = coordinated;
        coordinated = false;
        out.push_back(std::move(seg));
        stem_start = p.span.end;
      }
    }
    Segment seg;
    seg.span = {stem_start, tok.span.end};
    seg.form = tok.stem;
    seg.token = t;
    seg.coordinated = coordinated;
    seg.has_article = tok.has(CliticKind::Article);
    out.push_back(std::move(seg));
  }
  return out;
}

}  // namespace spatial
