#include "spatial/eval.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "spatial/semantic_map.hpp"
#include "spatial/utf8.hpp"

namespace spatial {

std::string_view to_string(MatchMode mode) {
  return mode == MatchMode::TriggerExact ? "trigger-exact" : "span-overlap";
}

std::optional<MatchMode> parse_match_mode(std::string_view text) {
  if (text == "trigger-exact") return MatchMode::TriggerExact;
  if (text == "span-overlap") return MatchMode::SpanOverlap;
  return std::nullopt;
}

std::uint64_t Ratio::hundredths() const {
  if (den == 0) return 0;
  return (200 * num + den) / (2 * den);
}

namespace {

std::string hundredths_to_string(std::uint64_t h) {
  std::string frac = std::to_string(h % 100);
  if (frac.size() < 2) frac.insert(0, "0");
  return std::to_string(h / 100) + "." + frac;
}

}  // namespace

std::string Ratio::to_string() const { return hundredths_to_string(hundredths()); }

std::string format_2dp(double x) {
  // The epsilon absorbs binary representation error on exact halves (0.125 etc.).
  return hundredths_to_string(static_cast<std::uint64_t>(x * 100.0 + 0.5 + 1e-9));
}

double f_measure(double p, double r) {
  if (p < 0.0 || p > 1.0 || r < 0.0 || r > 1.0) throw std::invalid_argument("f_measure: p and r must lie in [0, 1]");
  if (p + r == 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

CategoryScore EvalReport::overall() const {
  CategoryScore total{"ALL"};
  for (const auto& c : categories) {
    total.tp += c.tp;
    total.fp += c.fp;
    total.fn += c.fn;
  }
  return total;
}

const CategoryScore& EvalReport::category(std::string_view top_level) const {
  for (const auto& c : categories) {
    if (c.category == top_level) return c;
  }
  throw std::out_of_range("no category " + std::string(top_level) + " in report");
}

namespace {

std::size_t category_index(std::string_view path) {
  const auto top = top_level_of(path);
  for (std::size_t i = 0; i < kTopLevelCategories.size(); ++i) {
    if (kTopLevelCategories[i] == top) return i;
  }
  throw DataMismatch("annotation category '" + std::string(path) + "' has no known top-level category");
}

std::string trigger_lemma(const std::u32string& text, const OffsetSpan& s) {
  if (s.end > text.size()) return {};
  const auto surface = utf8::encode(std::u32string_view(text).substr(s.start, s.size()));
  std::string out;
  for (const auto& seg : segment(tokenize(surface))) {
    if (!out.empty()) out += ' ';
    out += seg.form;
  }
  return out;
}

bool compatible(const SpatialAnnotation& sys, const SpatialAnnotation& gold, MatchMode mode) {
  if (top_level_of(sys.category) != top_level_of(gold.category)) return false;
  return mode == MatchMode::TriggerExact ? sys.trigger == gold.trigger : sys.span.overlaps(gold.span);
}

std::vector<std::size_t> order_by_position(const std::vector<SpatialAnnotation>& anns) {
  std::vector<std::size_t> idx(anns.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (anns[a].span.start != anns[b].span.start) return anns[a].span.start < anns[b].span.start;
    return anns[a].trigger.start < anns[b].trigger.start;
  });
  return idx;
}

void score_document(const AnnotatedDocument& gold, const AnnotatedDocument& sys, MatchMode mode, EvalReport& rep) {
  const auto text = utf8::decode(gold.text);
  std::vector<bool> used(gold.annotations.size(), false);
  const auto gold_order = order_by_position(gold.annotations);

  for (const auto si : order_by_position(sys.annotations)) {
    const auto& s = sys.annotations[si];
    const std::size_t cat = category_index(s.category);
    std::optional<std::size_t> hit;
    for (const auto gi : gold_order) {
      if (!used[gi] && compatible(s, gold.annotations[gi], mode)) {
        hit = gi;
        break;
      }
    }
    if (hit) {
      used[*hit] = true;
      ++rep.categories[cat].tp;
      continue;
    }
    ++rep.categories[cat].fp;
    std::string reason = "no gold annotation at this position";
    for (const auto& g : gold.annotations) {
      const bool same_place = mode == MatchMode::TriggerExact ? g.trigger == s.trigger : g.span.overlaps(s.span);
      if (same_place && top_level_of(g.category) != top_level_of(s.category)) {
        reason = "category mismatch: gold " + g.category;
        break;
      }
    }
    rep.bruit.push_back(BruitEntry{sys.doc_id, s, trigger_lemma(text, s.trigger), std::move(reason)});
  }
  for (const auto gi : gold_order) {
    if (used[gi]) continue;
    const auto& g = gold.annotations[gi];
    ++rep.categories[category_index(g.category)].fn;
    rep.silence.push_back(SilenceEntry{gold.doc_id, g, trigger_lemma(text, g.trigger)});
  }
}

EvalReport empty_report(MatchMode mode) {
  EvalReport rep;
  rep.mode = mode;
  for (const auto c : kTopLevelCategories) rep.categories.push_back(CategoryScore{std::string(c)});
  return rep;
}

}  // namespace

EvalReport score(std::span<const AnnotatedDocument> gold, std::span<const AnnotatedDocument> system, MatchMode mode) {
  std::unordered_map<std::string, const AnnotatedDocument*> by_id;
  for (const auto& d : system) {
    if (!by_id.emplace(d.doc_id, &d).second) throw DataMismatch("duplicate system doc_id '" + d.doc_id + "'");
  }
  std::vector<std::string> missing;
  std::unordered_map<std::string, bool> seen;
  for (const auto& g : gold) {
    if (!seen.emplace(g.doc_id, true).second) throw DataMismatch("duplicate gold doc_id '" + g.doc_id + "'");
    if (!by_id.count(g.doc_id)) missing.push_back(g.doc_id);
  }
  std::vector<std::string> extra;
  for (const auto& d : system) {
    if (!seen.count(d.doc_id)) extra.push_back(d.doc_id);
  }
  if (!missing.empty() || !extra.empty()) {
    std::string msg = "document sets differ";
    const auto list = [&msg](const char* label, std::vector<std::string> ids) {
      if (ids.empty()) return;
      std::sort(ids.begin(), ids.end());
      msg += std::string("; ") + label + ":";
      for (const auto& id : ids) msg += " " + id;
    };
    list("missing from system", missing);
    list("missing from gold", extra);
    throw DataMismatch(msg);
  }

  EvalReport rep = empty_report(mode);
  for (const auto& g : gold) {
    const auto& s = *by_id.at(g.doc_id);
    if (s.text != g.text) throw DataMismatch("text of document '" + g.doc_id + "' differs between gold and system");
    score_document(g, s, mode, rep);
  }
  return rep;
}

EvalReport report_from_counts(const std::array<std::array<std::size_t, 3>, 3>& tp_fp_fn) {
  EvalReport rep = empty_report(MatchMode::TriggerExact);
  for (std::size_t i = 0; i < 3; ++i) {
    rep.categories[i].tp = tp_fp_fn[i][0];
    rep.categories[i].fp = tp_fp_fn[i][1];
    rep.categories[i].fn = tp_fp_fn[i][2];
  }
  return rep;
}

SplitResult split(std::span<const std::string> doc_ids, std::uint64_t seed) {
  if (doc_ids.empty()) throw std::invalid_argument("split: empty document list");
  std::vector<std::string> ids(doc_ids.begin(), doc_ids.end());
  // std::uniform_int_distribution is implementation-defined; bounded draws
  // are done by rejection so partitions are identical across toolchains.
  std::mt19937_64 rng(seed);
  const auto below = [&rng](std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return x % bound;
  };
  for (std::size_t i = ids.size() - 1; i > 0; --i) std::swap(ids[i], ids[below(i + 1)]);

  const std::size_t n_work = (3 * ids.size() + 3) / 4;
  SplitResult out;
  out.work.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_work));
  out.eval.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_work), ids.end());
  return out;
}

ErrorReport error_report(const EvalReport& report) {
  std::map<std::pair<std::string, std::string>, std::size_t> bruit;
  for (const auto& b : report.bruit) ++bruit[{b.annotation.rule, b.trigger_lemma}];
  std::map<std::string, std::size_t> silence;
  for (const auto& s : report.silence) ++silence[std::string(top_level_of(s.annotation.category))];

  ErrorReport out;
  for (const auto& [key, n] : bruit) out.bruit.push_back(BruitGroup{key.first, key.second, n});
  for (const auto& [cat, n] : silence) out.silence.push_back(SilenceGroup{cat, n});
  std::stable_sort(out.bruit.begin(), out.bruit.end(), [](const BruitGroup& a, const BruitGroup& b) { return a.count > b.count; });
  std::stable_sort(out.silence.begin(), out.silence.end(),
                   [](const SilenceGroup& a, const SilenceGroup& b) { return a.count > b.count; });
  return out;
}

namespace {

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::string format_table(const EvalReport& report) {
  std::ostringstream out;
  out << pad("Relation", 14) << pad("R", 7) << pad("P", 7) << "F\n";
  const auto row = [&out](const CategoryScore& c) {
    out << pad(c.category, 14) << pad(c.recall().to_string(), 7) << pad(c.precision().to_string(), 7)
        << c.f_measure().to_string() << "\n";
  };
  for (const auto& c : report.categories) row(c);
  row(report.overall());
  return out.str();
}

std::string format_errors(const ErrorReport& errors) {
  std::ostringstream out;
  if (!errors.bruit.empty()) {
    out << "Bruit (false positives) by rule and trigger:\n";
    for (const auto& g : errors.bruit) out << "  " << pad(g.rule.empty() ? "-" : g.rule, 24) << pad(g.lemma, 16) << g.count << "\n";
  }
  if (!errors.silence.empty()) {
    out << "Silence (false negatives) by category:\n";
    for (const auto& g : errors.silence) out << "  " << pad(g.category, 24) << g.count << "\n";
  }
  return out.str();
}

std::string report_json(const EvalReport& report) {
  using ojson = nlohmann::ordered_json;
  const auto ratio = [](const Ratio& r) { return ojson{{"num", r.num}, {"den", r.den}, {"rounded", r.to_string()}}; };
  const auto cat = [&](const CategoryScore& c) {
    return ojson{{"category", c.category},   {"tp", c.tp},
                 {"fp", c.fp},               {"fn", c.fn},
                 {"precision", ratio(c.precision())}, {"recall", ratio(c.recall())},
                 {"f_measure", ratio(c.f_measure())}};
  };
  const auto span = [](const OffsetSpan& s) { return ojson{{"start", s.start}, {"end", s.end}}; };

  ojson root;
  root["mode"] = std::string(to_string(report.mode));
  root["categories"] = ojson::array();
  for (const auto& c : report.categories) root["categories"].push_back(cat(c));
  root["overall"] = cat(report.overall());
  root["bruit"] = ojson::array();
  for (const auto& b : report.bruit) {
    root["bruit"].push_back(ojson{{"doc_id", b.doc_id},
                                  {"category", b.annotation.category},
                                  {"trigger", span(b.annotation.trigger)},
                                  {"trigger_lemma", b.trigger_lemma},
                                  {"rule", b.annotation.rule},
                                  {"reason", b.reason}});
  }
  root["silence"] = ojson::array();
  for (const auto& s : report.silence) {
    root["silence"].push_back(ojson{{"doc_id", s.doc_id},
                                    {"category", s.annotation.category},
                                    {"trigger", span(s.annotation.trigger)},
                                    {"trigger_lemma", s.trigger_lemma}});
  }
  const auto errors = error_report(report);
  root["error_groups"] = ojson::object();
  root["error_groups"]["bruit"] = ojson::array();
  for (const auto& g : errors.bruit) {
    root["error_groups"]["bruit"].push_back(ojson{{"rule", g.rule}, {"lemma", g.lemma}, {"count", g.count}});
  }
  root["error_groups"]["silence"] = ojson::array();
  for (const auto& g : errors.silence) {
    root["error_groups"]["silence"].push_back(ojson{{"category", g.category}, {"count", g.count}});
  }
  return root.dump(2) + "\n";
}

}  // namespace spatial
