#include "spatial/spatial_grammar.hpp"

#include <algorithm>

#include "spatial/resources.hpp"

namespace spatial {

namespace {

const LexEntry* site_entry(const RawMatch& match) {
  const auto* site = match.capture("site");
  return site == nullptr ? nullptr : site->entry;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_negation(const Token& tok) {
  const auto& particles = negation_particles();
  const auto matches = [&](std::string_view w) { return std::find(particles.begin(), particles.end(), w) != particles.end(); };
  if (matches(tok.norm) || matches(tok.stem)) return true;
  // ولم / فلا: coordination is only detached when the residue is a lexicon word.
  for (std::string_view coord : {"و", "ف"}) {
    if (tok.norm.size() > coord.size() && tok.norm.compare(0, coord.size(), coord) == 0 &&
        matches(std::string_view(tok.norm).substr(coord.size()))) {
      return true;
    }
  }
  return false;
}

bool has_noun_reading(const GuardContext& ctx, std::size_t seg) {
  for (const auto& m : ctx.lexicon.lookup(ctx.segments, seg)) {
    if (is_noun_class(m.entry->cls)) return true;
  }
  return false;
}

}  // namespace

const std::set<std::string, std::less<>>& known_guards() {
  static const std::set<std::string, std::less<>> guards{
      std::string(kGuardNegScope),           std::string(kGuardAbstractSite), std::string(kGuardTemporalSite),
      std::string(kGuardPossessiveRequired), std::string(kGuardDualSense),    std::string(kGuardPluralSite),
  };
  return guards;
}

const std::vector<std::string>& negation_particles() {
  static const std::vector<std::string> particles{"لا", "لم", "لن", "ما", "ليس", "ليست"};
  return particles;
}

bool guard_neg_scope(const GuardContext& ctx, const RawMatch& match) {
  const auto* anchor = match.capture("verb");
  if (anchor == nullptr) anchor = &match.trigger();
  const std::size_t tok = ctx.segments[anchor->range.begin].token;
  const std::size_t from = tok >= kNegationWindow ? tok - kNegationWindow : 0;
  for (std::size_t t = from; t < tok; ++t) {
    if (is_negation(ctx.tokens[t])) return true;
  }
  return false;
}

bool guard_abstract_site(const GuardContext&, const RawMatch& match) {
  const auto* e = site_entry(match);
  return e != nullptr && e->has(LexFlag::ABSTRACT_CAPABLE);
}

bool guard_temporal_site(const GuardContext&, const RawMatch& match) {
  const auto* e = site_entry(match);
  return e != nullptr && e->cls == LexClass::NOUN_TEMPORAL;
}

bool guard_possessive_required(const GuardContext& ctx, const RawMatch& match) {
  const auto& trigger = match.trigger();
  if (trigger.entry != nullptr && !trigger.entry->possessive_suffix.empty()) return false;
  if (match.capture("site") != nullptr) return false;
  const std::size_t after = trigger.range.end;
  if (after < ctx.segments.size() && has_noun_reading(ctx, after)) return false;
  return true;
}

bool guard_plural_site(const GuardContext& ctx, const RawMatch& match) {
  const auto* site = match.capture("site");
  if (site == nullptr) return true;
  for (std::size_t s = site->range.begin; s < site->range.end; ++s) {
    const auto& form = ctx.segments[s].form;
    for (std::string_view ending : {"ين", "ان", "ات", "ون"}) {
      if (ends_with(form, ending)) return false;
    }
    // Unvocalized dual construct: ذراعي reads as "my two arms" after بين.
    for (const auto& suffix : pronoun_suffixes()) {
      if (!ends_with(form, suffix) || form.size() == suffix.size()) continue;
      for (const auto* e : ctx.lexicon.find(form.substr(0, form.size() - suffix.size()))) {
        if (is_noun_class(e->cls)) return false;
      }
    }
  }
  const std::size_t after = site->range.end;
  if (after < ctx.segments.size() && ctx.segments[after].coordinated) return false;
  return true;
}

std::vector<std::string> guard_dual_sense(const GuardContext&, const RawMatch& match) {
  std::vector<std::string> alternates;
  const auto* e = match.trigger().entry;
  if (e == nullptr) return alternates;
  for (const auto& sense : e->senses) {
    if (sense != match.output && std::find(alternates.begin(), alternates.end(), sense) == alternates.end()) {
      alternates.push_back(sense);
    }
  }
  return alternates;
}

GuardOutcome evaluate_guards(const GuardContext& ctx, const Rule& rule, const RawMatch& match) {
  GuardOutcome out;
  for (const auto& g : rule.guards) {
    bool veto = false;
    if (g == kGuardNegScope) {
      veto = guard_neg_scope(ctx, match);
    } else if (g == kGuardAbstractSite) {
      veto = guard_abstract_site(ctx, match);
    } else if (g == kGuardTemporalSite) {
      veto = guard_temporal_site(ctx, match);
    } else if (g == kGuardPossessiveRequired) {
      veto = guard_possessive_required(ctx, match);
    } else if (g == kGuardPluralSite) {
      veto = guard_plural_site(ctx, match);
    } else if (g == kGuardDualSense) {
      for (auto& alt : guard_dual_sense(ctx, match)) out.alternates.push_back(std::move(alt));
    }
    if (veto && !out.vetoed) {
      out.vetoed = true;
      out.vetoed_by = g;
    }
  }
  return out;
}

std::string_view rule_pack() { return resources::rules_dsl(); }

CompiledGrammar compile_rules(std::string_view source, const Lexicon& lexicon, const SpatialityMap& map,
                              std::string origin) {
  CompileOptions opts;
  opts.known_guards = known_guards();
  opts.origin = std::move(origin);
  return compile(source, lexicon, map, opts);
}

const CompiledGrammar& default_grammar() {
  static const CompiledGrammar grammar = compile_rules(rule_pack(), seed_lexicon(), default_map(), "<rule pack>");
  return grammar;
}

}  // namespace spatial
