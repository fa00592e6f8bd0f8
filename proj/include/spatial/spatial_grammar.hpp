#pragma once

#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spatial/grammar_engine.hpp"
#include "spatial/lexicon.hpp"
#include "spatial/text_norm.hpp"

namespace spatial {

// Guard names usable in GUARD clauses. The blocking ones veto a match;
// DUAL_SENSE only attaches alternate categories.
inline constexpr std::string_view kGuardNegScope = "NEG_SCOPE";
inline constexpr std::string_view kGuardAbstractSite = "ABSTRACT_SITE";
inline constexpr std::string_view kGuardTemporalSite = "TEMPORAL_SITE";
inline constexpr std::string_view kGuardPossessiveRequired = "POSSESSIVE_REQUIRED";
inline constexpr std::string_view kGuardDualSense = "DUAL_SENSE";
inline constexpr std::string_view kGuardPluralSite = "PLURAL_SITE";

const std::set<std::string, std::less<>>& known_guards();

// Negation particles checked by NEG_SCOPE; "كي لا" is covered by "لا".
const std::vector<std::string>& negation_particles();
inline constexpr std::size_t kNegationWindow = 3;

// What a guard sees: the tokens and segments of one document.
struct GuardContext {
  std::span<const Token> tokens;
  std::span<const Segment> segments;
  const Lexicon& lexicon;
};

// true = veto. A particle within kNegationWindow tokens before the verb
// capture (or the trigger when there is none).
bool guard_neg_scope(const GuardContext& ctx, const RawMatch& match);
// Site entry flagged ABSTRACT_CAPABLE.
bool guard_abstract_site(const GuardContext& ctx, const RawMatch& match);
// Site entry of class NOUN_TEMPORAL.
bool guard_temporal_site(const GuardContext& ctx, const RawMatch& match);
// Bare يمين/يسار: trigger without a pronoun suffix and without a following noun.
bool guard_possessive_required(const GuardContext& ctx, const RawMatch& match);
// Site lacks dual/plural morphology and is not coordinated.
bool guard_plural_site(const GuardContext& ctx, const RawMatch& match);
// Other senses of the trigger entry, excluding the rule output.
std::vector<std::string> guard_dual_sense(const GuardContext& ctx, const RawMatch& match);

struct GuardOutcome {
  bool vetoed = false;
  std::string vetoed_by;
  std::vector<std::string> alternates;
};

// Runs every guard named by the match's rule, in declaration order.
GuardOutcome evaluate_guards(const GuardContext& ctx, const Rule& rule, const RawMatch& match);

// The shipped rule pack source.
std::string_view rule_pack();

// Compiles DSL source with guard-name validation enabled.
CompiledGrammar compile_rules(std::string_view source, const Lexicon& lexicon, const SpatialityMap& map,
                              std::string origin = "<rules>");

// rule_pack() compiled against seed_lexicon() and default_map().
const CompiledGrammar& default_grammar();

}  // namespace spatial
