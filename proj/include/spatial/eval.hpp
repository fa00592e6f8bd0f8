#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spatial/annotator.hpp"
#include "spatial/error.hpp"

namespace spatial {

// Gold and system document sets that cannot be compared.
class DataMismatch : public Error {
 public:
  using Error::Error;
};

enum class MatchMode {
  TriggerExact,  // trigger spans equal, top-level category equal
  SpanOverlap,   // annotation spans overlap, top-level category equal
};

std::string_view to_string(MatchMode mode);  // "trigger-exact" / "span-overlap"
std::optional<MatchMode> parse_match_mode(std::string_view text);

// Exact non-negative rational; den == 0 reads as 0.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 0;

  double value() const { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }
  // Hundredths, rounded half-up.
  std::uint64_t hundredths() const;
  // Two decimals, half-up: "0.79".
  std::string to_string() const;
  friend bool operator==(const Ratio& a, const Ratio& b) {
    return a.num * b.den == b.num * a.den && (a.den == 0) == (b.den == 0);
  }
};

// Two decimals, half-up, for a double in [0, 1].
std::string format_2dp(double x);

inline constexpr std::array<std::string_view, 3> kTopLevelCategories = {"TOPOLOGICAL", "PROJECTIVE", "DIRECTIONAL"};

struct CategoryScore {
  std::string category;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  Ratio precision() const { return Ratio{tp, tp + fp}; }
  Ratio recall() const { return Ratio{tp, tp + fn}; }
  // 2PR/(P+R) reduced to counts: 2tp / (2tp + fp + fn).
  Ratio f_measure() const { return tp == 0 ? Ratio{0, 0} : Ratio{2 * tp, 2 * tp + fp + fn}; }
};

struct BruitEntry {
  std::string doc_id;
  SpatialAnnotation annotation;
  std::string trigger_lemma;
  std::string reason;
};

struct SilenceEntry {
  std::string doc_id;
  SpatialAnnotation annotation;
  std::string trigger_lemma;
};

struct EvalReport {
  MatchMode mode = MatchMode::TriggerExact;
  std::vector<CategoryScore> categories;  // kTopLevelCategories order
  std::vector<BruitEntry> bruit;
  std::vector<SilenceEntry> silence;

  CategoryScore overall() const;
  const CategoryScore& category(std::string_view top_level) const;
};

// 2pr/(p+r); 0 when p+r = 0. Throws std::invalid_argument outside [0,1].
double f_measure(double p, double r);

// Greedy one-to-one alignment per document: system annotations in span order
// each take the unmatched compatible gold annotation with the smallest start.
// Throws DataMismatch when doc ids or texts differ.
EvalReport score(std::span<const AnnotatedDocument> gold, std::span<const AnnotatedDocument> system, MatchMode mode);

// Builds a report directly from counts (category order as kTopLevelCategories).
EvalReport report_from_counts(const std::array<std::array<std::size_t, 3>, 3>& tp_fp_fn);

struct SplitResult {
  std::vector<std::string> work;  // ceil(0.75 n)
  std::vector<std::string> eval;
};

// Seeded Fisher-Yates shuffle (mt19937_64, unbiased bounded draws) then a
// 75/25 cut. Throws std::invalid_argument for an empty list.
SplitResult split(std::span<const std::string> doc_ids, std::uint64_t seed);

struct BruitGroup {
  std::string rule;
  std::string lemma;
  std::size_t count = 0;
};

struct SilenceGroup {
  std::string category;  // top level
  std::size_t count = 0;
};

struct ErrorReport {
  std::vector<BruitGroup> bruit;      // by (rule, lemma)
  std::vector<SilenceGroup> silence;  // by category
  bool empty() const { return bruit.empty() && silence.empty(); }
};

// Groups are ordered by count desc, then key asc.
ErrorReport error_report(const EvalReport& report);

// Human-readable R/P/F table, one row per top-level category plus a total.
std::string format_table(const EvalReport& report);
// Grouped error listing.
std::string format_errors(const ErrorReport& errors);
// Machine-readable report: raw counts, rationals and error lists.
std::string report_json(const EvalReport& report);

}  // namespace spatial
