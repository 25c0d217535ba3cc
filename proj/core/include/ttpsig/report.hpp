#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ttpsig/miner.hpp"
#include "ttpsig/profiling.hpp"
#include "ttpsig/refbase.hpp"

namespace ttpsig {

enum class ReportFormat { Text, Markdown, Csv, Json };
enum class ConfidenceDisplay { TruncatedPercent, TwoDecimalPercent };

std::optional<ReportFormat> parse_report_format(std::string_view s) noexcept;
std::optional<ConfidenceDisplay> parse_confidence_display(std::string_view s) noexcept;

struct RenderConfig {
  ReportFormat format = ReportFormat::Text;
  ConfidenceDisplay confidence = ConfidenceDisplay::TruncatedPercent;
  int lift_decimals = 2;   // rule tables
  int stats_decimals = 3;  // summary tables
  /// Supplies technique display names; may be null.
  const ReferenceBase* names = nullptr;

  /// Throws InvalidArgument unless both precisions are within [0, 6].
  void validate() const;
};

/// Fixed-point rendering rounded half-up, '.' as separator.
std::string format_half_up(double value, int decimals);

/// Confidence as percent: truncated toward zero ("66" for 2/3) or with two
/// half-up decimals ("66.67").
std::string format_confidence(double confidence, ConfidenceDisplay display);

/// "Name (T1024)" when the base knows the technique, the bare item otherwise.
std::string item_label(std::string_view item, const ReferenceBase* names);

/// One row per rule, columns ID, Antecedent, Consequent, Support,
/// Confidence, Lift. Text rows join cells with two spaces.
std::string render_rule_table(std::span<const AssociationRule> rules, const RenderConfig& config);

std::string render_profiles(std::span<const ActorProfile> profiles, const RenderConfig& config);

/// Corpus-wide measures (min/max/mean/median/mode/stddev/IQR of antecedent
/// support, confidence and lift) followed by one line per actor.
std::string render_stats(std::span<const RuleSet> sets, const RenderConfig& config);

/// Most shared rules and the three similarity matrices.
std::string render_comparison(std::span<const SharedRuleEntry> shared, std::size_t top_k,
                              const SimilarityMatrix& matrix, const RenderConfig& config);

enum class SimilarityMetric { Jaccard, OverlapDice, DiceStandard };
std::optional<SimilarityMetric> parse_similarity_metric(std::string_view s) noexcept;
std::string_view to_string(SimilarityMetric m) noexcept;

/// CSV with an actor header row and an actor name leading every row.
std::string render_matrix_csv(const SimilarityMatrix& matrix, SimilarityMetric metric);

}  // namespace ttpsig
