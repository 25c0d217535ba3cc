#pragma once

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ttpsig/miner.hpp"

namespace ttpsig {

/// Descriptive statistics over one metric column.
///
/// median averages the middle pair for even sizes. mode is taken over values
/// rounded to kModeDecimals places (smallest wins a tie). stddev is the
/// population deviation. iqr = Q3 - Q1 with quartiles as medians of the lower
/// and upper halves, the overall median excluded for odd sizes.
struct SummaryStats {
  double min = 0, max = 0, mean = 0, median = 0, mode = 0, stddev = 0, iqr = 0;
};

inline constexpr int kModeDecimals = 3;

/// Throws InvalidArgument on an empty input.
SummaryStats summary_stats(std::span<const double> values);

struct ActorProfile {
  std::string actor;
  std::size_t rule_count = 0;
  // Unset (all zero) when the actor has no rules.
  SummaryStats pair_support;
  SummaryStats antecedent_support;
  SummaryStats confidence;
  SummaryStats lift;
  std::vector<AssociationRule> top_rules;
};

/// First k rules in canonical order (lift first).
std::vector<AssociationRule> top_k_rules(const RuleSet& rules, std::size_t k);

ActorProfile profile_actor(const RuleSet& rules, std::size_t top_k);

/// The k actors with the most rules; ties go to the smaller name.
std::vector<std::string> select_actors_by_rule_count(std::span<const RuleSet> sets,
                                                     std::size_t k = 5);

/// Rule sets of the named actors, in the given order. Unknown actors get an
/// empty set.
std::vector<RuleSet> pick_actors(std::span<const RuleSet> sets,
                                 std::span<const std::string> actors);

/// Ordered (antecedent, consequent) identity of a rule.
using RulePair = std::pair<std::string, std::string>;
using RulePairSet = std::set<RulePair>;

RulePairSet rule_pairs(const RuleSet& rules);

struct SharedRuleEntry {
  RulePair pair;
  std::size_t count = 0;            // == actors.size()
  std::vector<std::string> actors;  // ascending
};

/// One entry per distinct ordered pair across all sets; sorted by count
/// desc, then pair asc.
std::vector<SharedRuleEntry> shared_rules(std::span<const RuleSet> sets);

/// Each set restricted to the pairs that occur in at least two distinct
/// actors' sets.
std::vector<RuleSet> repetitive_subset(std::span<const RuleSet> sets);

// Set coefficients. Two empty sets score 1, one empty set scores 0.

template <typename T>
std::size_t intersection_size(const std::set<T>& a, const std::set<T>& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

/// |a ∩ b| / |a ∪ b|
template <typename T>
double jaccard(const std::set<T>& a, const std::set<T>& b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  const std::size_t inter = intersection_size(a, b);
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

/// |a ∩ b| / min(|a|, |b|). Mathematically the overlap coefficient; reported
/// as "Dice" in some threat-intelligence literature.
template <typename T>
double overlap_dice(const std::set<T>& a, const std::set<T>& b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  return static_cast<double>(intersection_size(a, b)) /
         static_cast<double>(std::min(a.size(), b.size()));
}

/// Textbook Sørensen–Dice: 2|a ∩ b| / (|a| + |b|).
template <typename T>
double dice_standard(const std::set<T>& a, const std::set<T>& b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  return 2.0 * static_cast<double>(intersection_size(a, b)) /
         static_cast<double>(a.size() + b.size());
}

struct SimilarityMatrix {
  std::vector<std::string> actors;
  std::vector<std::vector<double>> jaccard;
  std::vector<std::vector<double>> overlap_dice;
  std::vector<std::vector<double>> dice_standard;
};

/// All three coefficients over ordered rule-pair sets, actors in input order.
SimilarityMatrix similarity_matrix(std::span<const RuleSet> sets);

}  // namespace ttpsig
