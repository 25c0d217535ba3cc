#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ttpsig/transactions.hpp"

namespace ttpsig {

/// Thresholds for one-to-one rule mining.
///
/// Candidate support CS = cs_base + ceil(cs_fraction * n) transactions, where
/// n is the actor's transaction count. Antecedent support AS = as_multiplier
/// * CS. Either may be pinned with an absolute override. All comparisons are
/// inclusive.
struct MiningParams {
  std::uint64_t cs_base = 3;
  double cs_fraction = 0.02;
  double as_multiplier = 2.0;
  double min_confidence = 0.50;
  std::optional<double> min_lift;

  std::optional<std::uint64_t> cs_absolute;
  std::optional<double> as_absolute;

  /// Throws InvalidArgument naming the offending field.
  void validate() const;

  /// Unfiltered rules (no lift floor).
  static MiningParams dataset1() { return {}; }
  /// Positively correlated rules only (lift >= 1).
  static MiningParams dataset2() {
    MiningParams p;
    p.min_lift = 1.0;
    return p;
  }
};

std::uint64_t candidate_support_threshold(const MiningParams& params, std::size_t n);
double antecedent_support_threshold(const MiningParams& params, std::size_t n);

struct RuleMetrics {
  std::uint64_t pair_support = 0;
  std::uint64_t antecedent_support = 0;
  std::uint64_t consequent_support = 0;
  std::uint64_t n = 0;
  double confidence = 0.0;  // pair / antecedent
  double lift = 0.0;        // confidence / (consequent / n)

  /// Derives confidence and lift from the four counts. Lift is evaluated as
  /// pair*n / (antecedent*consequent) so that lift(A->B) == lift(B->A)
  /// bit for bit.
  static RuleMetrics from_counts(std::uint64_t pair, std::uint64_t antecedent,
                                 std::uint64_t consequent, std::uint64_t n);

  bool operator==(const RuleMetrics&) const = default;
};

/// Directed rule antecedent -> consequent. A->B and B->A are distinct.
struct AssociationRule {
  std::string actor;
  std::string antecedent;
  std::string consequent;
  RuleMetrics metrics;

  bool operator==(const AssociationRule&) const = default;
};

/// Canonical rule order: lift desc, pair support desc, confidence desc,
/// antecedent asc, consequent asc.
bool canonical_less(const AssociationRule& a, const AssociationRule& b) noexcept;
void sort_canonical(std::vector<AssociationRule>& rules);

struct RuleSet {
  std::string actor;
  MiningParams params;
  std::vector<AssociationRule> rules;

  std::size_t size() const noexcept { return rules.size(); }
  bool empty() const noexcept { return rules.empty(); }

  /// Params are provenance only and do not take part in equality.
  bool operator==(const RuleSet& o) const { return actor == o.actor && rules == o.rules; }
};

/// Support/confidence/lift over one actor's baskets. Throws InvalidArgument
/// when antecedent == consequent or the antecedent never occurs.
RuleMetrics compute_rule_metrics(std::span<const Basket> baskets, std::string_view antecedent,
                                 std::string_view consequent);

/// Apriori-style miner for 1->1 rules: item supports are counted first,
/// items below CS are pruned, then co-occurrence is counted only among the
/// survivors. Every rule also needs a pair support of at least one.
RuleSet mine_rules(std::span<const Basket> baskets, std::string actor,
                   const MiningParams& params);

/// mine_rules over one actor of a table; unknown actors give an empty set.
RuleSet mine_actor_rules(const TransactionTable& table, std::string_view actor,
                         const MiningParams& params);

/// Mines every actor (or just `actors` when non-empty), one job per actor.
/// Result is ordered by actor name whatever the thread count.
std::vector<RuleSet> mine_all(const TransactionTable& table, const MiningParams& params,
                              std::span<const std::string> actors = {}, unsigned threads = 1);

/// Reference miner that enumerates every ordered item pair and counts by
/// scanning. Refuses vocabularies larger than kBruteForceMaxVocabulary.
inline constexpr std::size_t kBruteForceMaxVocabulary = 20;
RuleSet brute_force_rules(std::span<const Basket> baskets, std::string actor,
                          const MiningParams& params);

/// Rule files. JSON is a flat array of rule objects; CSV has header
/// actor,antecedent,consequent,pair_support,antecedent_support,
/// consequent_support,n,confidence,lift. Readers group rules by actor
/// (ascending) and restore canonical order.
void write_rules_json(std::ostream& out, std::span<const RuleSet> sets);
void write_rules_csv(std::ostream& out, std::span<const RuleSet> sets);
std::vector<RuleSet> read_rules_json(std::istream& in, const std::string& source_name);
std::vector<RuleSet> read_rules_csv(std::istream& in, const std::string& source_name);
/// Picks the reader from the first non-blank character ('[' means JSON).
std::vector<RuleSet> read_rules(const std::filesystem::path& path);

}  // namespace ttpsig
