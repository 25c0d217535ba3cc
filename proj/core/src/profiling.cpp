#include "ttpsig/profiling.hpp"

#include <cmath>
#include <map>
#include <numeric>

#include "ttpsig/error.hpp"

namespace ttpsig {
namespace {

double median_of_sorted(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n == 0) return 0.0;
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace

SummaryStats summary_stats(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("summary statistics of an empty list");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();

  SummaryStats s;
  s.min = v.front();
  s.max = v.back();
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
  s.median = median_of_sorted(v);

  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(ss / static_cast<double>(n));

  const std::span<const double> all(v);
  const double q1 = median_of_sorted(all.first(n / 2));
  const double q3 = median_of_sorted(all.subspan((n + 1) / 2));
  s.iqr = n < 2 ? 0.0 : q3 - q1;

  const double scale = std::pow(10.0, kModeDecimals);
  std::map<double, std::size_t> freq;
  for (double x : v) ++freq[std::round(x * scale) / scale];
  std::size_t best = 0;
  for (const auto& [value, count] : freq)
    if (count > best) {
      best = count;
      s.mode = value;
    }
  return s;
}

std::vector<AssociationRule> top_k_rules(const RuleSet& rules, std::size_t k) {
  std::vector<AssociationRule> sorted = rules.rules;
  sort_canonical(sorted);
  if (sorted.size() > k) sorted.resize(k);
  return sorted;
}

ActorProfile profile_actor(const RuleSet& rules, std::size_t top_k) {
  ActorProfile p;
  p.actor = rules.actor;
  p.rule_count = rules.size();
  p.top_rules = top_k_rules(rules, top_k);
  if (rules.empty()) return p;

  std::vector<double> pair, ant, conf, lift;
  for (const AssociationRule& r : rules.rules) {
    pair.push_back(static_cast<double>(r.metrics.pair_support));
    ant.push_back(static_cast<double>(r.metrics.antecedent_support));
    conf.push_back(r.metrics.confidence);
    lift.push_back(r.metrics.lift);
  }
  p.pair_support = summary_stats(pair);
  p.antecedent_support = summary_stats(ant);
  p.confidence = summary_stats(conf);
  p.lift = summary_stats(lift);
  return p;
}

std::vector<std::string> select_actors_by_rule_count(std::span<const RuleSet> sets,
                                                     std::size_t k) {
  std::vector<const RuleSet*> order;
  for (const RuleSet& rs : sets) order.push_back(&rs);
  std::sort(order.begin(), order.end(), [](const RuleSet* a, const RuleSet* b) {
    return a->size() != b->size() ? a->size() > b->size() : a->actor < b->actor;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < order.size() && i < k; ++i) out.push_back(order[i]->actor);
  return out;
}

std::vector<RuleSet> pick_actors(std::span<const RuleSet> sets,
                                 std::span<const std::string> actors) {
  std::vector<RuleSet> out;
  for (const std::string& a : actors) {
    auto it = std::find_if(sets.begin(), sets.end(),
                           [&](const RuleSet& rs) { return rs.actor == a; });
    out.push_back(it != sets.end() ? *it : RuleSet{a, {}, {}});
  }
  return out;
}

RulePairSet rule_pairs(const RuleSet& rules) {
  RulePairSet out;
  for (const AssociationRule& r : rules.rules) out.emplace(r.antecedent, r.consequent);
  return out;
}

namespace {

std::map<RulePair, std::set<std::string>> holders(std::span<const RuleSet> sets) {
  std::map<RulePair, std::set<std::string>> out;
  for (const RuleSet& rs : sets)
    for (const AssociationRule& r : rs.rules) out[{r.antecedent, r.consequent}].insert(rs.actor);
  return out;
}

}  // namespace

std::vector<SharedRuleEntry> shared_rules(std::span<const RuleSet> sets) {
  std::vector<SharedRuleEntry> out;
  for (auto& [pair, actors] : holders(sets))
    out.push_back({pair, actors.size(), std::vector<std::string>(actors.begin(), actors.end())});
  std::stable_sort(out.begin(), out.end(), [](const SharedRuleEntry& a, const SharedRuleEntry& b) {
    return a.count > b.count;
  });
  return out;
}

std::vector<RuleSet> repetitive_subset(std::span<const RuleSet> sets) {
  const auto held = holders(sets);
  std::vector<RuleSet> out;
  for (const RuleSet& rs : sets) {
    RuleSet kept{rs.actor, rs.params, {}};
    for (const AssociationRule& r : rs.rules)
      if (held.at({r.antecedent, r.consequent}).size() >= 2) kept.rules.push_back(r);
    out.push_back(std::move(kept));
  }
  return out;
}

SimilarityMatrix similarity_matrix(std::span<const RuleSet> sets) {
  SimilarityMatrix m;
  std::vector<RulePairSet> pairs;
  for (const RuleSet& rs : sets) {
    m.actors.push_back(rs.actor);
    pairs.push_back(rule_pairs(rs));
  }
  const std::size_t k = sets.size();
  auto square = [k] { return std::vector<std::vector<double>>(k, std::vector<double>(k, 1.0)); };
  m.jaccard = square();
  m.overlap_dice = square();
  m.dice_standard = square();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      m.jaccard[i][j] = m.jaccard[j][i] = jaccard(pairs[i], pairs[j]);
      m.overlap_dice[i][j] = m.overlap_dice[j][i] = overlap_dice(pairs[i], pairs[j]);
      m.dice_standard[i][j] = m.dice_standard[j][i] = dice_standard(pairs[i], pairs[j]);
    }
  return m;
}

}  // namespace ttpsig
