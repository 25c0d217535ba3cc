#pragma once

// Engineered rule sets shaped after published threat-actor tables.

#include <algorithm>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "ttpsig/miner.hpp"

namespace ttpsig::testkit {

inline AssociationRule stored_rule(std::string actor, std::string a, std::string c,
                                   std::uint64_t pair, double conf, double lift) {
  AssociationRule r{std::move(actor), std::move(a), std::move(c), {}};
  r.metrics.pair_support = pair;
  r.metrics.antecedent_support = pair;
  r.metrics.consequent_support = pair;
  r.metrics.n = 200;
  r.metrics.confidence = conf;
  r.metrics.lift = lift;
  return r;
}

/// APT28's five highest-lift rules (as reported, with stored metrics) plus
/// lower-lift filler. The two 4.59 rules carry unrounded lifts that put
/// T1085->T1037 ahead.
inline RuleSet apt28_top5_fixture() {
  RuleSet rs;
  rs.actor = "APT28";
  rs.rules = {
      stored_rule("APT28", "T1057", "T1120", 20, 1.00, 3.5),
      stored_rule("APT28", "T1045", "T1047", 8, 0.75, 4.5882),
      stored_rule("APT28", "T1003", "T1027", 9, 0.60, 1.2),
      stored_rule("APT28", "T1024", "T1037", 12, 1.00, 5.44),
      stored_rule("APT28", "T1085", "T1037", 8, 0.75, 4.5915),
      stored_rule("APT28", "T1140", "T1045", 7, 0.70, 2.1),
      stored_rule("APT28", "T1112", "T1060", 8, 0.80, 5.23),
      stored_rule("APT28", "T1027", "T1002", 6, 0.55, 1.05),
  };
  return rs;
}

inline const std::vector<std::string>& table_actors() {
  static const std::vector<std::string> a = {"APT28", "ELECTRUM", "EQUATION", "TURLA",
                                             "COVELLITE"};
  return a;
}

/// Five actors whose full rule sets hold 180/114/102/97/97 rules and whose
/// repetitive subsets (pairs held by >= 2 actors) hold 45/33/23/19/28.
/// The most shared pairs are the reported top-5 associations; one extra
/// pair shared by three actors balances the degree sum.
inline std::vector<RuleSet> shared_rules_fixture() {
  const std::vector<std::string>& actors = table_actors();
  const std::map<std::string, std::size_t> full = {
      {"APT28", 180}, {"ELECTRUM", 114}, {"EQUATION", 102}, {"TURLA", 97}, {"COVELLITE", 97}};
  const std::map<std::string, std::size_t> repetitive = {
      {"APT28", 45}, {"ELECTRUM", 33}, {"EQUATION", 23}, {"TURLA", 19}, {"COVELLITE", 28}};

  std::map<std::string, RuleSet> sets;
  for (const auto& a : actors) sets[a].actor = a;
  auto give = [&](const std::string& actor, const std::string& ante, const std::string& cons) {
    sets[actor].rules.push_back(
        {actor, ante, cons, RuleMetrics::from_counts(10, 20, 20, 100)});
  };

  struct Shared {
    const char* ante;
    const char* cons;
    std::vector<std::string> holders;
  };
  const std::vector<Shared> shared = {
      {"T1140", "T1045", {"APT28", "EQUATION", "TURLA", "COVELLITE"}},
      {"T1426", "T1057", {"APT28", "ELECTRUM", "TURLA", "COVELLITE"}},
      {"T1027", "T1140", {"APT28", "ELECTRUM", "EQUATION"}},
      {"T1045", "T1140", {"EQUATION", "TURLA", "COVELLITE"}},
      {"T1027", "T1002", {"APT28", "ELECTRUM", "EQUATION"}},
      {"T1560", "T1573", {"APT28", "ELECTRUM", "COVELLITE"}},
  };
  std::map<std::string, std::size_t> residual = repetitive;
  for (const Shared& s : shared)
    for (const auto& h : s.holders) {
      give(h, s.ante, s.cons);
      --residual[h];
    }

  // Pair off the two largest residual degrees until all are zero.
  char a_id[16], c_id[16];
  for (int k = 0;; ++k) {
    std::vector<std::string> order = actors;
    std::sort(order.begin(), order.end(), [&](const auto& x, const auto& y) {
      return residual[x] != residual[y] ? residual[x] > residual[y] : x < y;
    });
    if (residual[order[0]] == 0) break;
    std::snprintf(a_id, sizeof a_id, "P%04d", k);
    std::snprintf(c_id, sizeof c_id, "Q%04d", k);
    give(order[0], a_id, c_id);
    give(order[1], a_id, c_id);
    --residual[order[0]];
    --residual[order[1]];
  }

  int u = 0;
  for (const auto& a : actors) {
    while (sets[a].rules.size() < full.at(a)) {
      std::snprintf(a_id, sizeof a_id, "U%04d", u);
      std::snprintf(c_id, sizeof c_id, "V%04d", u);
      ++u;
      give(a, a_id, c_id);
    }
  }

  std::vector<RuleSet> out;
  for (const auto& a : actors) {
    sort_canonical(sets[a].rules);
    out.push_back(sets[a]);
  }
  return out;
}

}  // namespace ttpsig::testkit
