#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "ttpsig/error.hpp"
#include "ttpsig/profiling.hpp"

using namespace ttpsig;
using ttpsig::testkit::naive_jaccard;

TEST(Profiling, SummaryStatsFixtures) {
  const std::vector<double> v = {1, 2, 2, 5};
  const SummaryStats s = summary_stats(v);
  EXPECT_EQ(s.mean, 2.5);
  EXPECT_EQ(s.median, 2.0);
  EXPECT_EQ(s.mode, 2.0);
  EXPECT_EQ(s.stddev, 1.5);
  EXPECT_EQ(s.iqr, 2.0);
  EXPECT_EQ(s.min, 1.0);
  EXPECT_EQ(s.max, 5.0);

  const std::vector<double> one = {7};
  const SummaryStats t = summary_stats(one);
  EXPECT_EQ(t.mean, 7.0);
  EXPECT_EQ(t.median, 7.0);
  EXPECT_EQ(t.mode, 7.0);
  EXPECT_EQ(t.stddev, 0.0);
  EXPECT_EQ(t.iqr, 0.0);

  const std::vector<double> flat = {3, 3, 3, 3};
  EXPECT_EQ(summary_stats(flat).stddev, 0.0);
  EXPECT_EQ(summary_stats(flat).iqr, 0.0);

  EXPECT_THROW(summary_stats(std::vector<double>{}), InvalidArgument);
}

TEST(Profiling, ModeTiesPickSmallest) {
  const std::vector<double> v = {5, 1, 5, 1, 9};
  EXPECT_EQ(summary_stats(v).mode, 1.0);
}

TEST(ProfilingProperty, StatsMatchNaiveOracle) {
  std::mt19937_64 rng(500);
  std::uniform_int_distribution<int> len(1, 200), kind(0, 2);
  std::uniform_real_distribution<double> real(0.0, 10.0);
  std::uniform_int_distribution<int> small(0, 9);
  for (int iter = 0; iter < 500; ++iter) {
    std::vector<double> v(static_cast<std::size_t>(len(rng)));
    const int k = kind(rng);
    for (double& x : v) x = k == 0 ? small(rng) : k == 1 ? real(rng) : small(rng) / 4.0;
    const SummaryStats s = summary_stats(v);
    const auto o = testkit::naive_stats(v);
    EXPECT_NEAR(s.min, o.min, 1e-12);
    EXPECT_NEAR(s.max, o.max, 1e-12);
    EXPECT_NEAR(s.mean, o.mean, 1e-12);
    EXPECT_NEAR(s.median, o.median, 1e-12);
    EXPECT_NEAR(s.mode, o.mode, 1e-12);
    EXPECT_NEAR(s.stddev, o.stddev, 1e-12);
    EXPECT_NEAR(s.iqr, o.iqr, 1e-12);
  }
}

TEST(Profiling, TopKRules) {
  const RuleSet rs = testkit::apt28_top5_fixture();
  const auto top = top_k_rules(rs, 5);
  ASSERT_EQ(top.size(), 5u);
  const std::vector<std::pair<std::string, std::string>> want = {
      {"T1024", "T1037"}, {"T1112", "T1060"}, {"T1085", "T1037"}, {"T1045", "T1047"}, {"T1057", "T1120"}};
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(top[i].antecedent, want[i].first) << i;
    EXPECT_EQ(top[i].consequent, want[i].second) << i;
  }
  EXPECT_TRUE(top_k_rules(rs, 0).empty());
  EXPECT_EQ(top_k_rules(rs, 100).size(), rs.size());
  EXPECT_EQ(profile_actor(rs, 3).top_rules.size(), 3u);
  EXPECT_EQ(profile_actor(rs, 3).rule_count, rs.size());
}

TEST(Profiling, SelectActorsByRuleCount) {
  const auto sets = testkit::shared_rules_fixture();
  EXPECT_EQ(select_actors_by_rule_count(sets, 5),
            (std::vector<std::string>{"APT28", "ELECTRUM", "EQUATION", "COVELLITE", "TURLA"}));
  EXPECT_EQ(select_actors_by_rule_count(sets, 2), (std::vector<std::string>{"APT28", "ELECTRUM"}));
}

TEST(Profiling, SharedRulesFixture) {
  const auto sets = testkit::shared_rules_fixture();
  const std::vector<std::size_t> full = {180, 114, 102, 97, 97};
  for (std::size_t i = 0; i < sets.size(); ++i) EXPECT_EQ(sets[i].size(), full[i]);

  const auto shared = shared_rules(sets);
  ASSERT_GE(shared.size(), 6u);
  const std::vector<std::tuple<std::string, std::string, std::size_t>> want = {
      {"T1140", "T1045", 4}, {"T1426", "T1057", 4}, {"T1027", "T1002", 3},
      {"T1027", "T1140", 3}, {"T1045", "T1140", 3}, {"T1560", "T1573", 3}};
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_EQ(shared[i].pair.first, std::get<0>(want[i]));
    EXPECT_EQ(shared[i].pair.second, std::get<1>(want[i]));
    EXPECT_EQ(shared[i].count, std::get<2>(want[i]));
    EXPECT_EQ(shared[i].actors.size(), shared[i].count);
  }
  EXPECT_EQ(shared[0].actors, (std::vector<std::string>{"APT28", "COVELLITE", "EQUATION", "TURLA"}));

  const auto rep = repetitive_subset(sets);
  const std::vector<std::size_t> reps = {45, 33, 23, 19, 28};
  std::size_t total = 0;
  for (std::size_t i = 0; i < rep.size(); ++i) {
    EXPECT_EQ(rep[i].size(), reps[i]) << rep[i].actor;
    total += rep[i].size();
  }
  EXPECT_EQ(total, 148u);  // rule instances, not distinct pairs
  std::size_t distinct = 0;
  for (const auto& e : shared) distinct += e.count >= 2;
  EXPECT_EQ(distinct, 64u + 6u);
  EXPECT_EQ(repetitive_subset(rep), rep);
}

TEST(Profiling, SharedRulesEdgeCases) {
  RuleSet a{"A", {}, {{"A", "T1", "T2", RuleMetrics::from_counts(1, 1, 1, 1)}}};
  RuleSet b{"B", {}, {{"B", "T3", "T4", RuleMetrics::from_counts(1, 1, 1, 1)}}};
  RuleSet empty{"E", {}, {}};
  std::vector<RuleSet> disjoint = {a, b, empty};
  for (const auto& e : shared_rules(disjoint)) EXPECT_EQ(e.count, 1u);
  for (const auto& r : repetitive_subset(disjoint)) EXPECT_TRUE(r.empty());
  std::vector<RuleSet> same = {a, RuleSet{"C", {}, {{"C", "T1", "T2", RuleMetrics::from_counts(1, 1, 1, 1)}}}};
  EXPECT_EQ(repetitive_subset(same)[0].size(), 1u);
  EXPECT_TRUE(shared_rules(std::vector<RuleSet>{}).empty());
}

TEST(Profiling, SimilarityExamples) {
  const std::set<int> a = {1, 2, 3}, b = {2, 3, 4, 5}, e;
  EXPECT_DOUBLE_EQ(jaccard(a, b), 2.0 / 5.0);
  EXPECT_DOUBLE_EQ(overlap_dice(a, b), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(dice_standard(a, b), 4.0 / 7.0);
  EXPECT_EQ(jaccard(e, e), 1.0);
  EXPECT_EQ(overlap_dice(e, e), 1.0);
  EXPECT_EQ(dice_standard(a, e), 0.0);
  EXPECT_EQ(jaccard(a, a), 1.0);
  EXPECT_EQ(jaccard(a, std::set<int>{7}), 0.0);
}

TEST(ProfilingProperty, SimilarityOrderingAndBounds) {
  std::mt19937_64 rng(1000);
  std::uniform_int_distribution<int> size(0, 12), item(0, 20);
  int violations = 0;
  for (int iter = 0; iter < 1000; ++iter) {
    std::set<int> a, b;
    for (int k = size(rng); k > 0; --k) a.insert(item(rng));
    for (int k = size(rng); k > 0; --k) b.insert(item(rng));
    const double j = jaccard(a, b), d = dice_standard(a, b), o = overlap_dice(a, b);
    violations += !(j <= d + 1e-15 && d <= o + 1e-15);
    violations += j != jaccard(b, a) || d != dice_standard(b, a) || o != overlap_dice(b, a);
    violations += j < 0 || j > 1 || d < 0 || d > 1 || o < 0 || o > 1;
    EXPECT_NEAR(j, naive_jaccard(a, b), 1e-15);
  }
  EXPECT_EQ(violations, 0);
}

TEST(Profiling, SimilarityMatrix) {
  const auto sets = testkit::shared_rules_fixture();
  const SimilarityMatrix m = similarity_matrix(sets);
  ASSERT_EQ(m.actors.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(m.jaccard[i][i], 1.0);
    for (std::size_t k = 0; k < 5; ++k) {
      EXPECT_EQ(m.jaccard[i][k], m.jaccard[k][i]);
      EXPECT_DOUBLE_EQ(m.jaccard[i][k], naive_jaccard(rule_pairs(sets[i]), rule_pairs(sets[k])));
    }
  }
  EXPECT_TRUE(similarity_matrix(std::vector<RuleSet>{}).actors.empty());
}
