#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "ttpsig/error.hpp"
#include "ttpsig/miner.hpp"

using namespace ttpsig;

namespace {

// four x {A,B}, {A,C}, {B,C}
std::vector<Basket> six() {
  return {{"A", "B"}, {"A", "B"}, {"A", "B"}, {"A", "B"}, {"A", "C"}, {"B", "C"}};
}

MiningParams loose() {
  MiningParams p;
  p.cs_absolute = 1;
  p.as_absolute = 1;
  return p;
}

const AssociationRule* find(const RuleSet& rs, std::string_view a, std::string_view c) {
  for (const auto& r : rs.rules)
    if (r.antecedent == a && r.consequent == c) return &r;
  return nullptr;
}

}  // namespace

TEST(Miner, ThresholdsFollowDefaults) {
  const MiningParams d = MiningParams::dataset1();
  const std::pair<std::size_t, std::uint64_t> cases[] = {{0, 3}, {6, 4}, {50, 4}, {100, 5}, {1000, 23}};
  for (auto [n, want] : cases) {
    EXPECT_EQ(candidate_support_threshold(d, n), want) << n;
    EXPECT_DOUBLE_EQ(antecedent_support_threshold(d, n), 2.0 * static_cast<double>(want)) << n;
  }
  MiningParams abs = d;
  abs.cs_absolute = 7;
  abs.as_absolute = 9.5;
  EXPECT_EQ(candidate_support_threshold(abs, 1000), 7u);
  EXPECT_DOUBLE_EQ(antecedent_support_threshold(abs, 1000), 9.5);
}

TEST(Miner, ParamsValidate) {
  MiningParams p;
  p.min_confidence = 1.5;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = {};
  p.cs_fraction = -0.1;
  EXPECT_THROW(p.validate(), InvalidArgument);
  EXPECT_NO_THROW(MiningParams::dataset2().validate());
}

TEST(Miner, SixTransactionFixture) {
  const RuleSet rs = mine_rules(six(), "X", loose());
  const AssociationRule* ab = find(rs, "A", "B");
  ASSERT_NE(ab, nullptr);
  EXPECT_EQ(ab->metrics.pair_support, 4u);
  EXPECT_EQ(ab->metrics.antecedent_support, 5u);
  EXPECT_EQ(ab->metrics.consequent_support, 5u);
  EXPECT_NEAR(ab->metrics.confidence, 0.8, 1e-12);
  EXPECT_NEAR(ab->metrics.lift, 0.96, 1e-12);
  const AssociationRule* ba = find(rs, "B", "A");
  ASSERT_NE(ba, nullptr);
  EXPECT_NEAR(ba->metrics.confidence, 0.8, 1e-12);
  EXPECT_NEAR(ba->metrics.lift, 0.96, 1e-12);

  MiningParams lifted = loose();
  lifted.min_lift = 1.0;
  const RuleSet pruned = mine_rules(six(), "X", lifted);
  EXPECT_EQ(find(pruned, "A", "B"), nullptr);
  EXPECT_EQ(find(pruned, "B", "A"), nullptr);
}

TEST(Miner, ComputeRuleMetrics) {
  const RuleMetrics m = compute_rule_metrics(six(), "A", "C");
  EXPECT_EQ(m.pair_support, 1u);
  EXPECT_NEAR(m.confidence, 0.2, 1e-12);
  EXPECT_NEAR(m.lift, 0.6, 1e-12);
  EXPECT_THROW(compute_rule_metrics(six(), "A", "A"), InvalidArgument);
  EXPECT_THROW(compute_rule_metrics(six(), "Z", "A"), InvalidArgument);
}

TEST(Miner, IndependentItemsHaveUnitLift) {
  const std::vector<Basket> b = {{"A", "B"}, {"A", "X"}, {"B", "Y"}, {"X", "Y"}};
  const RuleMetrics m = compute_rule_metrics(b, "A", "B");
  EXPECT_DOUBLE_EQ(m.lift, 1.0);
}

TEST(Miner, EmptyAndTinyInputs) {
  EXPECT_TRUE(mine_rules({}, "X", MiningParams{}).empty());
  const std::vector<Basket> one = {{"A", "B"}};
  EXPECT_TRUE(mine_rules(one, "X", MiningParams{}).empty());  // below CS = 4
  const RuleSet rs = mine_rules(one, "X", loose());
  EXPECT_EQ(rs.size(), 2u);
  EXPECT_EQ(rs, brute_force_rules(one, "X", loose()));
}

TEST(Miner, BruteForceRefusesLargeVocabulary) {
  std::vector<Basket> b;
  for (int i = 0; i < 21; ++i) b.push_back({"I" + std::to_string(100 + i), "J"});
  EXPECT_THROW(brute_force_rules(b, "X", loose()), InvalidArgument);
}

TEST(Miner, CanonicalOrderBreaksTies) {
  std::vector<AssociationRule> rs = {
      {"X", "T2", "T3", RuleMetrics::from_counts(8, 10, 10, 50)},
      {"X", "T1", "T9", RuleMetrics::from_counts(8, 10, 10, 50)},
      {"X", "T1", "T3", RuleMetrics::from_counts(10, 10, 10, 50)},
      {"X", "T0", "T3", RuleMetrics::from_counts(4, 5, 4, 50)},
  };
  sort_canonical(rs);
  EXPECT_EQ(rs[0].antecedent, "T0");  // highest lift (10.0)
  EXPECT_EQ(rs[1].antecedent, "T1");  // pair 10 before pair 8 at equal lift
  EXPECT_EQ(rs[1].consequent, "T3");
  EXPECT_EQ(rs[2].consequent, "T9");  // then antecedent ascending
  EXPECT_EQ(rs[3].antecedent, "T2");
}

TEST(Miner, RulesRoundTrip) {
  const std::vector<Basket> b = {{"T1", "T2", "T3"}, {"T1", "T2"}, {"T2", "T3"}, {"T1", "T3"}};
  std::vector<RuleSet> sets = {mine_rules(b, "ACTOR,ONE", loose()), mine_rules(six(), "B", loose())};
  std::stringstream js, cs;
  write_rules_json(js, sets);
  write_rules_csv(cs, sets);
  const auto from_json = read_rules_json(js, "mem");
  const auto from_csv = read_rules_csv(cs, "mem");
  ASSERT_EQ(from_json.size(), 2u);
  ASSERT_EQ(from_csv.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    const RuleSet& want = sets[i];
    const auto pick = [&](const std::vector<RuleSet>& v) {
      return *std::find_if(v.begin(), v.end(), [&](const RuleSet& r) { return r.actor == want.actor; });
    };
    EXPECT_EQ(pick(from_json), want);
    EXPECT_EQ(pick(from_csv), want);
  }
  std::stringstream dup(
      "[{\"actor\":\"X\",\"antecedent\":\"A\",\"consequent\":\"B\",\"pair_support\":1,"
      "\"antecedent_support\":1,\"consequent_support\":1,\"n\":1,\"confidence\":1,\"lift\":1},"
      "{\"actor\":\"X\",\"antecedent\":\"A\",\"consequent\":\"B\",\"pair_support\":1,"
      "\"antecedent_support\":1,\"consequent_support\":1,\"n\":1,\"confidence\":1,\"lift\":1}]");
  EXPECT_THROW(read_rules_json(dup, "mem"), ParseError);
}

TEST(MinerProperty, MatchesBruteForceOracle) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> conf(0.0, 1.0);
  std::uniform_int_distribution<int> base(0, 4);
  for (int seed = 0; seed < 100; ++seed) {
    const auto db = testkit::random_db(rng, 40, 12);
    MiningParams p;
    p.cs_base = static_cast<std::uint64_t>(base(rng));
    p.as_multiplier = 1.0 + conf(rng);
    p.min_confidence = conf(rng);
    if (seed % 2) p.min_lift = 0.5 + conf(rng);
    ASSERT_EQ(mine_rules(db.baskets, "X", p), brute_force_rules(db.baskets, "X", p)) << seed;
  }
}

TEST(MinerProperty, MetricIdentitiesAndSymmetry) {
  std::mt19937_64 rng(9);
  for (int seed = 0; seed < 50; ++seed) {
    const auto db = testkit::random_db(rng, 50, 10);
    MiningParams p = loose();
    p.min_confidence = 0.0;  // keep both directions of every pair
    const RuleSet rs = mine_rules(db.baskets, "X", p);
    for (const auto& r : rs.rules) {
      const auto& m = r.metrics;
      EXPECT_LE(m.pair_support, std::min(m.antecedent_support, m.consequent_support));
      EXPECT_GE(m.confidence, 0.0);
      EXPECT_LE(m.confidence, 1.0);
      EXPECT_EQ(m.n, db.baskets.size());
      EXPECT_NEAR(m.lift, m.confidence * m.n / m.consequent_support, 1e-9);
      const AssociationRule* rev = find(rs, r.consequent, r.antecedent);
      ASSERT_NE(rev, nullptr);
      EXPECT_EQ(rev->metrics.lift, m.lift);  // symmetric by construction
    }
    EXPECT_TRUE(std::is_sorted(rs.rules.begin(), rs.rules.end(), canonical_less));
  }
}

TEST(MinerProperty, StricterThresholdsGiveSubsets) {
  std::mt19937_64 rng(21);
  for (int seed = 0; seed < 50; ++seed) {
    const auto db = testkit::random_db(rng, 60, 12);
    MiningParams lo = loose();
    lo.min_confidence = 0.3;
    MiningParams hi = lo;
    hi.cs_absolute = 3;
    hi.as_absolute = 4;
    hi.min_confidence = 0.6;
    const RuleSet a = mine_rules(db.baskets, "X", lo), b = mine_rules(db.baskets, "X", hi);
    for (const auto& r : b.rules) EXPECT_NE(find(a, r.antecedent, r.consequent), nullptr);
  }
}

TEST(MinerProperty, MineAllIsThreadCountInvariant) {
  std::mt19937_64 rng(77);
  std::vector<Transaction> txs;
  for (int a = 0; a < 6; ++a) {
    const auto db = testkit::random_db(rng, 40, 10);
    for (std::size_t i = 0; i < db.baskets.size(); ++i)
      txs.push_back({"d" + std::to_string(a) + "-" + std::to_string(1000 + i), "ACT" + std::to_string(a),
                     db.baskets[i], std::nullopt});
  }
  const auto table = TransactionTable::from_transactions(ItemMode::TechniqueOnly, txs);
  const auto one = mine_all(table, loose(), {}, 1);
  for (unsigned t : {2u, 4u, 0u}) EXPECT_EQ(mine_all(table, loose(), {}, t), one);
  const std::vector<std::string> only = {"ACT3"};
  const auto sub = mine_all(table, loose(), only, 4);
  ASSERT_EQ(sub.size(), 1u);
  EXPECT_EQ(sub[0], mine_actor_rules(table, "ACT3", loose()));
}
