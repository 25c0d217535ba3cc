#include <benchmark/benchmark.h>

#include <random>

#include "ttpsig/miner.hpp"
#include "ttpsig/profiling.hpp"

using namespace ttpsig;

namespace {

std::vector<Basket> random_baskets(std::size_t n, std::size_t vocab, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> w(vocab);
  for (std::size_t i = 0; i < vocab; ++i) w[i] = 1.0 / static_cast<double>(i + 1);
  std::discrete_distribution<std::size_t> item(w.begin(), w.end());
  std::uniform_int_distribution<std::size_t> size(2, 12);
  std::vector<Basket> out(n);
  for (auto& b : out) {
    const std::size_t k = size(rng);
    while (b.size() < k) {
      std::string s = "T" + std::to_string(1000 + item(rng));
      if (std::find(b.begin(), b.end(), s) == b.end()) b.push_back(std::move(s));
    }
    std::sort(b.begin(), b.end());
  }
  return out;
}

void BM_MineRules(benchmark::State& state) {
  const auto baskets = random_baskets(static_cast<std::size_t>(state.range(0)),
                                      static_cast<std::size_t>(state.range(1)), 1);
  const MiningParams p = MiningParams::dataset1();
  std::size_t rules = 0;
  for (auto _ : state) {
    const RuleSet rs = mine_rules(baskets, "X", p);
    rules = rs.size();
    benchmark::DoNotOptimize(rs);
  }
  state.counters["rules"] = static_cast<double>(rules);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MineRules)->Args({200, 150})->Args({2000, 300})->Args({13000, 300})->Unit(benchmark::kMillisecond);

void BM_MineAllThreads(benchmark::State& state) {
  std::vector<Transaction> txs;
  for (int a = 0; a < 32; ++a) {
    const auto b = random_baskets(400, 200, static_cast<std::uint64_t>(a));
    for (std::size_t i = 0; i < b.size(); ++i)
      txs.push_back({"d" + std::to_string(a) + "-" + std::to_string(i), "A" + std::to_string(a), b[i], std::nullopt});
  }
  const auto table = TransactionTable::from_transactions(ItemMode::TechniqueOnly, std::move(txs));
  for (auto _ : state)
    benchmark::DoNotOptimize(mine_all(table, MiningParams::dataset1(), {}, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_MineAllThreads)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SimilarityMatrix(benchmark::State& state) {
  std::vector<RuleSet> sets;
  for (int a = 0; a < state.range(0); ++a) {
    MiningParams p;
    p.cs_absolute = 2;
    p.as_absolute = 2;
    sets.push_back(mine_rules(random_baskets(300, 60, static_cast<std::uint64_t>(a)), "A" + std::to_string(a), p));
  }
  for (auto _ : state) benchmark::DoNotOptimize(similarity_matrix(sets));
}
BENCHMARK(BM_SimilarityMatrix)->Arg(5)->Arg(73);

}  // namespace

BENCHMARK_MAIN();
