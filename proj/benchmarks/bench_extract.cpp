#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "ttpsig/extraction.hpp"

using namespace ttpsig;

namespace {

const ReferenceBase& base() {
  static const ReferenceBase b = load_refbase_dir(std::filesystem::path(TTPSIG_TEST_DATA_DIR) / "refbase");
  return b;
}

std::vector<Document> synthetic_corpus(std::size_t docs, std::size_t words) {
  std::vector<std::string> vocab = {"the", "operators", "deployed", "a", "loader", "and", "then",
                                    "network", "traffic", "was", "observed", "on", "hosts"};
  for (const auto& e : base().entries()) vocab.push_back(e.alias);
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  std::vector<Document> out;
  for (std::size_t d = 0; d < docs; ++d) {
    std::string text;
    for (std::size_t w = 0; w < words; ++w) (text += vocab[pick(rng)]) += (w % 17 == 16 ? ". " : " ");
    out.push_back({"doc" + std::to_string(d), "bench", std::nullopt, std::move(text)});
  }
  return out;
}

void BM_ExtractDocument(benchmark::State& state) {
  const Extractor ex(base());
  const auto docs = synthetic_corpus(1, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ex.extract(docs[0]));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(docs[0].text.size()));
}
BENCHMARK(BM_ExtractDocument)->Arg(500)->Arg(5000);

void BM_BuildEntityDb(benchmark::State& state) {
  const Extractor ex(base());
  const auto docs = synthetic_corpus(2000, 400);
  for (auto _ : state)
    benchmark::DoNotOptimize(build_entity_db(docs, ex, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_BuildEntityDb)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_BuildAutomaton(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(Extractor(base()));
}
BENCHMARK(BM_BuildAutomaton);

}  // namespace
