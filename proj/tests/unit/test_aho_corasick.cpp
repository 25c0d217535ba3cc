#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <tuple>

#include "ttpsig/aho_corasick.hpp"

using ttpsig::AhoCorasick;

namespace {

using Hit = std::tuple<std::size_t, std::size_t, std::size_t>;

std::vector<Hit> sorted(const std::vector<AhoCorasick::Match>& ms) {
  std::vector<Hit> out;
  for (const auto& m : ms) out.emplace_back(m.begin, m.end, m.pattern);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Hit> naive(const std::vector<std::string>& pats, const std::string& text) {
  std::vector<Hit> out;
  for (std::size_t p = 0; p < pats.size(); ++p) {
    if (pats[p].empty()) continue;
    for (std::size_t i = 0; i + pats[p].size() <= text.size(); ++i)
      if (text.compare(i, pats[p].size(), pats[p]) == 0) out.emplace_back(i, i + pats[p].size(), p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(AhoCorasick, ClassicExample) {
  const std::vector<std::string> pats = {"he", "she", "his", "hers"};
  AhoCorasick ac(pats);
  EXPECT_EQ(ac.pattern_count(), 4u);
  EXPECT_EQ(sorted(ac.find_all("ushers")), naive(pats, "ushers"));
  EXPECT_EQ(sorted(ac.find_all("ushers")).size(), 3u);
}

TEST(AhoCorasick, EmptyInputs) {
  AhoCorasick none;
  EXPECT_TRUE(none.find_all("anything").empty());
  AhoCorasick ac({"abc"});
  EXPECT_TRUE(ac.find_all("").empty());
}

TEST(AhoCorasickProperty, MatchesNaiveScan) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> ch(0, 2), plen(1, 4), npat(1, 6), tlen(0, 40);
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<std::string> pats;
    for (int k = npat(rng); k > 0; --k) {
      std::string p;
      for (int j = plen(rng); j > 0; --j) p += static_cast<char>('a' + ch(rng));
      pats.push_back(p);
    }
    // duplicate patterns share one terminal node
    std::sort(pats.begin(), pats.end());
    pats.erase(std::unique(pats.begin(), pats.end()), pats.end());
    std::string text;
    for (int j = tlen(rng); j > 0; --j) text += static_cast<char>('a' + ch(rng));
    AhoCorasick ac(pats);
    ASSERT_EQ(sorted(ac.find_all(text)), naive(pats, text)) << text;
  }
}
