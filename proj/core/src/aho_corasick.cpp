#include "ttpsig/aho_corasick.hpp"

#include <algorithm>
#include <queue>

namespace ttpsig {

AhoCorasick::AhoCorasick(const std::vector<std::string>& patterns) {
  nodes_.emplace_back();
  lengths_.reserve(patterns.size());

  for (std::size_t p = 0; p < patterns.size(); ++p) {
    lengths_.push_back(patterns[p].size());
    if (patterns[p].empty()) continue;
    std::int32_t cur = 0;
    for (char ch : patterns[p]) {
      auto byte = static_cast<std::uint8_t>(ch);
      std::int32_t nxt = child(cur, byte);
      if (nxt < 0) {
        nxt = static_cast<std::int32_t>(nodes_.size());
        auto& edges = nodes_[cur].next;
        auto pos = std::lower_bound(edges.begin(), edges.end(), byte,
                                    [](const auto& e, std::uint8_t b) { return e.first < b; });
        edges.insert(pos, {byte, nxt});
        nodes_.emplace_back();
      }
      cur = nxt;
    }
    // Duplicate patterns keep the first index.
    if (nodes_[cur].output < 0) nodes_[cur].output = static_cast<std::int32_t>(p);
  }

  // Breadth-first failure links.
  std::queue<std::int32_t> queue;
  for (const auto& [byte, c] : nodes_[0].next) {
    nodes_[c].fail = 0;
    queue.push(c);
  }
  while (!queue.empty()) {
    const std::int32_t u = queue.front();
    queue.pop();
    for (const auto& [byte, v] : nodes_[u].next) {
      std::int32_t f = nodes_[u].fail;
      while (f != 0 && child(f, byte) < 0) f = nodes_[f].fail;
      std::int32_t target = child(f, byte);
      nodes_[v].fail = (target >= 0 && target != v) ? target : 0;
      const Node& fn = nodes_[nodes_[v].fail];
      nodes_[v].output_link = fn.output >= 0 ? nodes_[v].fail : fn.output_link;
      queue.push(v);
    }
  }
}

std::int32_t AhoCorasick::child(std::int32_t node, std::uint8_t byte) const noexcept {
  const auto& edges = nodes_[node].next;
  auto it = std::lower_bound(edges.begin(), edges.end(), byte,
                             [](const auto& e, std::uint8_t b) { return e.first < b; });
  return (it != edges.end() && it->first == byte) ? it->second : -1;
}

std::int32_t AhoCorasick::step(std::int32_t node, std::uint8_t byte) const noexcept {
  for (;;) {
    std::int32_t nxt = child(node, byte);
    if (nxt >= 0) return nxt;
    if (node == 0) return 0;
    node = nodes_[node].fail;
  }
}

std::vector<AhoCorasick::Match> AhoCorasick::find_all(std::string_view text) const {
  std::vector<Match> out;
  if (nodes_.empty()) return out;
  std::int32_t state = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    state = step(state, static_cast<std::uint8_t>(text[i]));
    for (std::int32_t n = nodes_[state].output >= 0 ? state : nodes_[state].output_link; n >= 0;
         n = nodes_[n].output_link) {
      const auto p = static_cast<std::size_t>(nodes_[n].output);
      out.push_back({p, i + 1 - lengths_[p], i + 1});
    }
  }
  return out;
}

}  // namespace ttpsig
