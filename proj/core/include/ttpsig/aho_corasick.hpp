#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ttpsig {

/// Byte-level Aho-Corasick automaton. Reports every occurrence of every
/// pattern, including overlapping and nested ones, in one pass.
class AhoCorasick {
 public:
  struct Match {
    std::size_t pattern = 0;  // index in insertion order
    std::size_t begin = 0;    // byte offsets, half-open
    std::size_t end = 0;
  };

  AhoCorasick() = default;
  explicit AhoCorasick(const std::vector<std::string>& patterns);

  std::size_t pattern_count() const noexcept { return lengths_.size(); }

  /// All occurrences, ordered by end offset then by decreasing length.
  std::vector<Match> find_all(std::string_view text) const;

 private:
  struct Node {
    std::vector<std::pair<std::uint8_t, std::int32_t>> next;  // sorted by byte
    std::int32_t fail = 0;
    std::int32_t output = -1;       // pattern ending here
    std::int32_t output_link = -1;  // nearest suffix node with an output
  };

  std::int32_t child(std::int32_t node, std::uint8_t byte) const noexcept;
  std::int32_t step(std::int32_t node, std::uint8_t byte) const noexcept;

  std::vector<Node> nodes_;
  std::vector<std::size_t> lengths_;
};

}  // namespace ttpsig
