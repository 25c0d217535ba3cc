#include "ttpsig/miner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "numfmt.hpp"
#include "ttpsig/csv.hpp"
#include "ttpsig/error.hpp"
#include "ttpsig/parallel.hpp"

namespace ttpsig {

void MiningParams::validate() const {
  if (!(cs_fraction >= 0.0 && cs_fraction <= 1.0))
    throw InvalidArgument("cs_fraction must be in [0, 1]");
  if (!(as_multiplier > 0.0) || !std::isfinite(as_multiplier))
    throw InvalidArgument("as_multiplier must be positive");
  if (!(min_confidence >= 0.0 && min_confidence <= 1.0))
    throw InvalidArgument("min_confidence must be in [0, 1]");
  if (min_lift && (!(*min_lift >= 0.0) || !std::isfinite(*min_lift)))
    throw InvalidArgument("min_lift must be a non-negative number");
  if (as_absolute && (!(*as_absolute >= 0.0) || !std::isfinite(*as_absolute)))
    throw InvalidArgument("as_absolute must be a non-negative number");
}

std::uint64_t candidate_support_threshold(const MiningParams& params, std::size_t n) {
  if (params.cs_absolute) return *params.cs_absolute;
  // 0.02 * 50 must give 1, not 2, despite binary rounding of 0.02.
  const double scaled = params.cs_fraction * static_cast<double>(n);
  const double up = std::ceil(scaled - 1e-9);
  return params.cs_base + static_cast<std::uint64_t>(std::max(0.0, up));
}

double antecedent_support_threshold(const MiningParams& params, std::size_t n) {
  if (params.as_absolute) return *params.as_absolute;
  return params.as_multiplier * static_cast<double>(candidate_support_threshold(params, n));
}

RuleMetrics RuleMetrics::from_counts(std::uint64_t pair, std::uint64_t antecedent,
                                     std::uint64_t consequent, std::uint64_t n) {
  RuleMetrics m{pair, antecedent, consequent, n, 0.0, 0.0};
  if (antecedent > 0) m.confidence = static_cast<double>(pair) / static_cast<double>(antecedent);
  if (antecedent > 0 && consequent > 0)
    m.lift = (static_cast<double>(pair) * static_cast<double>(n)) /
             (static_cast<double>(antecedent) * static_cast<double>(consequent));
  return m;
}

bool canonical_less(const AssociationRule& a, const AssociationRule& b) noexcept {
  if (a.metrics.lift != b.metrics.lift) return a.metrics.lift > b.metrics.lift;
  if (a.metrics.pair_support != b.metrics.pair_support)
    return a.metrics.pair_support > b.metrics.pair_support;
  if (a.metrics.confidence != b.metrics.confidence)
    return a.metrics.confidence > b.metrics.confidence;
  return std::tie(a.antecedent, a.consequent) < std::tie(b.antecedent, b.consequent);
}

void sort_canonical(std::vector<AssociationRule>& rules) {
  std::sort(rules.begin(), rules.end(), canonical_less);
}

namespace {

bool contains(const Basket& b, std::string_view item) {
  return std::find(b.begin(), b.end(), item) != b.end();
}

bool passes(const RuleMetrics& m, std::uint64_t cs, double as, const MiningParams& p) {
  return m.pair_support >= std::max<std::uint64_t>(cs, 1) &&
         static_cast<double>(m.antecedent_support) >= as && m.confidence >= p.min_confidence &&
         (!p.min_lift || m.lift >= *p.min_lift);
}

}  // namespace

RuleMetrics compute_rule_metrics(std::span<const Basket> baskets, std::string_view antecedent,
                                 std::string_view consequent) {
  if (antecedent == consequent)
    throw InvalidArgument("rule " + std::string(antecedent) + " -> itself is undefined");
  std::uint64_t pair = 0, ant = 0, cons = 0;
  for (const Basket& b : baskets) {
    const bool has_a = contains(b, antecedent);
    const bool has_c = contains(b, consequent);
    ant += has_a;
    cons += has_c;
    pair += has_a && has_c;
  }
  if (ant == 0)
    throw InvalidArgument("antecedent " + std::string(antecedent) + " has zero support");
  return RuleMetrics::from_counts(pair, ant, cons, baskets.size());
}

RuleSet mine_rules(std::span<const Basket> baskets, std::string actor,
                   const MiningParams& params) {
  params.validate();
  RuleSet out{std::move(actor), params, {}};
  const std::size_t n = baskets.size();
  if (n == 0) return out;

  const std::uint64_t cs = candidate_support_threshold(params, n);
  const double as = antecedent_support_threshold(params, n);
  const std::uint64_t floor = std::max<std::uint64_t>(cs, 1);

  // Level 1: item supports; baskets are sets so each item counts once.
  std::unordered_map<std::string_view, std::uint64_t> support;
  for (const Basket& b : baskets) {
    std::set<std::string_view> uniq(b.begin(), b.end());
    for (std::string_view item : uniq) ++support[item];
  }

  std::vector<std::string_view> frequent;
  for (const auto& [item, s] : support)
    if (s >= floor) frequent.push_back(item);
  std::sort(frequent.begin(), frequent.end());
  const std::size_t f = frequent.size();
  if (f < 2) return out;

  std::unordered_map<std::string_view, std::uint32_t> index;
  for (std::size_t i = 0; i < f; ++i) index.emplace(frequent[i], static_cast<std::uint32_t>(i));

  // Level 2: co-occurrence among frequent items only, upper triangle.
  const bool dense = f <= 4096;
  std::vector<std::uint32_t> dense_counts(dense ? f * f : 0, 0);
  std::unordered_map<std::uint64_t, std::uint32_t> sparse_counts;
  std::vector<std::uint32_t> ids;
  for (const Basket& b : baskets) {
    ids.clear();
    for (std::string_view item : b)
      if (auto it = index.find(item); it != index.end()) ids.push_back(it->second);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (std::size_t x = 0; x < ids.size(); ++x)
      for (std::size_t y = x + 1; y < ids.size(); ++y) {
        if (dense)
          ++dense_counts[ids[x] * f + ids[y]];
        else
          ++sparse_counts[(static_cast<std::uint64_t>(ids[x]) << 32) | ids[y]];
      }
  }

  auto emit = [&](std::uint32_t i, std::uint32_t j, std::uint64_t pair) {
    if (pair < floor) return;
    const std::uint64_t si = support[frequent[i]], sj = support[frequent[j]];
    for (int dir = 0; dir < 2; ++dir) {
      const auto a = dir == 0 ? i : j, c = dir == 0 ? j : i;
      const std::uint64_t sa = dir == 0 ? si : sj, sc = dir == 0 ? sj : si;
      if (static_cast<double>(sa) < as) continue;
      const RuleMetrics m = RuleMetrics::from_counts(pair, sa, sc, n);
      if (!passes(m, cs, as, params)) continue;
      out.rules.push_back(
          {out.actor, std::string(frequent[a]), std::string(frequent[c]), m});
    }
  };

  if (dense) {
    for (std::uint32_t i = 0; i < f; ++i)
      for (std::uint32_t j = i + 1; j < f; ++j) emit(i, j, dense_counts[i * f + j]);
  } else {
    for (const auto& [key, count] : sparse_counts)
      emit(static_cast<std::uint32_t>(key >> 32), static_cast<std::uint32_t>(key), count);
  }
  sort_canonical(out.rules);
  return out;
}

RuleSet mine_actor_rules(const TransactionTable& table, std::string_view actor,
                         const MiningParams& params) {
  const std::vector<Basket> baskets = table.baskets(actor);
  return mine_rules(baskets, std::string(actor), params);
}

std::vector<RuleSet> mine_all(const TransactionTable& table, const MiningParams& params,
                              std::span<const std::string> actors, unsigned threads) {
  params.validate();
  std::vector<std::string> selected =
      actors.empty() ? table.actors() : std::vector<std::string>(actors.begin(), actors.end());
  std::sort(selected.begin(), selected.end());
  selected.erase(std::unique(selected.begin(), selected.end()), selected.end());

  std::vector<RuleSet> out(selected.size());
  parallel_for(selected.size(), threads, [&](std::size_t i) {
    out[i] = mine_actor_rules(table, selected[i], params);
  });
  return out;
}

RuleSet brute_force_rules(std::span<const Basket> baskets, std::string actor,
                          const MiningParams& params) {
  params.validate();
  std::set<std::string> vocab;
  for (const Basket& b : baskets) vocab.insert(b.begin(), b.end());
  if (vocab.size() > kBruteForceMaxVocabulary)
    throw InvalidArgument("brute force limited to " + std::to_string(kBruteForceMaxVocabulary) +
                          " items, got " + std::to_string(vocab.size()));

  RuleSet out{std::move(actor), params, {}};
  const std::uint64_t n = baskets.size();
  if (n == 0) return out;
  const std::uint64_t cs = candidate_support_threshold(params, n);
  const double as = antecedent_support_threshold(params, n);

  for (const std::string& a : vocab) {
    for (const std::string& c : vocab) {
      if (a == c) continue;
      std::uint64_t pair = 0, sa = 0, sc = 0;
      for (const Basket& b : baskets) {
        const bool ha = contains(b, a), hc = contains(b, c);
        sa += ha;
        sc += hc;
        pair += ha && hc;
      }
      RuleMetrics m{pair, sa, sc, n, 0.0, 0.0};
      m.confidence = static_cast<double>(pair) / static_cast<double>(sa);
      m.lift = (static_cast<double>(pair) * static_cast<double>(n)) /
               (static_cast<double>(sa) * static_cast<double>(sc));
      if (pair == 0 || pair < cs) continue;
      if (static_cast<double>(sa) < as) continue;
      if (m.confidence < params.min_confidence) continue;
      if (params.min_lift && m.lift < *params.min_lift) continue;
      out.rules.push_back({out.actor, a, c, m});
    }
  }
  sort_canonical(out.rules);
  return out;
}

// ---------------------------------------------------------------------------
// Rule files

namespace {

constexpr const char* kRuleHeader[] = {"actor",
                                       "antecedent",
                                       "consequent",
                                       "pair_support",
                                       "antecedent_support",
                                       "consequent_support",
                                       "n",
                                       "confidence",
                                       "lift"};

void check_rule(const AssociationRule& r, const std::string& source, std::size_t line) {
  const RuleMetrics& m = r.metrics;
  if (r.actor.empty() || r.antecedent.empty() || r.consequent.empty())
    throw ParseError(source, line, "empty actor or item");
  if (r.antecedent == r.consequent) throw ParseError(source, line, "self rule");
  if (m.pair_support > std::min(m.antecedent_support, m.consequent_support) ||
      std::max(m.antecedent_support, m.consequent_support) > m.n)
    throw ParseError(source, line, "inconsistent support counts");
  if (!(m.confidence > 0.0 && m.confidence <= 1.0))
    throw ParseError(source, line, "confidence outside (0, 1]");
  if (!(m.lift > 0.0) || !std::isfinite(m.lift))
    throw ParseError(source, line, "lift must be positive");
}

std::vector<RuleSet> group(std::vector<AssociationRule> rules, const std::string& source) {
  std::map<std::string, RuleSet> by_actor;
  for (AssociationRule& r : rules) {
    RuleSet& rs = by_actor[r.actor];
    rs.actor = r.actor;
    rs.rules.push_back(std::move(r));
  }
  std::vector<RuleSet> out;
  for (auto& [actor, rs] : by_actor) {
    sort_canonical(rs.rules);
    std::set<std::pair<std::string_view, std::string_view>> seen;
    for (const AssociationRule& r : rs.rules)
      if (!seen.emplace(r.antecedent, r.consequent).second)
        throw ParseError(source, 0,
                         "duplicate rule " + r.antecedent + " -> " + r.consequent + " for " + actor);
    out.push_back(std::move(rs));
  }
  return out;
}

}  // namespace

void write_rules_json(std::ostream& out, std::span<const RuleSet> sets) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const RuleSet& rs : sets)
    for (const AssociationRule& r : rs.rules) {
      nlohmann::ordered_json j;
      j["actor"] = r.actor;
      j["antecedent"] = r.antecedent;
      j["consequent"] = r.consequent;
      j["pair_support"] = r.metrics.pair_support;
      j["antecedent_support"] = r.metrics.antecedent_support;
      j["consequent_support"] = r.metrics.consequent_support;
      j["n"] = r.metrics.n;
      j["confidence"] = r.metrics.confidence;
      j["lift"] = r.metrics.lift;
      arr.push_back(std::move(j));
    }
  out << arr.dump(2) << '\n';
}

void write_rules_csv(std::ostream& out, std::span<const RuleSet> sets) {
  csv::write_row(out, {std::begin(kRuleHeader), std::end(kRuleHeader)});
  for (const RuleSet& rs : sets)
    for (const AssociationRule& r : rs.rules)
      csv::write_row(out, {r.actor, r.antecedent, r.consequent,
                           std::to_string(r.metrics.pair_support),
                           std::to_string(r.metrics.antecedent_support),
                           std::to_string(r.metrics.consequent_support),
                           std::to_string(r.metrics.n), detail::shortest(r.metrics.confidence),
                           detail::shortest(r.metrics.lift)});
}

std::vector<RuleSet> read_rules_json(std::istream& in, const std::string& source_name) {
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source_name, 0, std::string("invalid JSON: ") + e.what());
  }
  if (!arr.is_array()) throw ParseError(source_name, 0, "expected a JSON array of rules");
  std::vector<AssociationRule> rules;
  std::size_t idx = 0;
  for (const auto& j : arr) {
    ++idx;
    try {
      AssociationRule r;
      r.actor = j.at("actor").get<std::string>();
      r.antecedent = j.at("antecedent").get<std::string>();
      r.consequent = j.at("consequent").get<std::string>();
      r.metrics.pair_support = j.at("pair_support").get<std::uint64_t>();
      r.metrics.antecedent_support = j.at("antecedent_support").get<std::uint64_t>();
      r.metrics.consequent_support = j.at("consequent_support").get<std::uint64_t>();
      r.metrics.n = j.at("n").get<std::uint64_t>();
      r.metrics.confidence = j.at("confidence").get<double>();
      r.metrics.lift = j.at("lift").get<double>();
      check_rule(r, source_name, idx);
      rules.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(source_name, idx, std::string("bad rule object: ") + e.what());
    }
  }
  return group(std::move(rules), source_name);
}

std::vector<RuleSet> read_rules_csv(std::istream& in, const std::string& source_name) {
  csv::Reader reader(in, source_name);
  csv::Record rec;
  if (!reader.next(rec)) return {};
  if (rec.fields != std::vector<std::string>(std::begin(kRuleHeader), std::end(kRuleHeader)))
    throw ParseError(source_name, rec.line,
                     "expected header actor,antecedent,consequent,pair_support,"
                     "antecedent_support,consequent_support,n,confidence,lift");
  std::vector<AssociationRule> rules;
  while (reader.next(rec)) {
    if (rec.fields.size() == 1 && rec.fields[0].empty()) continue;
    if (rec.fields.size() != 9)
      throw ParseError(source_name, rec.line,
                       "expected 9 fields, got " + std::to_string(rec.fields.size()));
    auto count = [&](std::size_t i) {
      auto v = detail::parse_int<std::uint64_t>(rec.fields[i]);
      if (!v) throw ParseError(source_name, rec.line, "invalid count '" + rec.fields[i] + "'");
      return *v;
    };
    auto real = [&](std::size_t i) {
      auto v = detail::parse_double(rec.fields[i]);
      if (!v) throw ParseError(source_name, rec.line, "invalid number '" + rec.fields[i] + "'");
      return *v;
    };
    AssociationRule r{rec.fields[0], rec.fields[1], rec.fields[2],
                      RuleMetrics{count(3), count(4), count(5), count(6), real(7), real(8)}};
    check_rule(r, source_name, rec.line);
    rules.push_back(std::move(r));
  }
  return group(std::move(rules), source_name);
}

std::vector<RuleSet> read_rules(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("cannot open rule file " + path.string());
  char first = 0;
  while (in.get(first) && std::isspace(static_cast<unsigned char>(first))) {
  }
  in.clear();
  in.seekg(0);
  if (first == '[') return read_rules_json(in, path.string());
  return read_rules_csv(in, path.string());
}

}  // namespace ttpsig
