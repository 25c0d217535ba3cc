#include "ttpsig/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "numfmt.hpp"
#include "ttpsig/csv.hpp"
#include "ttpsig/error.hpp"

namespace ttpsig {

using ojson = nlohmann::ordered_json;

std::optional<ReportFormat> parse_report_format(std::string_view s) noexcept {
  if (s == "text") return ReportFormat::Text;
  if (s == "markdown" || s == "markdown-table" || s == "md") return ReportFormat::Markdown;
  if (s == "csv") return ReportFormat::Csv;
  if (s == "json") return ReportFormat::Json;
  return std::nullopt;
}

std::optional<ConfidenceDisplay> parse_confidence_display(std::string_view s) noexcept {
  if (s == "truncated") return ConfidenceDisplay::TruncatedPercent;
  if (s == "2-decimal") return ConfidenceDisplay::TwoDecimalPercent;
  return std::nullopt;
}

void RenderConfig::validate() const {
  if (lift_decimals < 0 || lift_decimals > 6)
    throw InvalidArgument("lift_decimals must be within [0, 6]");
  if (stats_decimals < 0 || stats_decimals > 6)
    throw InvalidArgument("stats_decimals must be within [0, 6]");
}

std::string format_half_up(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double rounded = std::floor(value * scale + 0.5 + 1e-9) / scale;
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, rounded, std::chars_format::fixed, decimals);
  return std::string(buf, p);
}

std::string format_confidence(double confidence, ConfidenceDisplay display) {
  if (display == ConfidenceDisplay::TwoDecimalPercent) return format_half_up(confidence * 100.0, 2);
  const auto pct = static_cast<long long>(std::floor(confidence * 100.0 + 1e-9));
  return std::to_string(pct);
}

std::string item_label(std::string_view item, const ReferenceBase* names) {
  std::string_view id = item;
  if (id.starts_with("technique:")) id.remove_prefix(10);
  if (names && is_technique_id(id))
    if (auto name = names->technique_name(id)) return *name + " (" + std::string(id) + ")";
  return std::string(item);
}

namespace {

const std::vector<std::string> kRuleColumns = {"ID",      "Antecedent", "Consequent",
                                               "Support", "Confidence", "Lift"};

void text_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "  " : "") << cells[i];
  out << '\n';
}

void markdown_row(std::ostream& out, const std::vector<std::string>& cells) {
  out << '|';
  for (const std::string& c : cells) out << ' ' << c << " |";
  out << '\n';
}

void markdown_rule(std::ostream& out, std::size_t columns) {
  out << '|';
  for (std::size_t i = 0; i < columns; ++i) out << " --- |";
  out << '\n';
}

/// Writes a header + rows table in one of the tabular formats.
void table(std::ostream& out, ReportFormat format, const std::vector<std::string>& header,
           const std::vector<std::vector<std::string>>& rows) {
  switch (format) {
    case ReportFormat::Markdown:
      markdown_row(out, header);
      markdown_rule(out, header.size());
      for (const auto& r : rows) markdown_row(out, r);
      break;
    case ReportFormat::Csv:
      csv::write_row(out, header);
      for (const auto& r : rows) csv::write_row(out, r);
      break;
    default:
      text_row(out, header);
      for (const auto& r : rows) text_row(out, r);
      break;
  }
}

std::vector<std::vector<std::string>> rule_rows(std::span<const AssociationRule> rules,
                                                const RenderConfig& c) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const AssociationRule& r = rules[i];
    rows.push_back({std::to_string(i + 1), item_label(r.antecedent, c.names),
                    item_label(r.consequent, c.names), std::to_string(r.metrics.pair_support),
                    format_confidence(r.metrics.confidence, c.confidence),
                    format_half_up(r.metrics.lift, c.lift_decimals)});
  }
  return rows;
}

ojson rule_json(const AssociationRule& r, const RenderConfig& c) {
  ojson j;
  j["actor"] = r.actor;
  j["antecedent"] = r.antecedent;
  j["antecedent_label"] = item_label(r.antecedent, c.names);
  j["consequent"] = r.consequent;
  j["consequent_label"] = item_label(r.consequent, c.names);
  j["pair_support"] = r.metrics.pair_support;
  j["antecedent_support"] = r.metrics.antecedent_support;
  j["consequent_support"] = r.metrics.consequent_support;
  j["n"] = r.metrics.n;
  j["confidence"] = r.metrics.confidence;
  j["lift"] = r.metrics.lift;
  return j;
}

ojson stats_json(const SummaryStats& s) {
  ojson j;
  j["min"] = s.min;
  j["max"] = s.max;
  j["mean"] = s.mean;
  j["median"] = s.median;
  j["mode"] = s.mode;
  j["stddev"] = s.stddev;
  j["iqr"] = s.iqr;
  return j;
}

SummaryStats scaled(SummaryStats s, double k) {
  for (double* v : {&s.min, &s.max, &s.mean, &s.median, &s.mode, &s.stddev, &s.iqr}) *v *= k;
  return s;
}

}  // namespace

std::string render_rule_table(std::span<const AssociationRule> rules, const RenderConfig& config) {
  config.validate();
  std::ostringstream out;
  if (config.format == ReportFormat::Json) {
    ojson arr = ojson::array();
    for (const AssociationRule& r : rules) arr.push_back(rule_json(r, config));
    out << arr.dump(2) << '\n';
    return out.str();
  }
  table(out, config.format, kRuleColumns, rule_rows(rules, config));
  return out.str();
}

std::string render_profiles(std::span<const ActorProfile> profiles, const RenderConfig& config) {
  config.validate();
  std::ostringstream out;
  if (config.format == ReportFormat::Json) {
    ojson arr = ojson::array();
    for (const ActorProfile& p : profiles) {
      ojson j;
      j["actor"] = p.actor;
      j["rule_count"] = p.rule_count;
      if (p.rule_count > 0) {
        j["pair_support"] = stats_json(p.pair_support);
        j["antecedent_support"] = stats_json(p.antecedent_support);
        j["confidence"] = stats_json(p.confidence);
        j["lift"] = stats_json(p.lift);
      }
      ojson top = ojson::array();
      for (const AssociationRule& r : p.top_rules) top.push_back(rule_json(r, config));
      j["top_rules"] = std::move(top);
      arr.push_back(std::move(j));
    }
    out << arr.dump(2) << '\n';
    return out.str();
  }
  if (config.format == ReportFormat::Csv) {
    std::vector<std::vector<std::string>> rows;
    for (const ActorProfile& p : profiles) {
      auto actor_rows = rule_rows(p.top_rules, config);
      for (auto& r : actor_rows) {
        r.insert(r.begin(), p.actor);
        rows.push_back(std::move(r));
      }
    }
    std::vector<std::string> header = kRuleColumns;
    header.insert(header.begin(), "Actor");
    table(out, ReportFormat::Csv, header, rows);
    return out.str();
  }
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const ActorProfile& p = profiles[i];
    if (i) out << '\n';
    if (config.format == ReportFormat::Markdown)
      out << "## " << p.actor << "\n\n";
    else
      out << p.actor << '\n';
    out << "Rules: " << p.rule_count;
    if (p.rule_count > 0)
      out << "; mean support " << format_half_up(p.pair_support.mean, config.stats_decimals)
          << "; mean confidence "
          << format_half_up(p.confidence.mean * 100.0, config.stats_decimals) << "; mean lift "
          << format_half_up(p.lift.mean, config.stats_decimals);
    out << (config.format == ReportFormat::Markdown ? "\n\n" : "\n");
    table(out, config.format, kRuleColumns, rule_rows(p.top_rules, config));
  }
  return out.str();
}

std::string render_stats(std::span<const RuleSet> sets, const RenderConfig& config) {
  config.validate();
  std::vector<double> ant, conf, lift;
  for (const RuleSet& rs : sets)
    for (const AssociationRule& r : rs.rules) {
      ant.push_back(static_cast<double>(r.metrics.antecedent_support));
      conf.push_back(r.metrics.confidence);
      lift.push_back(r.metrics.lift);
    }

  std::vector<const RuleSet*> by_count;
  for (const RuleSet& rs : sets) by_count.push_back(&rs);
  std::stable_sort(by_count.begin(), by_count.end(), [](const RuleSet* a, const RuleSet* b) {
    return a->size() != b->size() ? a->size() > b->size() : a->actor < b->actor;
  });

  std::ostringstream out;
  const int d = config.stats_decimals;

  if (config.format == ReportFormat::Json) {
    ojson j;
    j["rule_count"] = ant.size();
    j["actor_count"] = sets.size();
    if (!ant.empty()) {
      j["antecedent_support"] = stats_json(summary_stats(ant));
      j["confidence"] = stats_json(summary_stats(conf));
      j["lift"] = stats_json(summary_stats(lift));
    }
    ojson actors = ojson::array();
    for (const RuleSet* rs : by_count) {
      ActorProfile p = profile_actor(*rs, 0);
      ojson a;
      a["actor"] = p.actor;
      a["rule_count"] = p.rule_count;
      if (p.rule_count) {
        a["pair_support"] = stats_json(p.pair_support);
        a["confidence"] = stats_json(p.confidence);
        a["lift"] = stats_json(p.lift);
      }
      actors.push_back(std::move(a));
    }
    j["actors"] = std::move(actors);
    out << j.dump(2) << '\n';
    return out.str();
  }

  const bool md = config.format == ReportFormat::Markdown;
  if (config.format != ReportFormat::Csv)
    out << (md ? "## " : "") << "Rules: " << ant.size() << " across " << sets.size()
        << " actors" << (md ? "\n\n" : "\n");

  if (!ant.empty()) {
    const SummaryStats sa = summary_stats(ant);
    const SummaryStats sc = scaled(summary_stats(conf), 100.0);
    const SummaryStats sl = summary_stats(lift);
    auto row = [&](const char* name, double SummaryStats::*field) {
      return std::vector<std::string>{name, format_half_up(sa.*field, d),
                                      format_half_up(sc.*field, d), format_half_up(sl.*field, d)};
    };
    table(out, config.format, {"Measure", "Antecedent Support", "Confidence (%)", "Lift"},
          {row("Minimal value", &SummaryStats::min), row("Maximal value", &SummaryStats::max),
           row("Mean", &SummaryStats::mean), row("Median", &SummaryStats::median),
           row("Mode", &SummaryStats::mode), row("Standard deviation", &SummaryStats::stddev),
           row("Interquartile range (IQR)", &SummaryStats::iqr)});
    if (config.format != ReportFormat::Csv) out << '\n';
  }

  std::vector<std::vector<std::string>> rows;
  for (const RuleSet* rs : by_count) {
    const ActorProfile p = profile_actor(*rs, 0);
    auto cell = [&](const SummaryStats& s, double k) {
      if (p.rule_count == 0) return std::string("-");
      return format_half_up(s.mean * k, d) + " (" + format_half_up(s.stddev * k, d) + ")";
    };
    rows.push_back({p.actor, std::to_string(p.rule_count), cell(p.pair_support, 1.0),
                    cell(p.confidence, 100.0), cell(p.lift, 1.0)});
  }
  table(out, config.format,
        {"Actor", "Rules", "Mean Support (SD)", "Mean Confidence (SD)", "Mean Lift (SD)"}, rows);
  return out.str();
}

std::optional<SimilarityMetric> parse_similarity_metric(std::string_view s) noexcept {
  if (s == "jaccard") return SimilarityMetric::Jaccard;
  if (s == "overlap-dice" || s == "overlap_dice") return SimilarityMetric::OverlapDice;
  if (s == "dice-standard" || s == "dice_standard") return SimilarityMetric::DiceStandard;
  return std::nullopt;
}

std::string_view to_string(SimilarityMetric m) noexcept {
  switch (m) {
    case SimilarityMetric::Jaccard: return "jaccard";
    case SimilarityMetric::OverlapDice: return "overlap_dice";
    case SimilarityMetric::DiceStandard: return "dice_standard";
  }
  return "";
}

namespace {

const std::vector<std::vector<double>>& pick(const SimilarityMatrix& m, SimilarityMetric metric) {
  switch (metric) {
    case SimilarityMetric::OverlapDice: return m.overlap_dice;
    case SimilarityMetric::DiceStandard: return m.dice_standard;
    default: return m.jaccard;
  }
}

constexpr const char* kMetricCaption[] = {
    "jaccard: |A n B| / |A u B|",
    "overlap_dice: |A n B| / min(|A|, |B|)",
    "dice_standard: 2|A n B| / (|A| + |B|)",
};

}  // namespace

std::string render_matrix_csv(const SimilarityMatrix& matrix, SimilarityMetric metric) {
  std::ostringstream out;
  std::vector<std::string> header{"actor"};
  header.insert(header.end(), matrix.actors.begin(), matrix.actors.end());
  csv::write_row(out, header);
  const auto& values = pick(matrix, metric);
  for (std::size_t i = 0; i < matrix.actors.size(); ++i) {
    std::vector<std::string> row{matrix.actors[i]};
    for (double v : values[i]) row.push_back(detail::shortest(v));
    csv::write_row(out, row);
  }
  return out.str();
}

std::string render_comparison(std::span<const SharedRuleEntry> shared, std::size_t top_k,
                              const SimilarityMatrix& matrix, const RenderConfig& config) {
  config.validate();
  std::ostringstream out;
  const std::size_t k = std::min(top_k, shared.size());
  const SimilarityMetric metrics[] = {SimilarityMetric::Jaccard, SimilarityMetric::OverlapDice,
                                      SimilarityMetric::DiceStandard};

  if (config.format == ReportFormat::Json) {
    ojson j;
    ojson top = ojson::array();
    for (std::size_t i = 0; i < k; ++i) {
      ojson e;
      e["antecedent"] = shared[i].pair.first;
      e["consequent"] = shared[i].pair.second;
      e["count"] = shared[i].count;
      e["actors"] = shared[i].actors;
      top.push_back(std::move(e));
    }
    j["shared_rules"] = std::move(top);
    j["actors"] = matrix.actors;
    for (SimilarityMetric m : metrics) j[std::string(to_string(m))] = pick(matrix, m);
    j["notes"] = {"rule identity is the ordered pair (antecedent, consequent)",
                  "two empty rule sets score 1; one empty set scores 0"};
    out << j.dump(2) << '\n';
    return out.str();
  }
  if (config.format == ReportFormat::Csv) return render_matrix_csv(matrix, SimilarityMetric::Jaccard);

  const bool md = config.format == ReportFormat::Markdown;
  out << (md ? "## " : "") << "Most shared rules" << (md ? "\n\n" : "\n");
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < k; ++i) {
    std::string actors;
    for (const std::string& a : shared[i].actors) actors += (actors.empty() ? "" : ", ") + a;
    rows.push_back({shared[i].pair.first + "-" + shared[i].pair.second,
                    std::to_string(shared[i].count), actors});
  }
  table(out, config.format, {"Association", "Count", "Threat Actors"}, rows);

  for (std::size_t mi = 0; mi < 3; ++mi) {
    out << '\n' << (md ? "## " : "") << kMetricCaption[mi] << (md ? "\n\n" : "\n");
    std::vector<std::string> header{"Threat Actor"};
    header.insert(header.end(), matrix.actors.begin(), matrix.actors.end());
    std::vector<std::vector<std::string>> mrows;
    const auto& values = pick(matrix, metrics[mi]);
    for (std::size_t i = 0; i < matrix.actors.size(); ++i) {
      std::vector<std::string> r{matrix.actors[i]};
      for (double v : values[i]) r.push_back(format_half_up(v, config.stats_decimals));
      mrows.push_back(std::move(r));
    }
    table(out, config.format, header, mrows);
  }
  out << '\n'
      << "Rules are compared as ordered (antecedent, consequent) pairs. "
         "Two empty sets score 1; one empty set scores 0.\n";
  return out.str();
}

}  // namespace ttpsig
