#include "cli.hpp"

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "ttpsig/error.hpp"
#include "ttpsig/extraction.hpp"
#include "ttpsig/miner.hpp"
#include "ttpsig/profiling.hpp"
#include "ttpsig/refbase.hpp"
#include "ttpsig/report.hpp"
#include "ttpsig/transactions.hpp"

namespace ttpsig::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  // shared
  std::string input;
  std::string refbase;
  std::string mode = "technique";
  std::string out;
  std::string format;
  unsigned threads = 0;

  // transactions / mine
  std::string corpus;
  std::string from;
  std::string to;

  // mine
  std::uint64_t cs_base = 3;
  double cs_fraction = 0.02;
  double as_mult = 2.0;
  std::optional<std::uint64_t> cs_abs;
  std::optional<double> as_abs;
  double min_conf = 0.5;
  std::optional<double> min_lift;
  std::vector<std::string> actors;

  // profile / compare / stats
  std::size_t top_k = 5;
  std::string confidence = "truncated";
  int lift_decimals = 2;
  int stats_decimals = 3;
  bool repetitive = false;
  std::string metric = "jaccard";

  // synth
  std::uint64_t seed = 1;
  std::size_t synth_actors = 3;
  std::size_t synth_docs = 200;
  std::size_t synth_vocab = 30;
};

/// A failure the user can fix: bad file, bad value.
struct UsageError : Error {
  using Error::Error;
};

const CLI::Validator kIsoDate(
    [](std::string& s) {
      return is_iso_date(s) ? std::string{} : "'" + s + "' is not an ISO-8601 date (YYYY-MM-DD)";
    },
    "DATE");

void write_artifact(const Options& o, std::ostream& stdout_stream, const std::string& payload) {
  if (o.out.empty() || o.out == "-") {
    stdout_stream << payload;
    return;
  }
  std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError("cannot write --out " + o.out);
  f << payload;
  if (!f) throw UsageError("failed writing --out " + o.out);
}

ItemMode mode_of(const Options& o) { return *parse_item_mode(o.mode); }

DateRange range_of(const Options& o) {
  DateRange r;
  if (!o.from.empty()) r.from = o.from;
  if (!o.to.empty()) r.to = o.to;
  if (r.from && r.to && *r.to < *r.from) throw UsageError("--from is after --to");
  return r;
}

RenderConfig render_of(const Options& o, ReportFormat fallback, const ReferenceBase* names) {
  RenderConfig c;
  c.format = o.format.empty() ? fallback : *parse_report_format(o.format);
  c.confidence = *parse_confidence_display(o.confidence);
  c.lift_decimals = o.lift_decimals;
  c.stats_decimals = o.stats_decimals;
  c.names = names;
  return c;
}

std::optional<ReferenceBase> names_of(const Options& o, std::ostream& err) {
  if (o.refbase.empty()) return std::nullopt;
  ReferenceBase base = load_refbase_dir(o.refbase);
  for (const AliasAmbiguity& a : base.ambiguities()) {
    err << "warning: " << to_string(a.category) << " alias '" << a.alias << "' maps to";
    for (const std::string& c : a.canonicals) err << ' ' << c;
    err << '\n';
  }
  return base;
}

std::vector<std::string> selected_actors(const Options& o, std::span<const RuleSet> sets) {
  if (!o.actors.empty()) return o.actors;
  return select_actors_by_rule_count(sets, 5);
}

// ---------------------------------------------------------------------------

void cmd_extract(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.refbase.empty()) throw UsageError("--refbase is required for extract");
  const auto base = names_of(o, err);
  const auto corpus = read_corpus(o.input);
  const Extractor extractor(*base);
  const EntityDB db = build_entity_db(corpus, extractor, o.threads);
  std::ostringstream s;
  write_entity_db(s, db);
  write_artifact(o, out, s.str());
}

void cmd_transactions(const Options& o, std::ostream& out, std::ostream&) {
  const EntityDB db = read_entity_db(o.input);
  PublicationDates dates;
  if (!o.corpus.empty())
    for (const Document& d : read_corpus(o.corpus))
      if (d.published) dates.emplace(d.doc_id, *d.published);
  const DateRange range = range_of(o);
  if (range.active() && o.corpus.empty())
    throw UsageError("--from/--to need --corpus to know publication dates");
  const TransactionTable table =
      filter_by_date(build_transaction_table(db, mode_of(o), dates), range);
  std::ostringstream s;
  write_transactions(s, table);
  write_artifact(o, out, s.str());
}

void cmd_mine(const Options& o, std::ostream& out, std::ostream&) {
  MiningParams p;
  p.cs_base = o.cs_base;
  p.cs_fraction = o.cs_fraction;
  p.as_multiplier = o.as_mult;
  p.cs_absolute = o.cs_abs;
  p.as_absolute = o.as_abs;
  p.min_confidence = o.min_conf;
  p.min_lift = o.min_lift;
  try {
    p.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }

  const TransactionTable table = filter_by_date(read_transactions(o.input, mode_of(o)), range_of(o));
  std::vector<RuleSet> sets = mine_all(table, p, o.actors, o.threads);
  std::erase_if(sets, [](const RuleSet& rs) { return rs.empty(); });

  std::ostringstream s;
  if (o.format == "csv")
    write_rules_csv(s, sets);
  else
    write_rules_json(s, sets);
  write_artifact(o, out, s.str());
}

void cmd_profile(const Options& o, std::ostream& out, std::ostream& err) {
  const auto names = names_of(o, err);
  const std::vector<RuleSet> sets = read_rules(o.input);
  std::vector<ActorProfile> profiles;
  for (const RuleSet& rs : pick_actors(sets, selected_actors(o, sets)))
    profiles.push_back(profile_actor(rs, o.top_k));
  write_artifact(o, out,
                 render_profiles(profiles, render_of(o, ReportFormat::Text,
                                                     names ? &*names : nullptr)));
}

void cmd_compare(const Options& o, std::ostream& out, std::ostream&) {
  const std::vector<RuleSet> sets = read_rules(o.input);
  std::vector<RuleSet> chosen = pick_actors(sets, selected_actors(o, sets));
  if (o.repetitive) chosen = repetitive_subset(chosen);
  const SimilarityMatrix matrix = similarity_matrix(chosen);
  const RenderConfig cfg = render_of(o, ReportFormat::Text, nullptr);
  if (cfg.format == ReportFormat::Csv) {
    write_artifact(o, out, render_matrix_csv(matrix, *parse_similarity_metric(o.metric)));
    return;
  }
  write_artifact(o, out, render_comparison(shared_rules(chosen), o.top_k, matrix, cfg));
}

void cmd_stats(const Options& o, std::ostream& out, std::ostream&) {
  const std::vector<RuleSet> sets = read_rules(o.input);
  write_artifact(o, out, render_stats(sets, render_of(o, ReportFormat::Text, nullptr)));
}

// Random transaction table whose actors each favour a few technique
// clusters, so that mining finds rules.
void cmd_synth(const Options& o, std::ostream& out, std::ostream&) {
  if (o.synth_vocab < 2) throw UsageError("--vocab must be at least 2");
  std::mt19937_64 rng(o.seed);
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
  };
  const ItemMode mode = mode_of(o);
  auto item = [&](std::size_t i) {
    std::string id = "T" + std::to_string(1000 + i);
    return mode == ItemMode::TechniqueOnly ? id : "technique:" + id;
  };

  std::vector<Transaction> txs;
  for (std::size_t d = 0; d < o.synth_docs; ++d) {
    const std::size_t actor = uniform(0, o.synth_actors - 1);
    const std::size_t size = uniform(2, std::min<std::size_t>(8, o.synth_vocab));
    std::set<std::size_t> picks;
    // Half of the draws come from the actor's home cluster.
    const std::size_t cluster = (actor * 5) % o.synth_vocab;
    while (picks.size() < size) {
      if (rng() % 2)
        picks.insert((cluster + uniform(0, 4)) % o.synth_vocab);
      else
        picks.insert(uniform(0, o.synth_vocab - 1));
    }
    Transaction t;
    char buf[32];
    std::snprintf(buf, sizeof buf, "doc-%06zu", d);
    t.doc_id = buf;
    t.actor = "ACTOR" + std::to_string(actor + 1);
    for (std::size_t i : picks) t.items.push_back(item(i));
    txs.push_back(std::move(t));
  }
  std::ostringstream s;
  write_transactions(s, TransactionTable::from_transactions(mode, std::move(txs)));
  write_artifact(o, out, s.str());
}

// ---------------------------------------------------------------------------

void add_shared(CLI::App* cmd, Options& o, bool needs_input, std::vector<std::string> formats) {
  if (needs_input)
    cmd->add_option("input", o.input, "Input artifact from the previous stage")
        ->required()
        ->check(CLI::ExistingFile);
  cmd->add_option("--refbase", o.refbase, "Directory of reference CSV files")
      ->envname("AR_REFBASE")
      ->check(CLI::ExistingDirectory);
  cmd->add_option("--mode", o.mode, "Item vocabulary: technique | intrusion-set")
      ->envname("AR_MODE")
      ->check(CLI::IsMember({"technique", "intrusion-set"}));
  cmd->add_option("--out", o.out, "Output path (default: stdout)")->envname("AR_OUT");
  if (!formats.empty())
    cmd->add_option("--format", o.format, "Output format")
        ->envname("AR_FORMAT")
        ->check(CLI::IsMember(formats));
  cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)")
      ->envname("AR_THREADS")
      ->check(CLI::Range(0u, 1024u));
}

void add_actor_filter(CLI::App* cmd, Options& o) {
  cmd->add_option("--actors", o.actors, "Comma-separated actor names")
      ->envname("AR_ACTORS")
      ->delimiter(',');
}

void add_dates(CLI::App* cmd, Options& o) {
  cmd->add_option("--from", o.from, "Earliest publication date (inclusive)")
      ->envname("AR_FROM")
      ->check(kIsoDate);
  cmd->add_option("--to", o.to, "Latest publication date (inclusive)")
      ->envname("AR_TO")
      ->check(kIsoDate);
}

void add_rendering(CLI::App* cmd, Options& o) {
  cmd->add_option("--confidence", o.confidence, "Confidence display: truncated | 2-decimal")
      ->envname("AR_CONFIDENCE")
      ->check(CLI::IsMember({"truncated", "2-decimal"}));
  cmd->add_option("--lift-decimals", o.lift_decimals, "Lift precision in rule tables")
      ->envname("AR_LIFT_DECIMALS")
      ->check(CLI::Range(0, 6));
  cmd->add_option("--stats-decimals", o.stats_decimals, "Precision of summary statistics")
      ->envname("AR_STATS_DECIMALS")
      ->check(CLI::Range(0, 6));
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Threat-actor technique association mining"};
  app.name(args.empty() ? "ttpsig" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);

  auto* extract = app.add_subcommand("extract", "Corpus JSONL -> entity database CSV");
  add_shared(extract, o, true, {});

  auto* transactions =
      app.add_subcommand("transactions", "Entity database CSV -> transaction JSONL");
  add_shared(transactions, o, true, {});
  transactions->add_option("--corpus", o.corpus, "Corpus JSONL supplying publication dates")
      ->envname("AR_CORPUS")
      ->check(CLI::ExistingFile);
  add_dates(transactions, o);

  auto* mine = app.add_subcommand("mine", "Transaction JSONL -> association rules");
  add_shared(mine, o, true, {"json", "csv"});
  mine->add_option("--cs-base", o.cs_base, "Candidate support base count")->envname("AR_CS_BASE");
  mine->add_option("--cs-fraction", o.cs_fraction, "Candidate support fraction of n")
      ->envname("AR_CS_FRACTION")
      ->check(CLI::Range(0.0, 1.0));
  mine->add_option("--as-mult", o.as_mult, "Antecedent support multiple of CS")
      ->envname("AR_AS_MULT")
      ->check(CLI::PositiveNumber);
  mine->add_option("--cs-abs", o.cs_abs, "Absolute candidate support (overrides base/fraction)")
      ->envname("AR_CS_ABS");
  mine->add_option("--as-abs", o.as_abs, "Absolute antecedent support (overrides multiple)")
      ->envname("AR_AS_ABS")
      ->check(CLI::NonNegativeNumber);
  mine->add_option("--min-conf", o.min_conf, "Minimum confidence")
      ->envname("AR_MIN_CONF")
      ->check(CLI::Range(0.0, 1.0));
  mine->add_option("--min-lift", o.min_lift, "Minimum lift (unset: no filter)")
      ->envname("AR_MIN_LIFT")
      ->check(CLI::NonNegativeNumber);
  add_actor_filter(mine, o);
  add_dates(mine, o);

  auto* profile = app.add_subcommand("profile", "Rules -> per-actor top-k tables");
  add_shared(profile, o, true, {"text", "markdown", "csv", "json"});
  profile->add_option("--top-k", o.top_k, "Rules per actor")->envname("AR_TOP_K");
  add_actor_filter(profile, o);
  add_rendering(profile, o);

  auto* compare = app.add_subcommand("compare", "Rules -> shared rules and similarity");
  add_shared(compare, o, true, {"text", "markdown", "csv", "json"});
  compare->add_option("--top-k", o.top_k, "Shared rules to list")->envname("AR_TOP_K");
  compare->add_flag("--repetitive", o.repetitive,
                    "Keep only rules held by at least two actors");
  compare->add_option("--metric", o.metric, "Matrix written by --format csv")
      ->envname("AR_METRIC")
      ->check(CLI::IsMember({"jaccard", "overlap-dice", "dice-standard"}));
  add_actor_filter(compare, o);
  add_rendering(compare, o);

  auto* stats = app.add_subcommand("stats", "Rules -> summary measures");
  add_shared(stats, o, true, {"text", "markdown", "csv", "json"});
  add_rendering(stats, o);

  auto* synth = app.add_subcommand("synth", "Random transaction JSONL for testing");
  add_shared(synth, o, false, {});
  synth->add_option("--seed", o.seed, "RNG seed")->envname("AR_SEED");
  synth->add_option("--actors", o.synth_actors, "Number of actors")->check(CLI::Range(1, 1000));
  synth->add_option("--docs", o.synth_docs, "Number of transactions");
  synth->add_option("--vocab", o.synth_vocab, "Technique vocabulary size");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("ttpsig");

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (extract->parsed()) cmd_extract(o, out, err);
    else if (transactions->parsed()) cmd_transactions(o, out, err);
    else if (mine->parsed()) cmd_mine(o, out, err);
    else if (profile->parsed()) cmd_profile(o, out, err);
    else if (compare->parsed()) cmd_compare(o, out, err);
    else if (stats->parsed()) cmd_stats(o, out, err);
    else if (synth->parsed()) cmd_synth(o, out, err);
  } catch (const Error& e) {
    // Parse errors, missing files, invalid values and unwritable outputs.
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace ttpsig::cli
