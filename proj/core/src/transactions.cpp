#include "ttpsig/transactions.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "ttpsig/error.hpp"

namespace ttpsig {

std::string_view to_string(ItemMode m) noexcept {
  return m == ItemMode::TechniqueOnly ? "technique" : "intrusion-set";
}

std::optional<ItemMode> parse_item_mode(std::string_view s) noexcept {
  if (s == "technique") return ItemMode::TechniqueOnly;
  if (s == "intrusion-set") return ItemMode::IntrusionSet;
  return std::nullopt;
}

namespace {

constexpr std::string_view kTechniqueTag = "technique:";

std::string item_for(const EntityRecord& r, ItemMode mode) {
  if (mode == ItemMode::TechniqueOnly) return r.canonical;
  switch (r.category) {
    case EntityCategory::Technique: return std::string(kTechniqueTag) + r.canonical;
    case EntityCategory::Malware: return "malware:" + r.canonical;
    case EntityCategory::CVE: return "cve:" + r.canonical;
    default: return {};
  }
}

}  // namespace

std::size_t technique_item_count(const Basket& items, ItemMode mode) {
  if (mode == ItemMode::TechniqueOnly) return items.size();
  return static_cast<std::size_t>(std::count_if(items.begin(), items.end(), [](const auto& s) {
    return std::string_view(s).starts_with(kTechniqueTag);
  }));
}

// ---------------------------------------------------------------------------

TransactionTable TransactionTable::from_transactions(ItemMode mode, std::vector<Transaction> txs) {
  for (Transaction& t : txs) {
    std::sort(t.items.begin(), t.items.end());
    t.items.erase(std::unique(t.items.begin(), t.items.end()), t.items.end());
    if (t.actor.empty())
      throw InvalidArgument("transaction '" + t.doc_id + "' has no actor");
    if (technique_item_count(t.items, mode) < 2)
      throw InvalidArgument("transaction '" + t.doc_id + "' has fewer than two techniques");
  }
  std::sort(txs.begin(), txs.end(),
            [](const Transaction& a, const Transaction& b) { return a.doc_id < b.doc_id; });
  for (std::size_t i = 1; i < txs.size(); ++i)
    if (txs[i].doc_id == txs[i - 1].doc_id)
      throw InvalidArgument("duplicate doc_id '" + txs[i].doc_id + "'");

  TransactionTable table;
  table.mode_ = mode;
  table.txs_ = std::move(txs);
  for (std::size_t i = 0; i < table.txs_.size(); ++i)
    table.by_actor_[table.txs_[i].actor].push_back(i);
  return table;
}

std::vector<std::string> TransactionTable::actors() const {
  std::vector<std::string> out;
  out.reserve(by_actor_.size());
  for (const auto& [actor, _] : by_actor_) out.push_back(actor);
  return out;
}

const std::vector<std::size_t>& TransactionTable::indices_for(std::string_view actor) const {
  static const std::vector<std::size_t> kNone;
  auto it = by_actor_.find(actor);
  return it == by_actor_.end() ? kNone : it->second;
}

std::vector<Basket> TransactionTable::baskets(std::string_view actor) const {
  std::vector<Basket> out;
  for (std::size_t i : indices_for(actor)) out.push_back(txs_[i].items);
  return out;
}

// ---------------------------------------------------------------------------

std::optional<Transaction> qualify_document(const EntityDB& db, std::string_view doc_id,
                                            ItemMode mode) {
  const auto records = db.records_for(doc_id);

  std::set<std::string> actors;
  std::set<std::string> techniques;
  std::set<std::string> items;
  for (const EntityRecord& r : records) {
    if (r.category == EntityCategory::ThreatActor) actors.insert(r.canonical);
    if (r.category == EntityCategory::Technique) techniques.insert(r.canonical);
    std::string item = item_for(r, mode);
    if (mode == ItemMode::TechniqueOnly && r.category != EntityCategory::Technique) continue;
    if (!item.empty()) items.insert(std::move(item));
  }
  if (actors.size() != 1 || techniques.size() < 2) return std::nullopt;

  Transaction t;
  t.doc_id = std::string(doc_id);
  t.actor = *actors.begin();
  t.items.assign(items.begin(), items.end());
  return t;
}

TransactionTable build_transaction_table(const EntityDB& db, ItemMode mode,
                                         const PublicationDates& dates) {
  std::vector<Transaction> txs;
  for (const std::string& id : db.doc_ids()) {
    auto t = qualify_document(db, id, mode);
    if (!t) continue;
    if (auto it = dates.find(id); it != dates.end()) t->published = it->second;
    txs.push_back(std::move(*t));
  }
  return TransactionTable::from_transactions(mode, std::move(txs));
}

bool DateRange::contains(const std::optional<std::string>& published) const {
  if (!active()) return true;
  if (!published) return false;
  const std::string_view day = std::string_view(*published).substr(0, 10);
  if (from && day < std::string_view(*from).substr(0, 10)) return false;
  if (to && day > std::string_view(*to).substr(0, 10)) return false;
  return true;
}

TransactionTable filter_by_date(const TransactionTable& table, const DateRange& range) {
  if (!range.active()) return table;
  std::vector<Transaction> kept;
  for (const Transaction& t : table.transactions())
    if (range.contains(t.published)) kept.push_back(t);
  return TransactionTable::from_transactions(table.mode(), std::move(kept));
}

// ---------------------------------------------------------------------------

void write_transactions(std::ostream& out, const TransactionTable& table) {
  for (const Transaction& t : table.transactions()) {
    nlohmann::ordered_json j;
    j["doc_id"] = t.doc_id;
    j["actor"] = t.actor;
    j["items"] = t.items;
    if (t.published) j["published"] = *t.published;
    out << j.dump() << '\n';
  }
}

TransactionTable read_transactions(std::istream& in, const std::string& source_name,
                                   ItemMode mode) {
  std::vector<Transaction> txs;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(source_name, lineno, std::string("invalid JSON: ") + e.what());
    }
    try {
      Transaction t;
      t.doc_id = j.at("doc_id").get<std::string>();
      t.actor = j.at("actor").get<std::string>();
      t.items = j.at("items").get<Basket>();
      if (auto it = j.find("published"); it != j.end() && !it->is_null()) {
        t.published = it->get<std::string>();
        if (!is_iso_date(*t.published))
          throw ParseError(source_name, lineno, "published is not an ISO-8601 date");
      }
      if (!seen.insert(t.doc_id).second)
        throw ParseError(source_name, lineno, "duplicate doc_id '" + t.doc_id + "'");
      Basket uniq = t.items;
      std::sort(uniq.begin(), uniq.end());
      uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
      if (t.actor.empty()) throw ParseError(source_name, lineno, "empty actor");
      if (technique_item_count(uniq, mode) < 2)
        throw ParseError(source_name, lineno,
                         "transaction needs at least two technique items in " +
                             std::string(to_string(mode)) + " mode");
      txs.push_back(std::move(t));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(source_name, lineno, std::string("bad transaction: ") + e.what());
    }
  }
  return TransactionTable::from_transactions(mode, std::move(txs));
}

TransactionTable read_transactions(const std::filesystem::path& path, ItemMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("cannot open transaction table " + path.string());
  return read_transactions(in, path.string(), mode);
}

}  // namespace ttpsig
