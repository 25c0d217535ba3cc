#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ttpsig/extraction.hpp"

namespace ttpsig {

/// Item vocabulary of a transaction.
///  - TechniqueOnly: bare technique IDs ("T1024").
///  - IntrusionSet: techniques, malware and CVEs, each tagged with its
///    category ("technique:T1024", "malware:X-Agent", "cve:CVE-2017-0144").
enum class ItemMode { TechniqueOnly, IntrusionSet };

std::string_view to_string(ItemMode m) noexcept;
/// Accepts "technique" and "intrusion-set".
std::optional<ItemMode> parse_item_mode(std::string_view s) noexcept;

/// Sorted, duplicate-free item identifiers of one document.
using Basket = std::vector<std::string>;

struct Transaction {
  std::string doc_id;
  std::string actor;
  Basket items;
  std::optional<std::string> published;

  bool operator==(const Transaction&) const = default;
};

/// Qualified documents, ordered by doc_id and partitioned by actor.
class TransactionTable {
 public:
  TransactionTable() = default;

  /// Sorts by doc_id and indexes by actor. Throws InvalidArgument on a
  /// duplicate doc_id or a transaction that does not qualify under `mode`.
  static TransactionTable from_transactions(ItemMode mode, std::vector<Transaction> txs);

  ItemMode mode() const noexcept { return mode_; }
  const std::vector<Transaction>& transactions() const noexcept { return txs_; }
  std::size_t size() const noexcept { return txs_.size(); }
  bool empty() const noexcept { return txs_.empty(); }

  /// Actors with at least one transaction, ascending.
  std::vector<std::string> actors() const;
  /// Indices into transactions() for one actor; empty for unknown actors.
  const std::vector<std::size_t>& indices_for(std::string_view actor) const;
  /// Item sets of one actor's transactions, in doc_id order.
  std::vector<Basket> baskets(std::string_view actor) const;

  bool operator==(const TransactionTable& o) const { return mode_ == o.mode_ && txs_ == o.txs_; }

 private:
  ItemMode mode_ = ItemMode::TechniqueOnly;
  std::vector<Transaction> txs_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_actor_;
};

/// Number of distinct technique items in a basket built under `mode`.
std::size_t technique_item_count(const Basket& items, ItemMode mode);

/// A document qualifies when it names exactly one distinct threat actor and
/// at least two distinct techniques. Throws NotFound for unknown doc_id.
std::optional<Transaction> qualify_document(const EntityDB& db, std::string_view doc_id,
                                            ItemMode mode);

/// doc_id -> ISO publication date.
using PublicationDates = std::map<std::string, std::string, std::less<>>;

TransactionTable build_transaction_table(const EntityDB& db, ItemMode mode,
                                         const PublicationDates& dates = {});

/// Inclusive bounds on the date part (YYYY-MM-DD) of `published`.
struct DateRange {
  std::optional<std::string> from;
  std::optional<std::string> to;

  bool active() const noexcept { return from.has_value() || to.has_value(); }
  bool contains(const std::optional<std::string>& published) const;
};

/// Keeps transactions inside the range. With an active range, undated
/// transactions are dropped.
TransactionTable filter_by_date(const TransactionTable& table, const DateRange& range);

/// JSON-Lines: {"doc_id":..,"actor":..,"items":[..]} plus "published" when known.
void write_transactions(std::ostream& out, const TransactionTable& table);
TransactionTable read_transactions(std::istream& in, const std::string& source_name,
                                   ItemMode mode);
TransactionTable read_transactions(const std::filesystem::path& path, ItemMode mode);

}  // namespace ttpsig
