#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ttpsig/aho_corasick.hpp"
#include "ttpsig/category.hpp"
#include "ttpsig/refbase.hpp"

namespace ttpsig {

/// One article of the input corpus.
struct Document {
  std::string doc_id;
  std::string source;
  std::optional<std::string> published;  // ISO-8601 date
  std::string text;
};

/// One dictionary hit. `start`/`end` are UTF-8 byte offsets into the
/// document text (half-open) and text[start, end) == matched_phrase.
/// For techniques `canonical` is the ATT&CK ID.
struct EntityRecord {
  std::string doc_id;
  EntityCategory category = EntityCategory::ThreatActor;
  std::string canonical;
  std::string matched_phrase;
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const EntityRecord&) const = default;
};

/// All extraction hits of a corpus, ordered by (doc_id, start, end).
class EntityDB {
 public:
  EntityDB() = default;

  /// Sorts records and indexes them by document. `doc_ids` lists documents
  /// that exist even without any record. Throws InvalidArgument on an empty
  /// span or overlapping spans inside one document.
  static EntityDB from_records(std::vector<EntityRecord> records,
                               std::vector<std::string> doc_ids = {});

  const std::vector<EntityRecord>& records() const noexcept { return records_; }
  /// Known documents in ascending order.
  const std::vector<std::string>& doc_ids() const noexcept { return doc_ids_; }
  bool contains(std::string_view doc_id) const;

  /// Records of one document, sorted by span. Throws NotFound.
  std::span<const EntityRecord> records_for(std::string_view doc_id) const;

  bool operator==(const EntityDB& other) const {
    return records_ == other.records_ && doc_ids_ == other.doc_ids_;
  }

 private:
  std::vector<EntityRecord> records_;
  std::vector<std::string> doc_ids_;
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> by_doc_;
};

/// Gazetteer compiled from a reference base: one automaton over all
/// normalized aliases.
class Extractor {
 public:
  explicit Extractor(const ReferenceBase& base);

  /// Every maximal word-bounded, case-insensitive alias occurrence.
  /// Longest match wins; equal lengths go to the leftmost; equal spans go
  /// to ThreatActor > Malware > Technique > CVE > Location.
  std::vector<EntityRecord> extract(const Document& doc) const;

 private:
  struct Candidate {
    EntityCategory category;
    std::string canonical;
  };

  AhoCorasick automaton_;
  std::vector<std::vector<Candidate>> candidates_;  // per pattern, best first
};

std::vector<EntityRecord> extract_entities(const Document& doc, const Extractor& extractor);

/// Extracts every document (in parallel when threads != 1). Output does not
/// depend on the thread count. Throws InvalidArgument on a duplicate doc_id.
EntityDB build_entity_db(std::span<const Document> corpus, const Extractor& extractor,
                         unsigned threads = 1);

/// Distinct canonical threat actors mentioned in a document, ascending.
/// Throws NotFound for an unknown doc_id.
std::vector<std::string> actor_of_document(const EntityDB& db, std::string_view doc_id);

/// JSON-Lines corpus: one {doc_id, source, published, text} object per line.
std::vector<Document> read_corpus(std::istream& in, const std::string& source_name);
std::vector<Document> read_corpus(const std::filesystem::path& path);

/// CSV with header doc_id,category,canonical,matched_phrase,start,end.
void write_entity_db(std::ostream& out, const EntityDB& db);
EntityDB read_entity_db(std::istream& in, const std::string& source_name);
EntityDB read_entity_db(const std::filesystem::path& path);

/// Validates YYYY-MM-DD, optionally followed by a time part.
bool is_iso_date(std::string_view s) noexcept;

}  // namespace ttpsig
