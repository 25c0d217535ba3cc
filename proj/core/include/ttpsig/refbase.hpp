#pragma once

#include <compare>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ttpsig/category.hpp"

namespace ttpsig {

/// One alias row of a reference base. `alias` holds the normalized key.
struct RefEntry {
  std::string canonical_name;
  std::string alias;
  EntityCategory category = EntityCategory::ThreatActor;
  std::optional<std::string> technique_id;

  auto operator<=>(const RefEntry&) const = default;
};

/// A (canonical, category) pair returned by alias resolution.
struct Resolution {
  std::string canonical_name;
  EntityCategory category = EntityCategory::ThreatActor;

  auto operator<=>(const Resolution&) const = default;
};

/// Same normalized alias mapped to more than one canonical in one category.
struct AliasAmbiguity {
  std::string alias;
  EntityCategory category = EntityCategory::ThreatActor;
  std::vector<std::string> canonicals;
};

/// True for ATT&CK technique identifiers of the form T followed by 4 digits.
bool is_technique_id(std::string_view s) noexcept;

/// Alias tables for one or more entity categories. Immutable once built;
/// concurrent readers need no synchronisation.
class ReferenceBase {
 public:
  ReferenceBase() = default;

  /// Builds a base from raw rows. Aliases are normalized, exact duplicates
  /// collapsed. Throws InvalidArgument when a row is empty after
  /// normalization, when technique_id presence does not match the category,
  /// or when a canonical name appears under two categories.
  static ReferenceBase from_entries(std::vector<RefEntry> rows);

  /// Union of two bases, with the same validation as from_entries.
  static ReferenceBase merge(const ReferenceBase& a, const ReferenceBase& b);

  const std::vector<RefEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  /// Entries whose normalized alias equals `normalized_alias` exactly.
  std::vector<const RefEntry*> lookup(std::string_view normalized_alias) const;

  /// All canonical entities whose alias matches normalize(surface).
  std::vector<Resolution> resolve(std::string_view surface) const;

  /// Display name for a technique ID, if the base carries one.
  std::optional<std::string> technique_name(std::string_view technique_id) const;

  const std::vector<AliasAmbiguity>& ambiguities() const noexcept { return ambiguities_; }

 private:
  void build_index();

  std::vector<RefEntry> entries_;
  std::unordered_map<std::string, std::vector<std::size_t>> index_;
  std::unordered_map<std::string, std::string> technique_names_;
  std::vector<AliasAmbiguity> ambiguities_;
};

/// Free-function spelling of ReferenceBase::resolve.
std::vector<Resolution> resolve_alias(const ReferenceBase& base, std::string_view surface);

/// Reads one reference CSV (header `canonical_name,alias,category,technique_id`).
/// Every row's category must equal `category`. Technique bases also gain an
/// alias equal to each technique ID so literal IDs in text are recognised.
/// Throws ParseError naming the line of a malformed row, NotFound if the
/// file cannot be opened.
ReferenceBase load_refbase(const std::filesystem::path& path, EntityCategory category);

/// File name used for a category inside a reference directory.
std::string_view refbase_file_name(EntityCategory category) noexcept;

/// Loads and merges actors.csv, malware.csv, techniques.csv, locations.csv
/// and cves.csv from `dir`. Absent files contribute nothing.
ReferenceBase load_refbase_dir(const std::filesystem::path& dir);

}  // namespace ttpsig
