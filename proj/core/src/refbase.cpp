#include "ttpsig/refbase.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "ttpsig/csv.hpp"
#include "ttpsig/error.hpp"
#include "ttpsig/normalize.hpp"

namespace ttpsig {

bool is_technique_id(std::string_view s) noexcept {
  if (s.size() != 5 || s[0] != 'T') return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

ReferenceBase ReferenceBase::from_entries(std::vector<RefEntry> rows) {
  for (RefEntry& e : rows) {
    e.alias = normalize_alias(e.alias);
    if (e.canonical_name.empty()) throw InvalidArgument("empty canonical name");
    if (e.alias.empty())
      throw InvalidArgument("alias for '" + e.canonical_name + "' is empty after normalization");
    const bool is_tech = e.category == EntityCategory::Technique;
    if (is_tech != e.technique_id.has_value())
      throw InvalidArgument("technique_id must be present exactly for Technique rows ('" +
                            e.canonical_name + "')");
    if (e.technique_id && !is_technique_id(*e.technique_id))
      throw InvalidArgument("malformed technique id '" + *e.technique_id + "'");
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());

  ReferenceBase base;
  base.entries_ = std::move(rows);
  base.build_index();
  return base;
}

ReferenceBase ReferenceBase::merge(const ReferenceBase& a, const ReferenceBase& b) {
  std::vector<RefEntry> rows = a.entries_;
  rows.insert(rows.end(), b.entries_.begin(), b.entries_.end());
  return from_entries(std::move(rows));
}

void ReferenceBase::build_index() {
  std::map<std::string, EntityCategory> category_of;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const RefEntry& e = entries_[i];
    auto [it, inserted] = category_of.emplace(e.canonical_name, e.category);
    if (!inserted && it->second != e.category)
      throw InvalidArgument("canonical name '" + e.canonical_name + "' appears under both " +
                            std::string(to_string(it->second)) + " and " +
                            std::string(to_string(e.category)));
    if (e.technique_id) {
      auto [tn, fresh] = technique_names_.emplace(*e.technique_id, e.canonical_name);
      if (!fresh && tn->second != e.canonical_name)
        throw InvalidArgument("technique " + *e.technique_id + " has two names: '" + tn->second +
                              "' and '" + e.canonical_name + "'");
    }
    index_[e.alias].push_back(i);
  }

  // Technique names and ids must be one-to-one.
  std::map<std::string, std::string> id_of_name;
  for (const auto& [id, name] : technique_names_) {
    auto [it, fresh] = id_of_name.emplace(name, id);
    if (!fresh)
      throw InvalidArgument("technique name '" + name + "' maps to " + it->second + " and " + id);
  }

  std::map<std::pair<std::string, EntityCategory>, std::set<std::string>> by_alias;
  for (const RefEntry& e : entries_) by_alias[{e.alias, e.category}].insert(e.canonical_name);
  for (auto& [key, canonicals] : by_alias) {
    if (canonicals.size() < 2) continue;
    ambiguities_.push_back(
        {key.first, key.second, std::vector<std::string>(canonicals.begin(), canonicals.end())});
  }
}

std::vector<const RefEntry*> ReferenceBase::lookup(std::string_view normalized_alias) const {
  std::vector<const RefEntry*> out;
  auto it = index_.find(std::string(normalized_alias));
  if (it == index_.end()) return out;
  out.reserve(it->second.size());
  for (std::size_t i : it->second) out.push_back(&entries_[i]);
  return out;
}

std::vector<Resolution> ReferenceBase::resolve(std::string_view surface) const {
  std::vector<Resolution> out;
  for (const RefEntry* e : lookup(normalize_alias(surface)))
    out.push_back({e->canonical_name, e->category});
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<std::string> ReferenceBase::technique_name(std::string_view technique_id) const {
  auto it = technique_names_.find(std::string(technique_id));
  if (it == technique_names_.end()) return std::nullopt;
  return it->second;
}

std::vector<Resolution> resolve_alias(const ReferenceBase& base, std::string_view surface) {
  return base.resolve(surface);
}

namespace {

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && ws(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && ws(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

bool blank(const csv::Record& r) {
  return std::all_of(r.fields.begin(), r.fields.end(),
                     [](const std::string& f) { return trim(f).empty(); });
}

}  // namespace

ReferenceBase load_refbase(const std::filesystem::path& path, EntityCategory category) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("cannot open reference base " + path.string());
  const std::string source = path.string();

  csv::Reader reader(in, source);
  csv::Record rec;
  std::vector<RefEntry> rows;

  if (!reader.next(rec)) return ReferenceBase{};
  // Header is mandatory; a leading UTF-8 BOM is tolerated.
  if (!rec.fields.empty() && rec.fields[0].rfind("\xEF\xBB\xBF", 0) == 0)
    rec.fields[0].erase(0, 3);
  const bool header_ok = rec.fields.size() >= 3 && trim(rec.fields[0]) == "canonical_name" &&
                         trim(rec.fields[1]) == "alias" && trim(rec.fields[2]) == "category" &&
                         (rec.fields.size() == 3 ||
                          (rec.fields.size() == 4 && trim(rec.fields[3]) == "technique_id"));
  if (!header_ok)
    throw ParseError(source, rec.line,
                     "expected header canonical_name,alias,category,technique_id");

  std::set<std::string> technique_ids;
  while (reader.next(rec)) {
    if (blank(rec)) continue;
    if (rec.fields.size() < 3 || rec.fields.size() > 4)
      throw ParseError(source, rec.line,
                       "expected 3 or 4 fields, got " + std::to_string(rec.fields.size()));
    RefEntry e;
    e.canonical_name = trim(rec.fields[0]);
    e.alias = rec.fields[1];
    auto cat = parse_category(trim(rec.fields[2]));
    if (!cat) throw ParseError(source, rec.line, "unknown category '" + rec.fields[2] + "'");
    if (*cat != category)
      throw ParseError(source, rec.line,
                       "category " + std::string(to_string(*cat)) + " in a " +
                           std::string(to_string(category)) + " base");
    e.category = *cat;
    if (rec.fields.size() == 4 && !trim(rec.fields[3]).empty())
      e.technique_id = trim(rec.fields[3]);
    if (e.canonical_name.empty()) throw ParseError(source, rec.line, "empty canonical_name");
    if (normalize_alias(e.alias).empty()) throw ParseError(source, rec.line, "empty alias");
    if ((e.category == EntityCategory::Technique) != e.technique_id.has_value())
      throw ParseError(source, rec.line,
                       "technique_id is required for Technique rows and forbidden otherwise");
    if (e.technique_id && !is_technique_id(*e.technique_id))
      throw ParseError(source, rec.line, "malformed technique_id '" + *e.technique_id + "'");
    if (e.technique_id) technique_ids.insert(*e.technique_id);
    rows.push_back(std::move(e));
  }

  if (category == EntityCategory::Technique) {
    std::map<std::string, std::string> name_of;
    for (const RefEntry& e : rows) name_of.emplace(*e.technique_id, e.canonical_name);
    for (const auto& [id, name] : name_of)
      rows.push_back({name, id, EntityCategory::Technique, id});
  }

  try {
    return ReferenceBase::from_entries(std::move(rows));
  } catch (const InvalidArgument& e) {
    throw ParseError(source, 0, e.what());
  }
}

std::string_view refbase_file_name(EntityCategory category) noexcept {
  switch (category) {
    case EntityCategory::CVE: return "cves.csv";
    case EntityCategory::Location: return "locations.csv";
    case EntityCategory::Malware: return "malware.csv";
    case EntityCategory::Technique: return "techniques.csv";
    case EntityCategory::ThreatActor: return "actors.csv";
  }
  return "";
}

ReferenceBase load_refbase_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw NotFound("reference directory " + dir.string() + " does not exist");
  ReferenceBase merged;
  for (EntityCategory c : kAllCategories) {
    const auto file = dir / refbase_file_name(c);
    if (!std::filesystem::exists(file)) continue;
    merged = ReferenceBase::merge(merged, load_refbase(file, c));
  }
  return merged;
}

}  // namespace ttpsig
