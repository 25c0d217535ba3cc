#include "ttpsig/extraction.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "ttpsig/csv.hpp"
#include "ttpsig/error.hpp"
#include "ttpsig/normalize.hpp"
#include "ttpsig/parallel.hpp"

namespace ttpsig {

// ---------------------------------------------------------------------------
// EntityDB

EntityDB EntityDB::from_records(std::vector<EntityRecord> records,
                                std::vector<std::string> doc_ids) {
  std::sort(records.begin(), records.end(), [](const EntityRecord& a, const EntityRecord& b) {
    return std::tie(a.doc_id, a.start, a.end) < std::tie(b.doc_id, b.start, b.end);
  });

  EntityDB db;
  for (const EntityRecord& r : records) doc_ids.push_back(r.doc_id);
  std::sort(doc_ids.begin(), doc_ids.end());
  doc_ids.erase(std::unique(doc_ids.begin(), doc_ids.end()), doc_ids.end());

  for (std::size_t i = 0; i < records.size(); ++i) {
    const EntityRecord& r = records[i];
    if (r.start >= r.end)
      throw InvalidArgument("empty span in document '" + r.doc_id + "'");
    if (i > 0 && records[i - 1].doc_id == r.doc_id && records[i - 1].end > r.start)
      throw InvalidArgument("overlapping spans in document '" + r.doc_id + "' at offset " +
                            std::to_string(r.start));
  }

  db.records_ = std::move(records);
  db.doc_ids_ = std::move(doc_ids);
  for (const std::string& id : db.doc_ids_) db.by_doc_.emplace(id, std::pair{0, 0});
  for (std::size_t i = 0; i < db.records_.size();) {
    std::size_t j = i;
    while (j < db.records_.size() && db.records_[j].doc_id == db.records_[i].doc_id) ++j;
    db.by_doc_[db.records_[i].doc_id] = {i, j};
    i = j;
  }
  return db;
}

bool EntityDB::contains(std::string_view doc_id) const {
  return by_doc_.find(std::string(doc_id)) != by_doc_.end();
}

std::span<const EntityRecord> EntityDB::records_for(std::string_view doc_id) const {
  auto it = by_doc_.find(std::string(doc_id));
  if (it == by_doc_.end()) throw NotFound("unknown document '" + std::string(doc_id) + "'");
  const auto [b, e] = it->second;
  return std::span<const EntityRecord>(records_).subspan(b, e - b);
}

// ---------------------------------------------------------------------------
// Extractor

Extractor::Extractor(const ReferenceBase& base) {
  std::map<std::string, std::vector<Candidate>> by_alias;
  for (const RefEntry& e : base.entries()) {
    by_alias[e.alias].push_back(
        {e.category, e.technique_id ? *e.technique_id : e.canonical_name});
  }
  std::vector<std::string> patterns;
  patterns.reserve(by_alias.size());
  for (auto& [alias, cands] : by_alias) {
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      const int pa = category_priority(a.category), pb = category_priority(b.category);
      return pa != pb ? pa < pb : a.canonical < b.canonical;
    });
    patterns.push_back(alias);
    candidates_.push_back(std::move(cands));
  }
  automaton_ = AhoCorasick(patterns);
}

std::vector<EntityRecord> Extractor::extract(const Document& doc) const {
  std::vector<EntityRecord> out;
  if (doc.text.empty() || candidates_.empty()) return out;

  const NormalizedText norm = normalize_text(doc.text);
  const std::string_view view = norm.text;

  struct Hit {
    std::size_t start, end, pattern;
  };
  std::vector<Hit> hits;
  for (const auto& m : automaton_.find_all(view)) {
    if (is_word_char(code_point_before(view, m.begin))) continue;
    if (m.end < view.size() && is_word_char(code_point_at(view, m.end))) continue;
    // Must cover whole folded segments.
    if (m.begin > 0 && norm.source_begin[m.begin - 1] == norm.source_begin[m.begin]) continue;
    if (m.end < view.size() && norm.source_begin[m.end] == norm.source_begin[m.end - 1]) continue;
    hits.push_back({norm.source_begin[m.begin], norm.source_end[m.end - 1], m.pattern});
  }

  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    const std::size_t la = a.end - a.start, lb = b.end - b.start;
    if (la != lb) return la > lb;
    return a.start < b.start;
  });

  std::map<std::size_t, std::size_t> taken;  // start -> end
  for (const Hit& h : hits) {
    auto it = taken.lower_bound(h.start);
    if (it != taken.end() && it->first < h.end) continue;
    if (it != taken.begin() && std::prev(it)->second > h.start) continue;
    taken.emplace(h.start, h.end);

    const Candidate& best = candidates_[h.pattern].front();
    out.push_back({doc.doc_id, best.category, best.canonical,
                   doc.text.substr(h.start, h.end - h.start), h.start, h.end});
  }
  std::sort(out.begin(), out.end(), [](const EntityRecord& a, const EntityRecord& b) {
    return std::tie(a.start, a.end) < std::tie(b.start, b.end);
  });
  return out;
}

std::vector<EntityRecord> extract_entities(const Document& doc, const Extractor& extractor) {
  return extractor.extract(doc);
}

EntityDB build_entity_db(std::span<const Document> corpus, const Extractor& extractor,
                         unsigned threads) {
  std::set<std::string_view> seen;
  std::vector<std::string> ids;
  ids.reserve(corpus.size());
  for (const Document& d : corpus) {
    if (!seen.insert(d.doc_id).second)
      throw InvalidArgument("duplicate doc_id '" + d.doc_id + "'");
    ids.push_back(d.doc_id);
  }

  std::vector<std::vector<EntityRecord>> per_doc(corpus.size());
  parallel_for(corpus.size(), threads,
               [&](std::size_t i) { per_doc[i] = extractor.extract(corpus[i]); });

  std::vector<EntityRecord> all;
  for (auto& recs : per_doc) std::move(recs.begin(), recs.end(), std::back_inserter(all));
  return EntityDB::from_records(std::move(all), std::move(ids));
}

std::vector<std::string> actor_of_document(const EntityDB& db, std::string_view doc_id) {
  std::set<std::string> actors;
  for (const EntityRecord& r : db.records_for(doc_id))
    if (r.category == EntityCategory::ThreatActor) actors.insert(r.canonical);
  return {actors.begin(), actors.end()};
}

// ---------------------------------------------------------------------------
// Corpus and EntityDB files

bool is_iso_date(std::string_view s) noexcept {
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') return false;
  auto num = [&](std::size_t pos, std::size_t len, int& v) {
    auto [p, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, v);
    return ec == std::errc{} && p == s.data() + pos + len;
  };
  int y = 0, m = 0, d = 0;
  if (!num(0, 4, y) || !num(5, 2, m) || !num(8, 2, d)) return false;
  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{static_cast<unsigned>(m)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return false;
  return s.size() == 10 || s[10] == 'T' || s[10] == ' ';
}

std::vector<Document> read_corpus(std::istream& in, const std::string& source_name) {
  std::vector<Document> docs;
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
    if (!j.is_object()) throw ParseError(source_name, lineno, "expected a JSON object");
    auto str_field = [&](const char* key, bool required) -> std::optional<std::string> {
      auto it = j.find(key);
      if (it == j.end() || it->is_null()) {
        if (required) throw ParseError(source_name, lineno, std::string("missing '") + key + "'");
        return std::nullopt;
      }
      if (!it->is_string())
        throw ParseError(source_name, lineno, std::string("'") + key + "' must be a string");
      return it->get<std::string>();
    };
    Document d;
    d.doc_id = *str_field("doc_id", true);
    if (d.doc_id.empty()) throw ParseError(source_name, lineno, "empty doc_id");
    d.source = str_field("source", false).value_or("");
    d.published = str_field("published", false);
    if (d.published && d.published->empty()) d.published.reset();
    if (d.published && !is_iso_date(*d.published))
      throw ParseError(source_name, lineno, "published is not an ISO-8601 date");
    d.text = *str_field("text", true);
    docs.push_back(std::move(d));
  }
  return docs;
}

std::vector<Document> read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("cannot open corpus " + path.string());
  return read_corpus(in, path.string());
}

namespace {
constexpr const char* kEntityHeader[] = {"doc_id",         "category", "canonical",
                                         "matched_phrase", "start",    "end"};
}

void write_entity_db(std::ostream& out, const EntityDB& db) {
  csv::write_row(out, {std::begin(kEntityHeader), std::end(kEntityHeader)});
  for (const EntityRecord& r : db.records()) {
    csv::write_row(out, {r.doc_id, std::string(to_string(r.category)), r.canonical,
                         r.matched_phrase, std::to_string(r.start), std::to_string(r.end)});
  }
}

EntityDB read_entity_db(std::istream& in, const std::string& source_name) {
  csv::Reader reader(in, source_name);
  csv::Record rec;
  std::vector<EntityRecord> records;
  if (!reader.next(rec)) return EntityDB{};
  if (rec.fields != std::vector<std::string>(std::begin(kEntityHeader), std::end(kEntityHeader)))
    throw ParseError(source_name, rec.line,
                     "expected header doc_id,category,canonical,matched_phrase,start,end");

  auto parse_offset = [&](const std::string& s, const csv::Record& r) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
      throw ParseError(source_name, r.line, "invalid offset '" + s + "'");
    return v;
  };

  while (reader.next(rec)) {
    if (rec.fields.size() == 1 && rec.fields[0].empty()) continue;
    if (rec.fields.size() != 6)
      throw ParseError(source_name, rec.line,
                       "expected 6 fields, got " + std::to_string(rec.fields.size()));
    EntityRecord r;
    r.doc_id = rec.fields[0];
    auto cat = parse_category(rec.fields[1]);
    if (!cat) throw ParseError(source_name, rec.line, "unknown category '" + rec.fields[1] + "'");
    r.category = *cat;
    r.canonical = rec.fields[2];
    r.matched_phrase = rec.fields[3];
    r.start = parse_offset(rec.fields[4], rec);
    r.end = parse_offset(rec.fields[5], rec);
    if (r.doc_id.empty() || r.canonical.empty())
      throw ParseError(source_name, rec.line, "empty doc_id or canonical");
    if (r.end <= r.start || r.end - r.start != r.matched_phrase.size())
      throw ParseError(source_name, rec.line, "span does not match matched_phrase length");
    records.push_back(std::move(r));
  }
  try {
    return EntityDB::from_records(std::move(records));
  } catch (const InvalidArgument& e) {
    throw ParseError(source_name, 0, e.what());
  }
}

EntityDB read_entity_db(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("cannot open entity database " + path.string());
  return read_entity_db(in, path.string());
}

}  // namespace ttpsig
