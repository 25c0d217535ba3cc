#include "ttpsig/category.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace ttpsig {

std::string_view to_string(EntityCategory c) noexcept {
  switch (c) {
    case EntityCategory::CVE: return "CVE";
    case EntityCategory::Location: return "Location";
    case EntityCategory::Malware: return "Malware";
    case EntityCategory::Technique: return "Technique";
    case EntityCategory::ThreatActor: return "ThreatActor";
  }
  return "?";
}

std::optional<EntityCategory> parse_category(std::string_view s) noexcept {
  std::string key;
  key.reserve(s.size());
  for (char ch : s) {
    if (ch == ' ' || ch == '_' || ch == '-') continue;
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  for (EntityCategory c : kAllCategories) {
    std::string name(to_string(c));
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (name == key) return c;
  }
  return std::nullopt;
}

int category_priority(EntityCategory c) noexcept {
  switch (c) {
    case EntityCategory::ThreatActor: return 0;
    case EntityCategory::Malware: return 1;
    case EntityCategory::Technique: return 2;
    case EntityCategory::CVE: return 3;
    case EntityCategory::Location: return 4;
  }
  return 5;
}

}  // namespace ttpsig
