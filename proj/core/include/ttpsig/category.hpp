#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace ttpsig {

/// Entity classes recognised in threat reports.
enum class EntityCategory {
  CVE,
  Location,
  Malware,
  Technique,
  ThreatActor,
};

inline constexpr std::array<EntityCategory, 5> kAllCategories = {
    EntityCategory::CVE, EntityCategory::Location, EntityCategory::Malware,
    EntityCategory::Technique, EntityCategory::ThreatActor};

std::string_view to_string(EntityCategory c) noexcept;

/// Inverse of to_string. Also accepts "Threat Actor" and lowercase forms.
std::optional<EntityCategory> parse_category(std::string_view s) noexcept;

/// Overlap tie-break rank; lower wins.
/// ThreatActor > Malware > Technique > CVE > Location.
int category_priority(EntityCategory c) noexcept;

}  // namespace ttpsig
