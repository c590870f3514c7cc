#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace imgobf {

inline constexpr int kNumSuperClasses = 16;
inline constexpr int kNumImageNetClasses = 1000;
inline constexpr int kNumMemberClasses = 207;

struct SuperClass {
  std::string name;
  std::vector<int> members;  // sorted ImageNet class ids
};

/// The 16 coarse categories and their 207 ImageNet member classes.
class SuperClassTable {
 public:
  /// Table compiled into the library.
  static const SuperClassTable& builtin();

  /// Parses {"version": ..., "superclasses": [{"name":..,"members":[..]}]}
  /// and enforces 16 entries, disjoint members in 0..999, 207 in total.
  static SuperClassTable from_json(const nlohmann::json& doc);

  const std::string& version() const noexcept { return version_; }
  std::span<const SuperClass> entries() const noexcept { return entries_; }
  int member_count(int superclass) const { return static_cast<int>(entries_.at(superclass).members.size()); }
  std::optional<int> superclass_of(int class_id) const noexcept;

  nlohmann::json to_json() const;

 private:
  std::string version_;
  std::vector<SuperClass> entries_;
  std::array<std::int8_t, kNumImageNetClasses> lookup_{};
};

/// Canonical JSON text of the builtin table.
std::string builtin_superclass_json();

}  // namespace imgobf
