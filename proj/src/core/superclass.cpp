#include "imgobf/core/superclass.hpp"

#include <algorithm>

#include "imgobf/core/error.hpp"

namespace imgobf {

namespace {

// ImageNet-1k ids grouped into the 16 evaluation super-classes. Display names
// are ours; the ids are authoritative.
constexpr const char* kBuiltinTable = R"json(
{
  "version": "1",
  "superclasses": [
    {"name": "Airplane",
     "members": [404]},
    {"name": "Bear",
     "members": [294, 295, 296, 297]},
    {"name": "Bicycle",
     "members": [444, 671]},
    {"name": "Bird",
     "members": [8, 10, 11, 12, 13, 14, 15, 16, 18, 19, 20, 22, 23, 24, 80, 81,
                   82, 83, 87, 88, 89, 90, 91, 92, 93, 94, 95, 96, 98, 99, 100, 127,
                   128, 129, 130, 131, 132, 133, 135, 136, 137, 138, 139, 140, 141, 142, 143, 144,
                   145]},
    {"name": "Boat",
     "members": [472, 554, 625, 814, 914]},
    {"name": "Bottle/Jug",
     "members": [440, 720, 737, 898, 899, 901, 907]},
    {"name": "Car",
     "members": [436, 511, 817]},
    {"name": "Cat/Cougar",
     "members": [281, 282, 283, 284, 285, 286]},
    {"name": "Chair/Throne",
     "members": [423, 559, 765, 857]},
    {"name": "Clock",
     "members": [409, 530, 892]},
    {"name": "Dog",
     "members": [152, 153, 154, 155, 156, 157, 158, 159, 160, 161, 162, 163, 164, 165, 166, 167,
                   168, 169, 170, 171, 172, 173, 174, 175, 176, 177, 178, 179, 180, 181, 182, 183,
                   184, 185, 186, 187, 188, 189, 190, 191, 193, 194, 195, 196, 197, 198, 199, 200,
                   201, 202, 203, 205, 206, 207, 208, 209, 210, 211, 212, 213, 214, 215, 216, 217,
                   218, 219, 220, 221, 222, 223, 224, 225, 226, 228, 229, 230, 231, 232, 233, 234,
                   235, 236, 237, 238, 239, 240, 241, 243, 244, 245, 246, 247, 248, 249, 250, 252,
                   253, 254, 255, 256, 257, 259, 261, 262, 263, 265, 266, 267, 268]},
    {"name": "Elephant",
     "members": [385, 386]},
    {"name": "Keyboard/Typewriter",
     "members": [508, 878]},
    {"name": "Cleaver",
     "members": [499]},
    {"name": "Rotisserie",
     "members": [766]},
    {"name": "Van/Truck",
     "members": [555, 569, 656, 675, 717, 734, 864, 867]}
  ]
}
)json";

}  // namespace

const SuperClassTable& SuperClassTable::builtin() {
  static const SuperClassTable table = from_json(nlohmann::json::parse(kBuiltinTable));
  return table;
}

SuperClassTable SuperClassTable::from_json(const nlohmann::json& doc) {
  SuperClassTable table;
  try {
    table.version_ = doc.at("version").get<std::string>();
    const auto& list = doc.at("superclasses");
    if (!list.is_array() || list.size() != kNumSuperClasses) {
      fail(ErrorCode::Format, "super-class table must list exactly 16 super-classes");
    }
    table.lookup_.fill(-1);
    std::size_t total = 0;
    for (std::size_t s = 0; s < list.size(); ++s) {
      SuperClass entry;
      entry.name = list[s].at("name").get<std::string>();
      entry.members = list[s].at("members").get<std::vector<int>>();
      std::sort(entry.members.begin(), entry.members.end());
      if (entry.members.empty()) fail(ErrorCode::Format, "super-class " + entry.name + " has no members");
      for (int id : entry.members) {
        if (id < 0 || id >= kNumImageNetClasses) {
          fail(ErrorCode::Format, "class id " + std::to_string(id) + " outside 0..999");
        }
        if (table.lookup_[static_cast<std::size_t>(id)] != -1) {
          fail(ErrorCode::Format, "class id " + std::to_string(id) + " listed twice");
        }
        table.lookup_[static_cast<std::size_t>(id)] = static_cast<std::int8_t>(s);
      }
      total += entry.members.size();
      table.entries_.push_back(std::move(entry));
    }
    if (total != kNumMemberClasses) {
      fail(ErrorCode::Format, "super-classes must cover 207 classes, found " + std::to_string(total));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Format, std::string("malformed super-class table: ") + e.what());
  }
  return table;
}

std::optional<int> SuperClassTable::superclass_of(int class_id) const noexcept {
  if (class_id < 0 || class_id >= kNumImageNetClasses) return std::nullopt;
  const int s = lookup_[static_cast<std::size_t>(class_id)];
  if (s < 0) return std::nullopt;
  return s;
}

nlohmann::json SuperClassTable::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& entry : entries_) {
    list.push_back({{"name", entry.name}, {"members", entry.members}});
  }
  return {{"version", version_}, {"superclasses", list}};
}

std::string builtin_superclass_json() { return SuperClassTable::builtin().to_json().dump(2); }

}  // namespace imgobf
