#include "srgnav/category_space.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_set>

#include "srgnav/errors.hpp"

namespace srgnav {

int CategorySpace::region_index(std::string_view name) const {
  auto it = std::find(regions.begin(), regions.end(), name);
  return it == regions.end() ? -1 : static_cast<int>(it - regions.begin());
}

int CategorySpace::object_index(std::string_view name) const {
  auto it = std::find(objects.begin(), objects.end(), name);
  return it == objects.end() ? -1 : static_cast<int>(it - objects.begin());
}

const std::string& CategorySpace::node_name(std::size_t node) const {
  if (node < regions.size()) return regions[node];
  return objects[node - regions.size()];
}

std::string CategorySpace::hash() const {
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a 64
  auto feed = [&h](std::string_view text) {
    for (unsigned char c : text) {
      h ^= c;
      h *= 0x100000001B3ULL;
    }
  };
  feed("regions:");
  for (const auto& r : regions) {
    feed(r);
    feed(";");
  }
  feed("objects:");
  for (const auto& o : objects) {
    feed(o);
    feed(";");
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

void CategorySpace::validate() const {
  if (regions.empty() || objects.empty()) {
    throw DomainError("category space needs at least one region and one object category");
  }
  std::unordered_set<std::string> seen;
  for (const auto& name : regions) {
    if (name.empty() || !seen.insert(name).second) {
      throw DomainError("duplicate or empty region category name: '" + name + "'");
    }
  }
  for (const auto& name : objects) {
    if (name.empty() || !seen.insert(name).second) {
      throw DomainError("duplicate or empty object category name: '" + name + "'");
    }
  }
}

CategorySpace CategorySpace::default_space() {
  CategorySpace space;
  space.regions = {
      "bathroom",    "bedroom",     "closet",     "dining room", "entryway",
      "family room", "garage",      "hallway",    "library",     "laundry room",
      "kitchen",     "living room", "meeting room", "lounge",    "office",
      "porch",       "rec room",    "stairs",     "toilet room", "utility room",
      "tv room",     "gym",         "outdoor",    "balcony",     "bar",
      "classroom",   "dining booth", "spa",
  };
  space.objects = {
      "chair",   "table",   "picture", "cabinet", "cushion",
      "sofa",    "bed",     "chest of drawers", "plant", "sink",
      "toilet",  "stool",   "towel",   "tv monitor", "shower",
      "bathtub", "counter", "fireplace", "gym equipment",
  };
  return space;
}

}  // namespace srgnav
