#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace srgnav {

/// Fixed, ordered vocabulary of region and object categories.
///
/// The ordering defines node indices everywhere downstream: region category
/// r maps to node r, object category o maps to node |regions| + o. The
/// hash() of the two name lists is embedded in every persisted artifact so
/// that files produced under different vocabularies cannot be mixed.
struct CategorySpace {
  std::vector<std::string> regions;
  std::vector<std::string> objects;

  std::size_t node_count() const { return regions.size() + objects.size(); }

  std::size_t region_node(std::size_t region_category) const { return region_category; }
  std::size_t object_node(std::size_t object_category) const {
    return regions.size() + object_category;
  }

  /// Index of a named category, or -1 when absent.
  int region_index(std::string_view name) const;
  int object_index(std::string_view name) const;

  const std::string& node_name(std::size_t node) const;
  bool node_is_region(std::size_t node) const { return node < regions.size(); }

  /// FNV-1a over both ordered name lists, as a fixed-width hex string.
  std::string hash() const;

  /// Throws DomainError if names are empty or not unique across both lists.
  void validate() const;

  bool operator==(const CategorySpace&) const = default;

  /// 28 region and 19 object categories used when a config names none.
  static CategorySpace default_space();
};

}  // namespace srgnav
