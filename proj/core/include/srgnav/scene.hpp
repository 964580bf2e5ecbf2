#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "srgnav/category_space.hpp"

namespace srgnav {

struct Cell {
  int row = 0;
  int col = 0;

  bool operator==(const Cell&) const = default;
  auto operator<=>(const Cell&) const = default;
};

/// Agent pose: grid cell plus one of 12 discrete headings (30 deg steps).
/// Headings 0/3/6/9 are the cardinals east/north/west/south; translation is
/// only possible while facing a cardinal.
struct Pose {
  Cell cell;
  int heading = 0;  // 0..11, counter-clockwise from +col
};

constexpr int kHeadingCount = 12;
constexpr int kHeadingEast = 0;
constexpr int kHeadingNorth = 3;
constexpr int kHeadingWest = 6;
constexpr int kHeadingSouth = 9;

struct RegionInstance {
  int id = 0;
  int category = 0;              // region category index
  std::vector<Cell> cells;       // 4-connected, sorted (row, col)
  std::vector<Cell> doorways;    // boundary cells shared with adjacent instances
};

struct ObjectInstance {
  int id = 0;
  int category = 0;  // object category index
  Cell cell;
};

/// A generated indoor scene on an occupancy grid.
///
/// grid holds -1 for blocked cells and the owning region-instance id
/// otherwise. Instances tile the free space exactly; doorway cells are free
/// cells owned by one instance but listed in the doorway sets of every
/// instance they touch, and doorway sharing defines region adjacency.
struct Scene {
  std::string id;
  int rows = 0;
  int cols = 0;
  double cell_size = 0.3;  // meters per cell
  std::vector<std::int16_t> grid;
  std::vector<RegionInstance> regions;
  std::vector<ObjectInstance> objects;

  bool in_bounds(Cell c) const {
    return c.row >= 0 && c.row < rows && c.col >= 0 && c.col < cols;
  }
  bool blocked(Cell c) const { return grid[index(c)] < 0; }
  int instance_at(Cell c) const { return grid[index(c)]; }
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(cols) + c.col;
  }

  /// Region category at a free cell.
  int region_category_at(Cell c) const { return regions[instance_at(c)].category; }

  /// Euclidean center-to-center distance in meters.
  double euclidean_m(Cell a, Cell b) const;

  /// Instance ids adjacent to `instance` (sharing a doorway cell).
  std::vector<int> adjacent_instances(int instance) const;

  /// Cell of the instance closest to its cell centroid (ties by row, col).
  Cell instance_centroid_cell(int instance) const;

  /// Checks all structural invariants; throws DomainError on violation.
  void validate(const CategorySpace& space) const;
};

}  // namespace srgnav
