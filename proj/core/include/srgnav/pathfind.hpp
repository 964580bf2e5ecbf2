#pragma once

#include <optional>
#include <span>
#include <vector>

#include "srgnav/scene.hpp"

namespace srgnav {

struct Path {
  std::vector<Cell> cells;  // from start to goal, inclusive
  double length_m = 0.0;    // (cells - 1) * cell_size
};

/// Shortest 4-connected path between free cells (breadth-first, neighbors
/// expanded in (row, col) order so ties resolve reproducibly).
/// Throws NoPathError when the goal is unreachable, DomainError on blocked
/// endpoints.
Path geodesic_path(const Scene& scene, Cell from, Cell to);

std::optional<Path> try_geodesic_path(const Scene& scene, Cell from, Cell to);

/// BFS distance (in cells) from `from` to every cell; -1 marks unreachable
/// or blocked cells.
std::vector<int> distance_field(const Scene& scene, Cell from);

/// Geodesic length in meters, or nullopt when unreachable.
std::optional<double> geodesic_distance_m(const Scene& scene, Cell from, Cell to);

/// Grid line of sight between cell centers. The ray is traced with an exact
/// voxel traversal; when it passes exactly through a lattice corner both
/// bracketing cells must be free, so sight never leaks diagonally through
/// wall corners.
bool line_of_sight(const Scene& scene, Cell a, Cell b);

/// Objects within radius_m (Euclidean, center-to-center) whose line of
/// sight to the pose is unobstructed; sorted by distance, ties by id.
std::vector<ObjectInstance> visible_objects(const Scene& scene, const Pose& pose,
                                            double radius_m);

/// Region-category sequence along a path, consecutive duplicates collapsed.
std::vector<int> region_sequence_of_path(const Scene& scene, std::span<const Cell> path);

}  // namespace srgnav
