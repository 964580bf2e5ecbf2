#pragma once

#include <cstdint>
#include <vector>

#include "srgnav/category_space.hpp"
#include "srgnav/scene.hpp"

namespace srgnav {

/// Knobs for the procedural floor-plan generator.
///
/// placement_prior[o][r] is the probability that a room of region category
/// r contains an object of category o; these are the ground-truth statistics
/// the learned co-occurrence weights are later checked against.
struct SceneGenConfig {
  CategorySpace space;
  int grid_rows = 48;
  int grid_cols = 48;
  double cell_size = 0.3;
  int num_regions = 8;
  std::vector<double> region_prior;                 // per region category, >= 0
  std::vector<std::vector<double>> placement_prior; // [object][region] in [0,1]
  double extra_door_prob = 0.35;  // doors beyond the connectivity spanning tree
  int doorway_width = 2;          // contiguous wall cells opened per door
  int min_room_span = 4;          // minimum interior width/height of a room

  /// Uniform region prior and a given placement table.
  static SceneGenConfig basic(CategorySpace space,
                              std::vector<std::vector<double>> placement);

  /// Throws DomainError on invalid priors, dimensions, or an object
  /// category that no region can ever contain.
  void validate() const;
};

/// Generates a scene satisfying all Scene invariants. Deterministic for a
/// fixed (config, seed); throws GenerationError when the constraints cannot
/// be met within a bounded number of internal retries.
Scene generate_scene(const SceneGenConfig& config, std::uint64_t seed);

}  // namespace srgnav
