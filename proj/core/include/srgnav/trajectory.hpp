#pragma once

#include <span>
#include <string>
#include <vector>

#include "srgnav/category_space.hpp"
#include "srgnav/pathfind.hpp"
#include "srgnav/scene.hpp"

namespace srgnav {

/// Region-category sequence of the geodesically shortest path from a start
/// pose to the nearest instance of the target object class.
struct Trajectory {
  std::string scene_id;
  int start_region = 0;             // category of the start cell's region
  int target_object = 0;            // object category
  std::vector<int> region_sequence; // categories, consecutive dups collapsed
  double length_m = 0.0;            // geometric path length
};

/// Chooses the target instance with minimum geodesic distance (ties by
/// object id). Throws DomainError when no instance of the category exists,
/// NoPathError when none is reachable.
Trajectory generate_valid_trajectory(const Scene& scene, const Pose& start,
                                     int target_category);

/// One similarity constraint for embedding training. Indices live in the
/// CategorySpace node ordering (regions first, then objects).
struct TrainingPair {
  int anchor = 0;
  int other = 0;
  bool positive = true;

  bool operator==(const TrainingPair&) const = default;
};

/// Pairs pulled together: for each interior index x of the sequence, (i_x
/// with i_n) and (i_x with every earlier node), plus (i_n with the target
/// object). Duplicates are kept; they act as frequency weights.
std::vector<TrainingPair> make_positive_pairs(const Trajectory& traj,
                                              const CategorySpace& space);

/// Pairs pushed apart: substituting any off-trajectory region category for
/// an interior node yields an invalid variant of the path, and the
/// substituted region is paired with the target object as a negative. One
/// pair per (interior index, substituted region), duplicates kept.
std::vector<TrainingPair> make_negative_pairs(const Trajectory& traj,
                                              const CategorySpace& space);

/// All positive + negative pairs of a trajectory set, in corpus order.
std::vector<TrainingPair> expand_training_pairs(std::span<const Trajectory> corpus,
                                                const CategorySpace& space);

/// Corpus generation: one deterministic start pose per region instance
/// (its centroid cell) crossed with every object category present in the
/// scene.
std::vector<Trajectory> generate_corpus(const Scene& scene);

}  // namespace srgnav
