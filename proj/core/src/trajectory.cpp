#include "srgnav/trajectory.hpp"

#include <algorithm>
#include <set>

#include "srgnav/errors.hpp"

namespace srgnav {

Trajectory generate_valid_trajectory(const Scene& scene, const Pose& start,
                                     int target_category) {
  if (!scene.in_bounds(start.cell) || scene.blocked(start.cell)) {
    throw DomainError("trajectory start must be a free cell");
  }
  bool any_instance = false;
  const ObjectInstance* best = nullptr;
  int best_dist = 0;
  const auto dist = distance_field(scene, start.cell);
  for (const auto& obj : scene.objects) {
    if (obj.category != target_category) continue;
    any_instance = true;
    const int d = dist[scene.index(obj.cell)];
    if (d < 0) continue;
    if (best == nullptr || d < best_dist || (d == best_dist && obj.id < best->id)) {
      best = &obj;
      best_dist = d;
    }
  }
  if (!any_instance) {
    throw DomainError("scene '" + scene.id + "' has no instance of target category " +
                      std::to_string(target_category));
  }
  if (best == nullptr) {
    throw NoPathError("no target instance reachable from the start cell");
  }

  const Path path = geodesic_path(scene, start.cell, best->cell);
  Trajectory traj;
  traj.scene_id = scene.id;
  traj.start_region = scene.region_category_at(start.cell);
  traj.target_object = target_category;
  traj.region_sequence = region_sequence_of_path(scene, path.cells);
  traj.length_m = path.length_m;
  return traj;
}

std::vector<TrainingPair> make_positive_pairs(const Trajectory& traj,
                                              const CategorySpace& space) {
  const auto& seq = traj.region_sequence;
  if (seq.empty()) throw DomainError("trajectory has an empty region sequence");
  std::vector<TrainingPair> pairs;
  const int n = static_cast<int>(seq.size());
  const int last = static_cast<int>(space.region_node(seq[n - 1]));
  // Interior indices pull toward the terminal region and everything already
  // traversed. Repeated categories (a wiggly path revisiting a category)
  // would pair a node with itself; those are dropped.
  for (int x = 1; x <= n - 2; ++x) {
    const int anchor = static_cast<int>(space.region_node(seq[x]));
    if (anchor != last) pairs.push_back({anchor, last, true});
    for (int j = 0; j < x; ++j) {
      const int other = static_cast<int>(space.region_node(seq[j]));
      if (anchor != other) pairs.push_back({anchor, other, true});
    }
  }
  pairs.push_back({last, static_cast<int>(space.object_node(traj.target_object)), true});
  return pairs;
}

std::vector<TrainingPair> make_negative_pairs(const Trajectory& traj,
                                              const CategorySpace& space) {
  const auto& seq = traj.region_sequence;
  if (seq.empty()) throw DomainError("trajectory has an empty region sequence");
  const std::set<int> valid(seq.begin(), seq.end());
  std::vector<int> off_route;
  for (int r = 0; r < static_cast<int>(space.regions.size()); ++r) {
    if (!valid.count(r)) off_route.push_back(r);
  }
  std::vector<TrainingPair> pairs;
  const int target_node = static_cast<int>(space.object_node(traj.target_object));
  const int n = static_cast<int>(seq.size());
  // One substitution per (interior index, off-route region): the invalid
  // variant of the path pushes the substituted region away from the target.
  for (int x = 1; x <= n - 2; ++x) {
    for (int r : off_route) {
      pairs.push_back({static_cast<int>(space.region_node(r)), target_node, false});
    }
  }
  return pairs;
}

std::vector<TrainingPair> expand_training_pairs(std::span<const Trajectory> corpus,
                                                const CategorySpace& space) {
  std::vector<TrainingPair> pairs;
  for (const auto& traj : corpus) {
    auto pos = make_positive_pairs(traj, space);
    auto neg = make_negative_pairs(traj, space);
    pairs.insert(pairs.end(), pos.begin(), pos.end());
    pairs.insert(pairs.end(), neg.begin(), neg.end());
  }
  return pairs;
}

std::vector<Trajectory> generate_corpus(const Scene& scene) {
  std::set<int> present;
  for (const auto& obj : scene.objects) present.insert(obj.category);
  std::vector<Trajectory> corpus;
  for (const auto& inst : scene.regions) {
    const Pose start{scene.instance_centroid_cell(inst.id), 0};
    for (int target : present) {
      corpus.push_back(generate_valid_trajectory(scene, start, target));
    }
  }
  return corpus;
}

}  // namespace srgnav
