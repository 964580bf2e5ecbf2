#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "srgnav/gcn.hpp"
#include "srgnav/region_bayes.hpp"
#include "srgnav/rng.hpp"
#include "srgnav/scene.hpp"
#include "srgnav/srg.hpp"

namespace srgnav {

struct EpisodeConfig {
  int max_steps = 350;
  double success_radius_m = 1.0;
  double sense_radius_m = 10.0;
  int k_nearest = 4;  // candidate objects per posterior
  double step_translation_m = 0.3;
  int step_rotation_deg = 30;
  // Experimental: blend the similarity to the previously traversed region
  // into the ranking instead of scoring against the target alone.
  bool history_walk_score = false;
};

enum class PolicyKind { SrgGcn, Random, GreedyUnexplored };

/// A policy plus the assets it needs. The srg_gcn policy requires both the
/// SRG (region inference) and the embedding table (region ranking); the
/// baselines require none.
struct Policy {
  PolicyKind kind = PolicyKind::Random;
  const Srg* srg = nullptr;
  const EmbeddingTable* table = nullptr;

  void validate() const;  // throws DependencyError when assets are missing
};

PolicyKind policy_kind_from_name(const std::string& name);  // srg_gcn|random|greedy
std::string policy_name(PolicyKind kind);

enum class Action { Forward, Backward, RotateLeft, RotateRight };

struct SimilarityEntry {
  int region = 0;      // region category
  double similarity = 0.0;
};

/// One region-selection (or fallback) event, kept for the decision trace.
struct Decision {
  int step = 0;  // budget consumed when the decision was taken
  Pose pose;
  std::string mode;                            // "region" | "target" | "explore"
  VisibleRegionMap estimates;                  // per-object candidates + scores
  std::vector<SimilarityEntry> similarities;   // per candidate region label
  int chosen_region = -1;                      // -1 for non-region modes
  Cell goal;
};

struct StepEvent {
  Action action;
  Pose pose_after;
  bool moved = false;  // false for rotations and blocked translations
};

struct EpisodeRecord {
  std::string scene_id;
  std::string policy;
  int target = 0;  // object category
  Pose start;
  bool success = false;
  int steps = 0;
  double path_length_m = 0.0;        // p_i: translation distance only
  double shortest_length_m = 0.0;    // l_i: geodesic to nearest instance at start
  double terminal_geodesic_m = 0.0;  // d_i for SoftSPL
  double terminal_euclidean_m = 0.0; // distance behind Success and DTS
  bool planner_failure = false;
  std::vector<Decision> decisions;
  std::vector<StepEvent> trace;
};

struct RegionChoice {
  int region = 0;            // chosen region category
  int anchor_object_id = 0;  // nearest visible object carrying that label
  Cell anchor_cell;
  std::vector<SimilarityEntry> similarities;
};

/// Cosine-similarity argmax over the distinct region labels in the visible
/// map; ties resolve toward the lower region index. Returns nullopt on an
/// empty map, signalling the caller to fall back to exploration. When
/// `history_region` is given the score is the mean of the similarity to
/// the target and to that region (the history walk score).
std::optional<RegionChoice> select_next_region(const EmbeddingTable& table,
                                               const VisibleRegionMap& visible,
                                               int target_category,
                                               std::optional<int> history_region = {});

/// Uniform draw over the four actions.
Action random_policy_step(Rng& rng);

/// Runs one episode to success or budget exhaustion. All sensing, region
/// inference and movement follow the episode config; every rotation and
/// translation debits the step budget, and only translations add distance.
EpisodeRecord run_episode(const Scene& scene, const Policy& policy, int target_category,
                          const Pose& start, const EpisodeConfig& config,
                          std::uint64_t episode_seed);

}  // namespace srgnav
