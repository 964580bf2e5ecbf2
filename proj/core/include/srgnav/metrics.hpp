#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "srgnav/navigator.hpp"
#include "srgnav/scene.hpp"

namespace srgnav {

/// Success weighted by path length: mean of S_i * l_i / max(p_i, l_i).
/// Throws DomainError on an empty set or any l_i <= 0.
double spl(std::span<const EpisodeRecord> records);

/// SPL with the binary success replaced by terminal progress
/// 1 - d_i / max(l_i, d_i).
double soft_spl(std::span<const EpisodeRecord> records);

/// Distance to success: max(terminal L2 distance - success radius, 0).
double dts(const EpisodeRecord& record, double success_radius_m = 1.0);

double mean_dts(std::span<const EpisodeRecord> records, double success_radius_m = 1.0);

/// Fraction of successful episodes. Throws DomainError on an empty set.
double success_rate(std::span<const EpisodeRecord> records);

/// One benchmark episode: fully determined by (scene, start, target, seed),
/// so different policies can be evaluated on identical specifications.
struct EpisodeSpec {
  std::size_t scene_index = 0;
  Pose start;
  int target = 0;
  std::uint64_t seed = 0;
};

/// Deterministic episode specifications: per scene, `episodes_per_scene`
/// draws of (start pose, target category present in the scene) with a
/// strictly positive shortest-path length.
std::vector<EpisodeSpec> make_episode_specs(std::span<const Scene> scenes,
                                            int episodes_per_scene, std::uint64_t seed);

/// Hash of the full spec list; equal across policies iff they were run on
/// identical episode specifications.
std::string episode_spec_hash(std::span<const EpisodeSpec> specs,
                              std::span<const Scene> scenes);

struct SceneMetricsRow {
  std::string scene_id;
  std::size_t episodes = 0;
  double success = 0.0;
  double spl = 0.0;
  double soft_spl = 0.0;
  double dts_mean_m = 0.0;
};

struct MetricsReport {
  std::string policy;
  std::vector<SceneMetricsRow> per_scene;
  SceneMetricsRow aggregate;  // scene_id "ALL"
  std::string spec_hash;
  EpisodeConfig config;
  std::uint64_t seed = 0;
};

struct PolicyRun {
  std::string name;
  Policy policy;
};

struct CompareResult {
  std::vector<MetricsReport> reports;                 // one per policy
  std::vector<std::vector<EpisodeRecord>> records;    // parallel to reports
  std::vector<EpisodeSpec> specs;
};

/// Runs every policy on the identical spec list and aggregates per scene.
/// Policy assets are validated before any episode runs. Episodes may be
/// executed on `workers` threads; results are identical regardless.
CompareResult compare_policies(std::span<const Scene> scenes,
                               std::span<const PolicyRun> policies,
                               int episodes_per_scene, const EpisodeConfig& config,
                               std::uint64_t seed, int workers = 1);

/// Fixed-width text table mirroring per-scene rows plus the aggregate.
std::string format_report_table(std::span<const MetricsReport> reports);

}  // namespace srgnav
