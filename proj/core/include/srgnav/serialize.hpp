#pragma once

#include <span>
#include <string>
#include <vector>

#include "srgnav/category_space.hpp"
#include "srgnav/gcn.hpp"
#include "srgnav/metrics.hpp"
#include "srgnav/navigator.hpp"
#include "srgnav/scene.hpp"
#include "srgnav/scene_gen.hpp"
#include "srgnav/srg.hpp"
#include "srgnav/train.hpp"
#include "srgnav/trajectory.hpp"

namespace srgnav {

/// All persisted documents are versioned JSON with deterministic key order
/// and shortest-round-trip float printing, so write -> read -> write is
/// byte-identical and fixed seeds produce byte-identical files.
inline constexpr int kFormatVersion = 1;

std::string scene_to_json(const Scene& scene, const CategorySpace& space);
Scene scene_from_json(const std::string& text, const CategorySpace& space);

std::string srg_to_json(const Srg& srg);
Srg srg_from_json(const std::string& text);

std::string corpus_to_jsonl(std::span<const Trajectory> corpus, const CategorySpace& space);
std::vector<Trajectory> corpus_from_jsonl(const std::string& text,
                                          const CategorySpace& space);

/// Checkpoint: dims, seed, train config echo, category-space hash and the
/// three weight matrices.
std::string checkpoint_to_json(const GcnModel& model, const TrainConfig& config,
                               const CategorySpace& space);
struct Checkpoint {
  GcnModel model;
  TrainConfig config;
  std::string space_hash;
};
Checkpoint checkpoint_from_json(const std::string& text);

std::string loss_history_to_json(std::span<const double> history);

/// Node name followed by E comma-separated floats, one row per node.
std::string embeddings_to_csv(const EmbeddingTable& table);

std::string episodes_to_jsonl(std::span<const EpisodeRecord> records,
                              const CategorySpace& space);
std::vector<EpisodeRecord> episodes_from_jsonl(const std::string& text,
                                               const CategorySpace& space);

std::string report_to_json(const MetricsReport& report);
MetricsReport report_from_json(const std::string& text);

/// Scene-generation config document (the file passed to `srgnav generate`).
std::string scene_gen_config_to_json(const SceneGenConfig& config);
SceneGenConfig scene_gen_config_from_json(const std::string& text);

/// Human-readable rendering of one episode's decision trace.
std::string format_episode_trace(const EpisodeRecord& record, const CategorySpace& space);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace srgnav
