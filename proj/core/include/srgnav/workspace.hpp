#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "srgnav/category_space.hpp"
#include "srgnav/serialize.hpp"

namespace srgnav {

/// Root document of a pipeline workspace directory. Every stage reads the
/// manifest, checks that referenced artifacts carry the same category-space
/// hash, and records what it produced.
struct WorkspaceManifest {
  int format_version = kFormatVersion;
  CategorySpace space;
  std::string space_hash;
  std::vector<std::string> scene_files;  // relative to the workspace root
  std::vector<std::string> train_scene_ids;
  std::vector<std::string> eval_scene_ids;
  std::string config_echo_file;
  std::string corpus_file;
  long trajectory_count = -1;
  std::string srg_file;
  std::string srg_dot_file;
  double prune_threshold = 0.5;
  std::string checkpoint_file;
  std::string loss_history_file;
  std::string embeddings_file;
  std::vector<std::string> report_files;
  std::map<std::string, std::uint64_t> seeds;
};

std::string manifest_path(const std::string& workspace);
WorkspaceManifest load_manifest(const std::string& workspace);
void save_manifest(const std::string& workspace, const WorkspaceManifest& manifest);

// ---- pipeline stages (the CLI subcommands call straight into these) ----

struct GenerateOptions {
  std::string config_file;
  std::string workspace;
  int scenes = 1;
  int eval_scenes = 0;  // held out from SRG/corpus building, used by evaluate
  std::uint64_t seed = 0;
};
void run_generate(const GenerateOptions& options, std::ostream& log);

struct TrajectoriesOptions {
  std::string workspace;
};
void run_trajectories(const TrajectoriesOptions& options, std::ostream& log);

struct BuildSrgOptions {
  std::string workspace;
  double prune_threshold = 0.5;
};
void run_build_srg(const BuildSrgOptions& options, std::ostream& log);

struct TrainOptions {
  std::string workspace;
  double learning_rate = 3e-4;
  int epochs = 400;
  std::size_t embed_dim = 128;
  std::size_t hidden1 = 128;
  std::size_t hidden2 = 128;
  std::uint64_t seed = 0;
  int plateau_patience = 25;  // 0 disables the early stop
};
void run_train(const TrainOptions& options, std::ostream& log);

struct EvaluateOptions {
  std::string workspace;
  std::string policy = "srg_gcn";  // srg_gcn | random | greedy | all
  int episodes_per_scene = 10;
  int k_nearest = 4;
  int max_steps = 350;
  double sense_radius_m = 10.0;
  bool history_walk_score = false;
  std::uint64_t seed = 0;
  int workers = 1;
};
void run_evaluate(const EvaluateOptions& options, std::ostream& log);

struct TraceOptions {
  std::string workspace;
  std::string policy = "srg_gcn";
  std::string episode_id;  // "<scene_id>#<index>"
};
void run_trace(const TraceOptions& options, std::ostream& log);

}  // namespace srgnav
