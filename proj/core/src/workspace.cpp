#include "srgnav/workspace.hpp"

#include <algorithm>
#include <filesystem>
#include <set>

#include <json.hpp>

#include "srgnav/errors.hpp"
#include "srgnav/metrics.hpp"
#include "srgnav/navigator.hpp"
#include "srgnav/scene_gen.hpp"
#include "srgnav/train.hpp"

namespace srgnav {

namespace fs = std::filesystem;
using nlohmann::json;

std::string manifest_path(const std::string& workspace) {
  return (fs::path(workspace) / "manifest.json").string();
}

namespace {

std::string join(const std::string& workspace, const std::string& relative) {
  return (fs::path(workspace) / relative).string();
}

void require_stage(bool present, const std::string& missing, const std::string& hint) {
  if (!present) {
    throw DependencyError(missing + "; run 'srgnav " + hint + "' first");
  }
}

Scene load_scene_file(const std::string& workspace, const WorkspaceManifest& manifest,
                      const std::string& relative) {
  return scene_from_json(read_file(join(workspace, relative)), manifest.space);
}

std::vector<Scene> load_scenes_by_id(const std::string& workspace,
                                     const WorkspaceManifest& manifest,
                                     const std::vector<std::string>& ids) {
  std::vector<Scene> scenes;
  for (const std::string& id : ids) {
    const std::string relative = "scenes/" + id + ".json";
    if (std::find(manifest.scene_files.begin(), manifest.scene_files.end(), relative) ==
        manifest.scene_files.end()) {
      throw IoError("manifest does not list scene file '" + relative + "'");
    }
    scenes.push_back(load_scene_file(workspace, manifest, relative));
  }
  return scenes;
}

}  // namespace

WorkspaceManifest load_manifest(const std::string& workspace) {
  const std::string path = manifest_path(workspace);
  if (!fs::exists(path)) {
    throw DependencyError("no manifest at '" + path + "'; run 'srgnav generate' first");
  }
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw IoError(std::string("manifest: parse error: ") + e.what());
  }
  if (!j.contains("format_version") || j["format_version"].get<int>() != kFormatVersion) {
    throw IoError("manifest: missing or unsupported format_version");
  }
  WorkspaceManifest m;
  m.space.regions = j.at("category_space").at("regions").get<std::vector<std::string>>();
  m.space.objects = j.at("category_space").at("objects").get<std::vector<std::string>>();
  m.space.validate();
  m.space_hash = j.at("category_space_hash").get<std::string>();
  if (m.space_hash != m.space.hash()) {
    throw HashMismatchError("manifest: category_space_hash does not match its own space");
  }
  m.scene_files = j.at("scene_files").get<std::vector<std::string>>();
  m.train_scene_ids = j.at("train_scene_ids").get<std::vector<std::string>>();
  m.eval_scene_ids = j.at("eval_scene_ids").get<std::vector<std::string>>();
  m.config_echo_file = j.value("config_echo_file", "");
  m.corpus_file = j.value("corpus_file", "");
  m.trajectory_count = j.value("trajectory_count", -1L);
  m.srg_file = j.value("srg_file", "");
  m.srg_dot_file = j.value("srg_dot_file", "");
  m.prune_threshold = j.value("prune_threshold", 0.5);
  m.checkpoint_file = j.value("checkpoint_file", "");
  m.loss_history_file = j.value("loss_history_file", "");
  m.embeddings_file = j.value("embeddings_file", "");
  if (j.contains("report_files")) {
    m.report_files = j.at("report_files").get<std::vector<std::string>>();
  }
  if (j.contains("seeds")) {
    for (const auto& [key, value] : j.at("seeds").items()) {
      m.seeds[key] = value.get<std::uint64_t>();
    }
  }
  return m;
}

void save_manifest(const std::string& workspace, const WorkspaceManifest& manifest) {
  json j;
  j["format_version"] = manifest.format_version;
  j["category_space"] =
      json{{"regions", manifest.space.regions}, {"objects", manifest.space.objects}};
  j["category_space_hash"] = manifest.space_hash;
  j["scene_files"] = manifest.scene_files;
  j["train_scene_ids"] = manifest.train_scene_ids;
  j["eval_scene_ids"] = manifest.eval_scene_ids;
  j["config_echo_file"] = manifest.config_echo_file;
  j["corpus_file"] = manifest.corpus_file;
  j["trajectory_count"] = manifest.trajectory_count;
  j["srg_file"] = manifest.srg_file;
  j["srg_dot_file"] = manifest.srg_dot_file;
  j["prune_threshold"] = manifest.prune_threshold;
  j["checkpoint_file"] = manifest.checkpoint_file;
  j["loss_history_file"] = manifest.loss_history_file;
  j["embeddings_file"] = manifest.embeddings_file;
  j["report_files"] = manifest.report_files;
  json seeds = json::object();
  for (const auto& [key, value] : manifest.seeds) seeds[key] = value;
  j["seeds"] = seeds;
  write_file(manifest_path(workspace), j.dump(2) + "\n");
}

void run_generate(const GenerateOptions& options, std::ostream& log) {
  if (options.scenes < 1) throw DomainError("--scenes must be >= 1");
  if (options.eval_scenes < 0) throw DomainError("--eval-scenes must be >= 0");
  const std::string config_text = read_file(options.config_file);
  const SceneGenConfig config = scene_gen_config_from_json(config_text);

  fs::create_directories(fs::path(options.workspace) / "scenes");

  WorkspaceManifest manifest;
  manifest.space = config.space;
  manifest.space_hash = config.space.hash();
  manifest.seeds["generate"] = options.seed;
  manifest.config_echo_file = "config.json";
  write_file(join(options.workspace, manifest.config_echo_file), config_text);

  const int total = options.scenes + options.eval_scenes;
  std::set<std::string> ids;
  for (int i = 0; i < total; ++i) {
    const std::uint64_t scene_seed = Rng::mix(options.seed, static_cast<std::uint64_t>(i));
    Scene scene = generate_scene(config, scene_seed);
    if (!ids.insert(scene.id).second) {
      throw GenerationError("scene id collision for '" + scene.id + "'");
    }
    const std::string relative = "scenes/" + scene.id + ".json";
    write_file(join(options.workspace, relative), scene_to_json(scene, config.space));
    manifest.scene_files.push_back(relative);
    if (i < options.scenes) {
      manifest.train_scene_ids.push_back(scene.id);
    } else {
      manifest.eval_scene_ids.push_back(scene.id);
    }
  }
  save_manifest(options.workspace, manifest);
  log << "generated " << options.scenes << " training and " << options.eval_scenes
      << " held-out scenes in " << options.workspace << "\n";
}

void run_trajectories(const TrajectoriesOptions& options, std::ostream& log) {
  WorkspaceManifest manifest = load_manifest(options.workspace);
  require_stage(!manifest.train_scene_ids.empty(), "manifest lists no training scenes",
                "generate");
  std::vector<Trajectory> corpus;
  for (const Scene& scene :
       load_scenes_by_id(options.workspace, manifest, manifest.train_scene_ids)) {
    auto part = generate_corpus(scene);
    corpus.insert(corpus.end(), part.begin(), part.end());
  }
  manifest.corpus_file = "corpus.jsonl";
  manifest.trajectory_count = static_cast<long>(corpus.size());
  write_file(join(options.workspace, manifest.corpus_file),
             corpus_to_jsonl(corpus, manifest.space));
  save_manifest(options.workspace, manifest);
  log << manifest.trajectory_count << " valid trajectories written to "
      << manifest.corpus_file << "\n";
}

void run_build_srg(const BuildSrgOptions& options, std::ostream& log) {
  WorkspaceManifest manifest = load_manifest(options.workspace);
  require_stage(!manifest.train_scene_ids.empty(), "manifest lists no training scenes",
                "generate");
  std::vector<SceneGraph> graphs;
  for (const Scene& scene :
       load_scenes_by_id(options.workspace, manifest, manifest.train_scene_ids)) {
    graphs.push_back(extract_scene_graph(scene));
  }
  const Srg srg = build_srg(graphs, manifest.space);
  manifest.srg_file = "srg.json";
  manifest.srg_dot_file = "srg.dot";
  manifest.prune_threshold = options.prune_threshold;
  write_file(join(options.workspace, manifest.srg_file), srg_to_json(srg));
  write_file(join(options.workspace, manifest.srg_dot_file), export_dot(srg));
  save_manifest(options.workspace, manifest);
  log << "srg built from " << graphs.size() << " scene graphs: " << srg.edges.size()
      << " edges (prune threshold " << options.prune_threshold << " recorded for training)\n";
}

void run_train(const TrainOptions& options, std::ostream& log) {
  WorkspaceManifest manifest = load_manifest(options.workspace);
  require_stage(!manifest.srg_file.empty(), "no SRG in this workspace", "build-srg");
  require_stage(!manifest.corpus_file.empty(), "no trajectory corpus in this workspace",
                "trajectories");
  const Srg srg = srg_from_json(read_file(join(options.workspace, manifest.srg_file)));
  if (srg.space.hash() != manifest.space_hash) {
    throw HashMismatchError("srg file category space does not match the manifest");
  }
  const auto corpus = corpus_from_jsonl(
      read_file(join(options.workspace, manifest.corpus_file)), manifest.space);
  const PrunedSrg pruned = prune_srg(srg, manifest.prune_threshold);

  TrainConfig config;
  config.learning_rate = options.learning_rate;
  config.epochs = options.epochs;
  config.seed = options.seed;
  config.hidden1 = options.hidden1;
  config.hidden2 = options.hidden2;
  config.embed_dim = options.embed_dim;
  config.plateau_patience = options.plateau_patience;

  const TrainResult result = train(pruned, corpus, config);

  manifest.checkpoint_file = "checkpoint.json";
  manifest.loss_history_file = "loss_history.json";
  manifest.embeddings_file = "embeddings.csv";
  manifest.seeds["train"] = options.seed;
  write_file(join(options.workspace, manifest.checkpoint_file),
             checkpoint_to_json(result.model, config, manifest.space));
  write_file(join(options.workspace, manifest.loss_history_file),
             loss_history_to_json(result.loss_history));
  write_file(join(options.workspace, manifest.embeddings_file),
             embeddings_to_csv(result.table));
  save_manifest(options.workspace, manifest);
  log << "trained " << result.loss_history.size() << " epochs on " << result.pair_count
      << " pairs";
  if (!result.loss_history.empty()) {
    log << " (loss " << result.loss_history.front() << " -> " << result.loss_history.back()
        << ")";
  }
  log << "\n";
}

namespace {

struct SrgGcnAssets {
  Srg srg;
  EmbeddingTable table;
};

SrgGcnAssets load_srg_gcn_assets(const std::string& workspace,
                                 const WorkspaceManifest& manifest) {
  require_stage(!manifest.srg_file.empty(), "no SRG in this workspace", "build-srg");
  require_stage(!manifest.checkpoint_file.empty(),
                "no checkpoint in this workspace (required by the srg_gcn policy)", "train");
  SrgGcnAssets assets;
  assets.srg = srg_from_json(read_file(join(workspace, manifest.srg_file)));
  const Checkpoint ckpt =
      checkpoint_from_json(read_file(join(workspace, manifest.checkpoint_file)));
  if (ckpt.space_hash != manifest.space_hash) {
    throw HashMismatchError("checkpoint category space does not match the manifest");
  }
  const PrunedSrg pruned = prune_srg(assets.srg, manifest.prune_threshold);
  const GcnInputs inputs = srg_to_gcn_inputs(pruned, manifest.space);
  const NormalizedAdjacency adj = normalize_adjacency(inputs.adjacency);
  assets.table.space = manifest.space;
  assets.table.vectors = gcn_forward(ckpt.model, adj, inputs.features, nullptr);
  return assets;
}

}  // namespace

void run_evaluate(const EvaluateOptions& options, std::ostream& log) {
  WorkspaceManifest manifest = load_manifest(options.workspace);
  std::vector<std::string> eval_ids = manifest.eval_scene_ids;
  if (eval_ids.empty()) {
    log << "note: no held-out scenes in the manifest; evaluating on training scenes\n";
    eval_ids = manifest.train_scene_ids;
  }
  require_stage(!eval_ids.empty(), "manifest lists no scenes", "generate");
  const auto scenes = load_scenes_by_id(options.workspace, manifest, eval_ids);

  std::vector<std::string> wanted;
  if (options.policy == "all") {
    wanted = {"srg_gcn", "random", "greedy_unexplored"};
  } else {
    wanted = {policy_name(policy_kind_from_name(options.policy))};
  }

  // Assets are loaded (and missing stages reported) before any episode runs.
  SrgGcnAssets assets;
  bool assets_loaded = false;
  std::vector<PolicyRun> runs;
  for (const std::string& name : wanted) {
    PolicyRun run;
    run.name = name;
    run.policy.kind = policy_kind_from_name(name);
    if (run.policy.kind == PolicyKind::SrgGcn) {
      if (!assets_loaded) {
        assets = load_srg_gcn_assets(options.workspace, manifest);
        assets_loaded = true;
      }
      run.policy.srg = &assets.srg;
      run.policy.table = &assets.table;
    }
    runs.push_back(run);
  }

  EpisodeConfig config;
  config.max_steps = options.max_steps;
  config.k_nearest = options.k_nearest;
  config.sense_radius_m = options.sense_radius_m;
  config.history_walk_score = options.history_walk_score;

  const CompareResult result = compare_policies(scenes, runs, options.episodes_per_scene,
                                                config, options.seed, options.workers);

  fs::create_directories(fs::path(options.workspace) / "reports");
  manifest.seeds["evaluate"] = options.seed;
  for (std::size_t p = 0; p < runs.size(); ++p) {
    const std::string report_rel = "reports/report_" + runs[p].name + ".json";
    const std::string episodes_rel = "reports/episodes_" + runs[p].name + ".jsonl";
    write_file(join(options.workspace, report_rel), report_to_json(result.reports[p]));
    write_file(join(options.workspace, episodes_rel),
               episodes_to_jsonl(result.records[p], manifest.space));
    for (const std::string& rel : {report_rel, episodes_rel}) {
      if (std::find(manifest.report_files.begin(), manifest.report_files.end(), rel) ==
          manifest.report_files.end()) {
        manifest.report_files.push_back(rel);
      }
    }
  }
  const std::string table = format_report_table(result.reports);
  write_file(join(options.workspace, "reports/report_table.txt"), table);
  save_manifest(options.workspace, manifest);
  log << table;
}

void run_trace(const TraceOptions& options, std::ostream& log) {
  WorkspaceManifest manifest = load_manifest(options.workspace);
  const std::string policy = policy_name(policy_kind_from_name(options.policy));
  const std::string episodes_rel = "reports/episodes_" + policy + ".jsonl";
  require_stage(fs::exists(join(options.workspace, episodes_rel)),
                "no episode log for policy '" + policy + "'", "evaluate");

  const auto hash_pos = options.episode_id.rfind('#');
  if (hash_pos == std::string::npos) {
    throw DomainError("episode id must look like '<scene_id>#<index>'");
  }
  const std::string scene_id = options.episode_id.substr(0, hash_pos);
  int wanted_index = -1;
  try {
    wanted_index = std::stoi(options.episode_id.substr(hash_pos + 1));
  } catch (const std::exception&) {
  }
  if (wanted_index < 0) {
    throw DomainError("episode id must end in a non-negative index");
  }

  const auto records = episodes_from_jsonl(
      read_file(join(options.workspace, episodes_rel)), manifest.space);
  int index = 0;
  for (const auto& record : records) {
    if (record.scene_id != scene_id) continue;
    if (index++ == wanted_index) {
      log << format_episode_trace(record, manifest.space);
      return;
    }
  }
  throw DomainError("no episode '" + options.episode_id + "' in " + episodes_rel);
}

}  // namespace srgnav
