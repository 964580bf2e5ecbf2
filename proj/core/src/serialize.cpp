#include "srgnav/serialize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "srgnav/errors.hpp"

namespace srgnav {

using nlohmann::json;

namespace {

// Instance ids in grid rows: a-z, A-Z, 0-9 (62 instances max), '#' blocked.
char instance_to_char(int id) {
  if (id < 26) return static_cast<char>('a' + id);
  if (id < 52) return static_cast<char>('A' + id - 26);
  return static_cast<char>('0' + id - 52);
}

int char_to_instance(char c) {
  if (c >= 'a' && c <= 'z') return c - 'a';
  if (c >= 'A' && c <= 'Z') return c - 'A' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  return -1;
}

json cell_to_json(const Cell& c) { return json::array({c.row, c.col}); }

Cell cell_from_json(const json& j) {
  return Cell{j.at(0).get<int>(), j.at(1).get<int>()};
}

void check_version(const json& j, const std::string& what) {
  if (!j.contains("format_version") || j["format_version"].get<int>() != kFormatVersion) {
    throw IoError(what + ": missing or unsupported format_version");
  }
}

void check_space_hash(const json& j, const CategorySpace& space, const std::string& what) {
  if (!j.contains("category_space_hash") ||
      j["category_space_hash"].get<std::string>() != space.hash()) {
    throw HashMismatchError(what + ": category_space_hash does not match the manifest");
  }
}

json space_to_json(const CategorySpace& space) {
  return json{{"regions", space.regions}, {"objects", space.objects}};
}

CategorySpace space_from_json(const json& j) {
  CategorySpace space;
  space.regions = j.at("regions").get<std::vector<std::string>>();
  space.objects = j.at("objects").get<std::vector<std::string>>();
  space.validate();
  return space;
}

int require_region(const CategorySpace& space, const std::string& name,
                   const std::string& what) {
  const int idx = space.region_index(name);
  if (idx < 0) throw IoError(what + ": unknown region category '" + name + "'");
  return idx;
}

int require_object(const CategorySpace& space, const std::string& name,
                   const std::string& what) {
  const int idx = space.object_index(name);
  if (idx < 0) throw IoError(what + ": unknown object category '" + name + "'");
  return idx;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  const std::size_t rows = j.size();
  const std::size_t cols = rows == 0 ? 0 : j.at(0).size();
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (j.at(r).size() != cols) throw IoError("matrix rows have uneven lengths");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
  }
  return m;
}

}  // namespace

std::string scene_to_json(const Scene& scene, const CategorySpace& space) {
  json j;
  j["format_version"] = kFormatVersion;
  j["category_space_hash"] = space.hash();
  j["id"] = scene.id;
  j["cell_size"] = scene.cell_size;
  std::vector<std::string> rows;
  for (int r = 0; r < scene.rows; ++r) {
    std::string row(static_cast<std::size_t>(scene.cols), '#');
    for (int c = 0; c < scene.cols; ++c) {
      const int inst = scene.instance_at({r, c});
      if (inst >= 0) row[static_cast<std::size_t>(c)] = instance_to_char(inst);
    }
    rows.push_back(std::move(row));
  }
  j["grid"] = rows;
  json regions = json::array();
  for (const auto& inst : scene.regions) {
    json doorways = json::array();
    for (const Cell& d : inst.doorways) doorways.push_back(cell_to_json(d));
    regions.push_back(json{{"id", inst.id},
                           {"category", space.regions[inst.category]},
                           {"doorways", doorways}});
  }
  j["regions"] = regions;
  json objects = json::array();
  for (const auto& obj : scene.objects) {
    objects.push_back(json{{"id", obj.id},
                           {"category", space.objects[obj.category]},
                           {"cell", cell_to_json(obj.cell)}});
  }
  j["objects"] = objects;
  return j.dump(2) + "\n";
}

Scene scene_from_json(const std::string& text, const CategorySpace& space) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("scene file: parse error: ") + e.what());
  }
  check_version(j, "scene file");
  check_space_hash(j, space, "scene file");
  Scene scene;
  scene.id = j.at("id").get<std::string>();
  scene.cell_size = j.at("cell_size").get<double>();
  const auto rows = j.at("grid").get<std::vector<std::string>>();
  scene.rows = static_cast<int>(rows.size());
  scene.cols = scene.rows > 0 ? static_cast<int>(rows[0].size()) : 0;
  scene.grid.assign(static_cast<std::size_t>(scene.rows) * scene.cols, -1);

  for (const auto& rj : j.at("regions")) {
    RegionInstance inst;
    inst.id = rj.at("id").get<int>();
    inst.category = require_region(space, rj.at("category").get<std::string>(), "scene file");
    for (const auto& dj : rj.at("doorways")) inst.doorways.push_back(cell_from_json(dj));
    scene.regions.push_back(std::move(inst));
  }
  for (int r = 0; r < scene.rows; ++r) {
    if (static_cast<int>(rows[r].size()) != scene.cols) {
      throw IoError("scene file: ragged grid rows");
    }
    for (int c = 0; c < scene.cols; ++c) {
      const char ch = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      if (ch == '#') continue;
      const int inst = char_to_instance(ch);
      if (inst < 0 || inst >= static_cast<int>(scene.regions.size())) {
        throw IoError("scene file: grid references unknown instance");
      }
      scene.grid[scene.index({r, c})] = static_cast<std::int16_t>(inst);
      scene.regions[static_cast<std::size_t>(inst)].cells.push_back({r, c});
    }
  }
  for (const auto& oj : j.at("objects")) {
    ObjectInstance obj;
    obj.id = oj.at("id").get<int>();
    obj.category = require_object(space, oj.at("category").get<std::string>(), "scene file");
    obj.cell = cell_from_json(oj.at("cell"));
    scene.objects.push_back(obj);
  }
  scene.validate(space);
  return scene;
}

std::string srg_to_json(const Srg& srg) {
  json j;
  j["format_version"] = kFormatVersion;
  j["category_space"] = space_to_json(srg.space);
  j["category_space_hash"] = srg.space.hash();
  j["scene_graph_count"] = srg.scene_graph_count;
  j["region_freq"] = srg.region_freq;
  j["includes_count"] = srg.includes_count;
  j["co_adjacency"] = srg.co_adjacency;
  json edges = json::array();
  for (const auto& e : srg.edges) {
    const bool inc = e.type == SrgEdgeType::Includes;
    edges.push_back(json{
        {"type", inc ? "includes" : "adjacency"},
        {"a", inc ? srg.space.objects[e.a] : srg.space.regions[e.a]},
        {"b", srg.space.regions[e.b]},
        {"count", e.count},
        {"weight", e.weight},
    });
  }
  j["edges"] = edges;
  return j.dump(2) + "\n";
}

Srg srg_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("srg file: parse error: ") + e.what());
  }
  check_version(j, "srg file");
  Srg srg;
  srg.space = space_from_json(j.at("category_space"));
  check_space_hash(j, srg.space, "srg file");
  srg.scene_graph_count = j.at("scene_graph_count").get<long>();
  srg.region_freq = j.at("region_freq").get<std::vector<long>>();
  srg.includes_count = j.at("includes_count").get<std::vector<std::vector<long>>>();
  srg.co_adjacency = j.at("co_adjacency").get<std::vector<std::vector<long>>>();
  for (const auto& ej : j.at("edges")) {
    SrgEdge e;
    const std::string type = ej.at("type").get<std::string>();
    e.type = type == "includes" ? SrgEdgeType::Includes : SrgEdgeType::Adjacency;
    if (e.type == SrgEdgeType::Includes) {
      e.a = require_object(srg.space, ej.at("a").get<std::string>(), "srg file");
    } else {
      e.a = require_region(srg.space, ej.at("a").get<std::string>(), "srg file");
    }
    e.b = require_region(srg.space, ej.at("b").get<std::string>(), "srg file");
    e.count = ej.at("count").get<long>();
    e.weight = ej.at("weight").get<double>();
    srg.edges.push_back(e);
  }
  srg.rebuild_lookup();
  return srg;
}

std::string corpus_to_jsonl(std::span<const Trajectory> corpus, const CategorySpace& space) {
  std::ostringstream out;
  for (const auto& traj : corpus) {
    json j;
    j["scene_id"] = traj.scene_id;
    j["start_region"] = space.regions[traj.start_region];
    j["target"] = space.objects[traj.target_object];
    std::vector<std::string> seq;
    for (int r : traj.region_sequence) seq.push_back(space.regions[r]);
    j["region_sequence"] = seq;
    j["length_m"] = traj.length_m;
    out << j.dump() << "\n";
  }
  return out.str();
}

std::vector<Trajectory> corpus_from_jsonl(const std::string& text,
                                          const CategorySpace& space) {
  std::vector<Trajectory> corpus;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw IoError(std::string("corpus file: parse error: ") + e.what());
    }
    Trajectory traj;
    traj.scene_id = j.at("scene_id").get<std::string>();
    traj.start_region =
        require_region(space, j.at("start_region").get<std::string>(), "corpus file");
    traj.target_object =
        require_object(space, j.at("target").get<std::string>(), "corpus file");
    for (const auto& rj : j.at("region_sequence")) {
      traj.region_sequence.push_back(
          require_region(space, rj.get<std::string>(), "corpus file"));
    }
    traj.length_m = j.at("length_m").get<double>();
    corpus.push_back(std::move(traj));
  }
  return corpus;
}

std::string checkpoint_to_json(const GcnModel& model, const TrainConfig& config,
                               const CategorySpace& space) {
  json j;
  j["format_version"] = kFormatVersion;
  j["category_space_hash"] = space.hash();
  j["dims"] = json{{"input", model.dims.input},
                   {"hidden1", model.dims.hidden1},
                   {"hidden2", model.dims.hidden2},
                   {"embed", model.dims.embed}};
  j["train_config"] = json{
      {"learning_rate", config.learning_rate},
      {"epochs", config.epochs},
      {"seed", config.seed},
      {"pair_score", config.pair_score == PairScore::Dot ? "dot" : "cosine"},
      {"beta1", config.beta1},
      {"beta2", config.beta2},
      {"epsilon", config.epsilon},
      {"plateau_patience", config.plateau_patience},
      {"plateau_tol", config.plateau_tol},
  };
  j["w1"] = matrix_to_json(model.w1);
  j["w2"] = matrix_to_json(model.w2);
  j["w3"] = matrix_to_json(model.w3);
  return j.dump(2) + "\n";
}

Checkpoint checkpoint_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("checkpoint file: parse error: ") + e.what());
  }
  check_version(j, "checkpoint file");
  Checkpoint ckpt;
  ckpt.space_hash = j.at("category_space_hash").get<std::string>();
  const auto& dims = j.at("dims");
  ckpt.model.dims.input = dims.at("input").get<std::size_t>();
  ckpt.model.dims.hidden1 = dims.at("hidden1").get<std::size_t>();
  ckpt.model.dims.hidden2 = dims.at("hidden2").get<std::size_t>();
  ckpt.model.dims.embed = dims.at("embed").get<std::size_t>();
  const auto& tc = j.at("train_config");
  ckpt.config.learning_rate = tc.at("learning_rate").get<double>();
  ckpt.config.epochs = tc.at("epochs").get<int>();
  ckpt.config.seed = tc.at("seed").get<std::uint64_t>();
  ckpt.config.pair_score =
      tc.at("pair_score").get<std::string>() == "cosine" ? PairScore::Cosine : PairScore::Dot;
  ckpt.config.beta1 = tc.at("beta1").get<double>();
  ckpt.config.beta2 = tc.at("beta2").get<double>();
  ckpt.config.epsilon = tc.at("epsilon").get<double>();
  ckpt.config.plateau_patience = tc.at("plateau_patience").get<int>();
  ckpt.config.plateau_tol = tc.at("plateau_tol").get<double>();
  ckpt.config.hidden1 = ckpt.model.dims.hidden1;
  ckpt.config.hidden2 = ckpt.model.dims.hidden2;
  ckpt.config.embed_dim = ckpt.model.dims.embed;
  ckpt.model.w1 = matrix_from_json(j.at("w1"));
  ckpt.model.w2 = matrix_from_json(j.at("w2"));
  ckpt.model.w3 = matrix_from_json(j.at("w3"));
  ckpt.model.check_dims();
  return ckpt;
}

std::string loss_history_to_json(std::span<const double> history) {
  json j;
  j["format_version"] = kFormatVersion;
  j["loss"] = std::vector<double>(history.begin(), history.end());
  return j.dump(2) + "\n";
}

std::string embeddings_to_csv(const EmbeddingTable& table) {
  std::ostringstream out;
  out << "node";
  for (std::size_t e = 0; e < table.vectors.cols(); ++e) out << ",e" << e;
  out << "\n";
  out.precision(17);
  for (std::size_t n = 0; n < table.space.node_count(); ++n) {
    out << '"' << table.space.node_name(n) << '"';
    for (double v : table.vectors.row(n)) out << ',' << v;
    out << "\n";
  }
  return out.str();
}

namespace {

const char* action_code(Action a) {
  switch (a) {
    case Action::Forward: return "F";
    case Action::Backward: return "B";
    case Action::RotateLeft: return "L";
    default: return "R";
  }
}

Action action_from_code(const std::string& code) {
  if (code == "F") return Action::Forward;
  if (code == "B") return Action::Backward;
  if (code == "L") return Action::RotateLeft;
  if (code == "R") return Action::RotateRight;
  throw IoError("episode file: unknown action code '" + code + "'");
}

json pose_to_json(const Pose& p) {
  return json{{"cell", cell_to_json(p.cell)}, {"heading", p.heading}};
}

Pose pose_from_json(const json& j) {
  return Pose{cell_from_json(j.at("cell")), j.at("heading").get<int>()};
}

}  // namespace

std::string episodes_to_jsonl(std::span<const EpisodeRecord> records,
                              const CategorySpace& space) {
  std::ostringstream out;
  for (const auto& r : records) {
    json j;
    j["scene_id"] = r.scene_id;
    j["policy"] = r.policy;
    j["target"] = space.objects[r.target];
    j["start"] = pose_to_json(r.start);
    j["success"] = r.success;
    j["steps"] = r.steps;
    j["path_length_m"] = r.path_length_m;
    j["shortest_length_m"] = r.shortest_length_m;
    j["terminal_geodesic_m"] = r.terminal_geodesic_m;
    j["terminal_euclidean_m"] = r.terminal_euclidean_m;
    j["planner_failure"] = r.planner_failure;
    json decisions = json::array();
    for (const auto& d : r.decisions) {
      json dj;
      dj["step"] = d.step;
      dj["pose"] = pose_to_json(d.pose);
      dj["mode"] = d.mode;
      dj["goal"] = cell_to_json(d.goal);
      dj["chosen_region"] =
          d.chosen_region >= 0 ? json(space.regions[d.chosen_region]) : json(nullptr);
      json sims = json::array();
      for (const auto& s : d.similarities) {
        sims.push_back(json::array({space.regions[s.region], s.similarity}));
      }
      dj["similarities"] = sims;
      json ests = json::array();
      for (const auto& est : d.estimates) {
        json ej;
        ej["object_id"] = est.object_id;
        ej["category"] = space.objects[est.object_category];
        ej["cell"] = cell_to_json(est.object_cell);
        std::vector<std::string> cands;
        for (int c : est.candidate_categories) cands.push_back(space.objects[c]);
        ej["candidates"] = cands;
        ej["scores"] = est.posterior.scores;
        ej["degenerate"] = est.posterior.degenerate;
        ej["label"] = space.regions[est.label];
        ests.push_back(std::move(ej));
      }
      dj["estimates"] = ests;
      decisions.push_back(std::move(dj));
    }
    j["decisions"] = decisions;
    json trace = json::array();
    for (const auto& ev : r.trace) {
      trace.push_back(json::array({action_code(ev.action), ev.pose_after.cell.row,
                                   ev.pose_after.cell.col, ev.pose_after.heading,
                                   ev.moved ? 1 : 0}));
    }
    j["trace"] = trace;
    out << j.dump() << "\n";
  }
  return out.str();
}

std::vector<EpisodeRecord> episodes_from_jsonl(const std::string& text,
                                               const CategorySpace& space) {
  std::vector<EpisodeRecord> records;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw IoError(std::string("episode file: parse error: ") + e.what());
    }
    EpisodeRecord r;
    r.scene_id = j.at("scene_id").get<std::string>();
    r.policy = j.at("policy").get<std::string>();
    r.target = require_object(space, j.at("target").get<std::string>(), "episode file");
    r.start = pose_from_json(j.at("start"));
    r.success = j.at("success").get<bool>();
    r.steps = j.at("steps").get<int>();
    r.path_length_m = j.at("path_length_m").get<double>();
    r.shortest_length_m = j.at("shortest_length_m").get<double>();
    r.terminal_geodesic_m = j.at("terminal_geodesic_m").get<double>();
    r.terminal_euclidean_m = j.at("terminal_euclidean_m").get<double>();
    r.planner_failure = j.at("planner_failure").get<bool>();
    for (const auto& dj : j.at("decisions")) {
      Decision d;
      d.step = dj.at("step").get<int>();
      d.pose = pose_from_json(dj.at("pose"));
      d.mode = dj.at("mode").get<std::string>();
      d.goal = cell_from_json(dj.at("goal"));
      if (!dj.at("chosen_region").is_null()) {
        d.chosen_region = require_region(space, dj.at("chosen_region").get<std::string>(),
                                         "episode file");
      }
      for (const auto& sj : dj.at("similarities")) {
        d.similarities.push_back(
            {require_region(space, sj.at(0).get<std::string>(), "episode file"),
             sj.at(1).get<double>()});
      }
      for (const auto& ej : dj.at("estimates")) {
        RegionEstimate est;
        est.object_id = ej.at("object_id").get<int>();
        est.object_category =
            require_object(space, ej.at("category").get<std::string>(), "episode file");
        est.object_cell = cell_from_json(ej.at("cell"));
        for (const auto& cj : ej.at("candidates")) {
          est.candidate_categories.push_back(
              require_object(space, cj.get<std::string>(), "episode file"));
        }
        est.posterior.scores = ej.at("scores").get<std::vector<double>>();
        est.posterior.degenerate = ej.at("degenerate").get<bool>();
        est.label = require_region(space, ej.at("label").get<std::string>(), "episode file");
        d.estimates.push_back(std::move(est));
      }
      r.decisions.push_back(std::move(d));
    }
    for (const auto& tj : j.at("trace")) {
      StepEvent ev;
      ev.action = action_from_code(tj.at(0).get<std::string>());
      ev.pose_after.cell = Cell{tj.at(1).get<int>(), tj.at(2).get<int>()};
      ev.pose_after.heading = tj.at(3).get<int>();
      ev.moved = tj.at(4).get<int>() != 0;
      r.trace.push_back(ev);
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::string report_to_json(const MetricsReport& report) {
  json j;
  j["format_version"] = kFormatVersion;
  j["policy"] = report.policy;
  j["seed"] = report.seed;
  j["spec_hash"] = report.spec_hash;
  j["config"] = json{
      {"max_steps", report.config.max_steps},
      {"success_radius_m", report.config.success_radius_m},
      {"sense_radius_m", report.config.sense_radius_m},
      {"k_nearest", report.config.k_nearest},
      {"step_translation_m", report.config.step_translation_m},
      {"step_rotation_deg", report.config.step_rotation_deg},
      {"history_walk_score", report.config.history_walk_score},
  };
  auto row_to_json = [](const SceneMetricsRow& row) {
    return json{{"scene_id", row.scene_id},   {"episodes", row.episodes},
                {"success", row.success},     {"spl", row.spl},
                {"soft_spl", row.soft_spl},   {"dts_mean_m", row.dts_mean_m}};
  };
  json rows = json::array();
  for (const auto& row : report.per_scene) rows.push_back(row_to_json(row));
  j["per_scene"] = rows;
  j["aggregate"] = row_to_json(report.aggregate);
  return j.dump(2) + "\n";
}

MetricsReport report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("report file: parse error: ") + e.what());
  }
  check_version(j, "report file");
  MetricsReport report;
  report.policy = j.at("policy").get<std::string>();
  report.seed = j.at("seed").get<std::uint64_t>();
  report.spec_hash = j.at("spec_hash").get<std::string>();
  const auto& cj = j.at("config");
  report.config.max_steps = cj.at("max_steps").get<int>();
  report.config.success_radius_m = cj.at("success_radius_m").get<double>();
  report.config.sense_radius_m = cj.at("sense_radius_m").get<double>();
  report.config.k_nearest = cj.at("k_nearest").get<int>();
  report.config.step_translation_m = cj.at("step_translation_m").get<double>();
  report.config.step_rotation_deg = cj.at("step_rotation_deg").get<int>();
  report.config.history_walk_score = cj.value("history_walk_score", false);
  auto row_from_json = [](const json& rj) {
    SceneMetricsRow row;
    row.scene_id = rj.at("scene_id").get<std::string>();
    row.episodes = rj.at("episodes").get<std::size_t>();
    row.success = rj.at("success").get<double>();
    row.spl = rj.at("spl").get<double>();
    row.soft_spl = rj.at("soft_spl").get<double>();
    row.dts_mean_m = rj.at("dts_mean_m").get<double>();
    return row;
  };
  for (const auto& rj : j.at("per_scene")) report.per_scene.push_back(row_from_json(rj));
  report.aggregate = row_from_json(j.at("aggregate"));
  return report;
}

std::string scene_gen_config_to_json(const SceneGenConfig& config) {
  json j;
  j["format_version"] = kFormatVersion;
  j["category_space"] = space_to_json(config.space);
  j["grid_rows"] = config.grid_rows;
  j["grid_cols"] = config.grid_cols;
  j["cell_size"] = config.cell_size;
  j["num_regions"] = config.num_regions;
  j["extra_door_prob"] = config.extra_door_prob;
  j["doorway_width"] = config.doorway_width;
  j["min_room_span"] = config.min_room_span;
  json prior;
  for (std::size_t r = 0; r < config.space.regions.size(); ++r) {
    if (config.region_prior[r] > 0.0) prior[config.space.regions[r]] = config.region_prior[r];
  }
  j["region_prior"] = prior.is_null() ? json::object() : prior;
  json placement;
  for (std::size_t o = 0; o < config.space.objects.size(); ++o) {
    json row;
    for (std::size_t r = 0; r < config.space.regions.size(); ++r) {
      if (config.placement_prior[o][r] > 0.0) {
        row[config.space.regions[r]] = config.placement_prior[o][r];
      }
    }
    if (!row.is_null()) placement[config.space.objects[o]] = row;
  }
  j["placement_prior"] = placement;
  return j.dump(2) + "\n";
}

SceneGenConfig scene_gen_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("scene-gen config: parse error: ") + e.what());
  }
  check_version(j, "scene-gen config");
  SceneGenConfig config;
  config.space = j.contains("category_space") ? space_from_json(j.at("category_space"))
                                              : CategorySpace::default_space();
  if (j.contains("grid_rows")) config.grid_rows = j.at("grid_rows").get<int>();
  if (j.contains("grid_cols")) config.grid_cols = j.at("grid_cols").get<int>();
  if (j.contains("cell_size")) config.cell_size = j.at("cell_size").get<double>();
  if (j.contains("num_regions")) config.num_regions = j.at("num_regions").get<int>();
  if (j.contains("extra_door_prob")) {
    config.extra_door_prob = j.at("extra_door_prob").get<double>();
  }
  if (j.contains("doorway_width")) config.doorway_width = j.at("doorway_width").get<int>();
  if (j.contains("min_room_span")) config.min_room_span = j.at("min_room_span").get<int>();
  config.region_prior.assign(config.space.regions.size(), 0.0);
  if (j.contains("region_prior") && !j.at("region_prior").empty()) {
    for (const auto& [name, weight] : j.at("region_prior").items()) {
      config.region_prior[static_cast<std::size_t>(
          require_region(config.space, name, "scene-gen config"))] = weight.get<double>();
    }
  } else {
    config.region_prior.assign(config.space.regions.size(), 1.0);
  }
  config.placement_prior.assign(config.space.objects.size(),
                                std::vector<double>(config.space.regions.size(), 0.0));
  if (!j.contains("placement_prior")) {
    throw IoError("scene-gen config: placement_prior is required");
  }
  for (const auto& [obj_name, row] : j.at("placement_prior").items()) {
    const int o = require_object(config.space, obj_name, "scene-gen config");
    for (const auto& [region_name, p] : row.items()) {
      const int r = require_region(config.space, region_name, "scene-gen config");
      config.placement_prior[static_cast<std::size_t>(o)][static_cast<std::size_t>(r)] =
          p.get<double>();
    }
  }
  config.validate();
  return config;
}

std::string format_episode_trace(const EpisodeRecord& record, const CategorySpace& space) {
  std::ostringstream out;
  char line[256];
  out << "episode: scene=" << record.scene_id << " policy=" << record.policy
      << " target=" << space.objects[record.target] << "\n";
  std::snprintf(line, sizeof(line),
                "start=(%d,%d,h%d) success=%d steps=%d p=%.2fm l=%.2fm d_geo=%.2fm "
                "d_euc=%.2fm\n",
                record.start.cell.row, record.start.cell.col, record.start.heading,
                record.success ? 1 : 0, record.steps, record.path_length_m,
                record.shortest_length_m, record.terminal_geodesic_m,
                record.terminal_euclidean_m);
  out << line;
  for (const auto& d : record.decisions) {
    std::snprintf(line, sizeof(line), "[step %3d] at (%d,%d) mode=%s goal=(%d,%d)", d.step,
                  d.pose.cell.row, d.pose.cell.col, d.mode.c_str(), d.goal.row, d.goal.col);
    out << line;
    if (d.chosen_region >= 0) out << " chosen=" << space.regions[d.chosen_region];
    out << "\n";
    for (const auto& est : d.estimates) {
      out << "    object " << est.object_id << " (" << space.objects[est.object_category]
          << ") at (" << est.object_cell.row << "," << est.object_cell.col
          << ") -> " << space.regions[est.label] << "  candidates=[";
      for (std::size_t i = 0; i < est.candidate_categories.size(); ++i) {
        out << (i ? ", " : "") << space.objects[est.candidate_categories[i]];
      }
      out << "] scores=[";
      const auto norm = est.posterior.normalized();
      for (std::size_t r = 0; r < norm.size(); ++r) {
        std::snprintf(line, sizeof(line), "%s%s=%.4f", r ? ", " : "",
                      space.regions[r].c_str(), norm[r]);
        out << line;
      }
      out << "]\n";
    }
    if (!d.similarities.empty()) {
      out << "    similarity:";
      for (const auto& s : d.similarities) {
        std::snprintf(line, sizeof(line), " %s=%.4f", space.regions[s.region].c_str(),
                      s.similarity);
        out << line;
      }
      out << "\n";
    }
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace srgnav
