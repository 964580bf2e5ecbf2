#include "srgnav/navigator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "srgnav/errors.hpp"
#include "srgnav/pathfind.hpp"

namespace srgnav {

void Policy::validate() const {
  if (kind == PolicyKind::SrgGcn && (srg == nullptr || table == nullptr)) {
    throw DependencyError(
        "srg_gcn policy requires both an SRG and a trained embedding table");
  }
}

PolicyKind policy_kind_from_name(const std::string& name) {
  if (name == "srg_gcn") return PolicyKind::SrgGcn;
  if (name == "random") return PolicyKind::Random;
  if (name == "greedy" || name == "greedy_unexplored") return PolicyKind::GreedyUnexplored;
  throw DomainError("unknown policy '" + name + "' (srg_gcn | random | greedy)");
}

std::string policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::SrgGcn: return "srg_gcn";
    case PolicyKind::Random: return "random";
    case PolicyKind::GreedyUnexplored: return "greedy_unexplored";
  }
  return "unknown";
}

Action random_policy_step(Rng& rng) {
  switch (rng.uniform_int(0, 3)) {
    case 0: return Action::Forward;
    case 1: return Action::Backward;
    case 2: return Action::RotateLeft;
    default: return Action::RotateRight;
  }
}

std::optional<RegionChoice> select_next_region(const EmbeddingTable& table,
                                               const VisibleRegionMap& visible,
                                               int target_category,
                                               std::optional<int> history_region) {
  if (visible.empty()) return std::nullopt;
  const auto target_embedding =
      table.object(static_cast<std::size_t>(target_category));

  // Distinct labels in increasing region order; the anchor for a label is
  // the first (nearest) visible object that carries it.
  std::vector<int> labels;
  for (const auto& est : visible) labels.push_back(est.label);
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

  RegionChoice choice;
  double best = -std::numeric_limits<double>::infinity();
  int best_label = -1;
  for (int label : labels) {
    const auto region_embedding = table.region(static_cast<std::size_t>(label));
    double sim = cosine_similarity(target_embedding, region_embedding);
    if (history_region) {
      sim = 0.5 * (sim + cosine_similarity(
                             table.region(static_cast<std::size_t>(*history_region)),
                             region_embedding));
    }
    choice.similarities.push_back({label, sim});
    if (sim > best) {
      best = sim;
      best_label = label;  // ties keep the lower region index
    }
  }
  choice.region = best_label;
  for (const auto& est : visible) {
    if (est.label == best_label) {
      choice.anchor_object_id = est.object_id;
      choice.anchor_cell = est.object_cell;
      break;
    }
  }
  return choice;
}

namespace {

Cell heading_offset(int heading) {
  switch (heading) {
    case kHeadingEast: return {0, 1};
    case kHeadingNorth: return {-1, 0};
    case kHeadingWest: return {0, -1};
    case kHeadingSouth: return {1, 0};
    default: return {0, 0};  // non-cardinal headings cannot translate
  }
}

int heading_for_move(Cell from, Cell to) {
  if (to.row == from.row && to.col == from.col + 1) return kHeadingEast;
  if (to.row == from.row - 1 && to.col == from.col) return kHeadingNorth;
  if (to.row == from.row && to.col == from.col - 1) return kHeadingWest;
  if (to.row == from.row + 1 && to.col == from.col) return kHeadingSouth;
  throw DomainError("path steps must be 4-connected");
}

class EpisodeRunner {
 public:
  EpisodeRunner(const Scene& scene, const Policy& policy, int target,
                const Pose& start, const EpisodeConfig& config, std::uint64_t seed)
      : scene_(scene), policy_(policy), config_(config), rng_(seed) {
    record_.scene_id = scene.id;
    record_.policy = policy_name(policy.kind);
    record_.target = target;
    record_.start = start;
    if (!scene.in_bounds(start.cell) || scene.blocked(start.cell)) {
      throw DomainError("episode start must be a free cell");
    }
    for (const auto& obj : scene_.objects) {
      if (obj.category == target) target_cells_.push_back(obj.cell);
    }
    if (target_cells_.empty()) {
      throw DomainError("scene '" + scene.id + "' has no instance of the target");
    }
    visited_cells_.assign(scene.grid.size(), 0);
    visited_instances_.assign(scene.regions.size(), 0);
    pose_ = start;

    const auto dist = distance_field(scene_, start.cell);
    int best = -1;
    for (const Cell& t : target_cells_) {
      const int d = dist[scene_.index(t)];
      if (d >= 0 && (best < 0 || d < best)) best = d;
    }
    if (best < 0) throw NoPathError("no target instance reachable from the start");
    record_.shortest_length_m = scene_.cell_size * best;
  }

  EpisodeRecord run() {
    occupy();
    check_success();
    switch (policy_.kind) {
      case PolicyKind::Random: run_random(); break;
      case PolicyKind::GreedyUnexplored: run_greedy(); break;
      case PolicyKind::SrgGcn: run_srg_gcn(); break;
    }
    finalize();
    return std::move(record_);
  }

 private:
  bool budget_left() const { return record_.steps < config_.max_steps; }

  void occupy() {
    visited_cells_[scene_.index(pose_.cell)] = 1;
    const int instance = scene_.instance_at(pose_.cell);
    visited_instances_[instance] = 1;
    if (instance != last_instance_) {
      if (last_instance_ >= 0) {
        prev_region_category_ = scene_.regions[last_instance_].category;
      }
      last_instance_ = instance;
    }
  }

  double min_euclid_to_target(Cell from) const {
    double best = std::numeric_limits<double>::infinity();
    for (const Cell& t : target_cells_) best = std::min(best, scene_.euclidean_m(from, t));
    return best;
  }

  void check_success() {
    if (!done_ && min_euclid_to_target(pose_.cell) <= config_.success_radius_m) {
      record_.success = true;
      done_ = true;
    }
  }

  void log_step(Action action, bool moved) {
    ++record_.steps;
    record_.trace.push_back({action, pose_, moved});
  }

  void apply_action(Action action) {
    switch (action) {
      case Action::RotateLeft:
        pose_.heading = (pose_.heading + 1) % kHeadingCount;
        log_step(action, false);
        break;
      case Action::RotateRight:
        pose_.heading = (pose_.heading + kHeadingCount - 1) % kHeadingCount;
        log_step(action, false);
        break;
      case Action::Forward:
      case Action::Backward: {
        Cell off = heading_offset(pose_.heading);
        if (action == Action::Backward) off = {-off.row, -off.col};
        const Cell next{pose_.cell.row + off.row, pose_.cell.col + off.col};
        const bool legal = (off.row != 0 || off.col != 0) && scene_.in_bounds(next) &&
                           !scene_.blocked(next);
        if (legal) {
          pose_.cell = next;
          record_.path_length_m += config_.step_translation_m;
          occupy();
        }
        // Blocked or non-cardinal translations still cost the step.
        log_step(action, legal);
        break;
      }
    }
    check_success();
  }

  /// Rotates to `desired` one 30-degree step at a time.
  void rotate_to(int desired) {
    while (!done_ && budget_left() && pose_.heading != desired) {
      const int delta = (desired - pose_.heading + kHeadingCount) % kHeadingCount;
      apply_action(delta <= kHeadingCount / 2 ? Action::RotateLeft : Action::RotateRight);
    }
  }

  /// Walks the plan; with `interrupt_on_target` the leg is abandoned as
  /// soon as a target instance comes into view, handing control back to
  /// the decision loop for pursuit.
  void execute_path(const Path& path, bool interrupt_on_target) {
    for (std::size_t i = 1; i < path.cells.size(); ++i) {
      if (done_ || !budget_left()) return;
      rotate_to(heading_for_move(path.cells[i - 1], path.cells[i]));
      if (done_ || !budget_left()) return;
      apply_action(Action::Forward);
      if (interrupt_on_target && !done_ && target_in_view()) return;
    }
  }

  bool target_in_view() const {
    for (const auto& obj : visible_objects(scene_, pose_, config_.sense_radius_m)) {
      if (obj.category == record_.target) return true;
    }
    return false;
  }

  /// Plans to `goal` and walks the plan. Returns false on planner failure.
  bool go_to(Cell goal, bool interrupt_on_target = false) {
    auto path = try_geodesic_path(scene_, pose_.cell, goal);
    if (!path) {
      record_.planner_failure = true;
      done_ = true;
      return false;
    }
    execute_path(*path, interrupt_on_target);
    return true;
  }

  /// Nearest cell the agent has never occupied, by BFS distance.
  std::optional<Cell> nearest_unvisited() const {
    const auto dist = distance_field(scene_, pose_.cell);
    std::optional<Cell> best;
    int best_d = std::numeric_limits<int>::max();
    for (int r = 0; r < scene_.rows; ++r) {
      for (int c = 0; c < scene_.cols; ++c) {
        const Cell cell{r, c};
        const std::size_t i = scene_.index(cell);
        if (visited_cells_[i] || dist[i] < 0) continue;
        if (dist[i] < best_d) {
          best_d = dist[i];
          best = cell;
        }
      }
    }
    return best;
  }

  void log_decision(const std::string& mode, Cell goal, VisibleRegionMap estimates = {},
                    std::vector<SimilarityEntry> similarities = {}, int chosen = -1) {
    Decision d;
    d.step = record_.steps;
    d.pose = pose_;
    d.mode = mode;
    d.estimates = std::move(estimates);
    d.similarities = std::move(similarities);
    d.chosen_region = chosen;
    d.goal = goal;
    record_.decisions.push_back(std::move(d));
  }

  /// One exploration leg: plan to the nearest never-visited cell. Returns
  /// false when the scene is exhausted (episode ends).
  bool explore_step() {
    const auto goal = nearest_unvisited();
    if (!goal) {
      done_ = true;
      return false;
    }
    log_decision("explore", *goal);
    return go_to(*goal, /*interrupt_on_target=*/true);
  }

  std::vector<ObjectInstance> sense() const {
    return visible_objects(scene_, pose_, config_.sense_radius_m);
  }

  const ObjectInstance* nearest_visible_target(
      const std::vector<ObjectInstance>& visible) const {
    for (const auto& obj : visible) {
      if (obj.category == record_.target) return &obj;  // list is distance-sorted
    }
    return nullptr;
  }

  void run_random() {
    while (!done_ && budget_left()) {
      apply_action(random_policy_step(rng_));
    }
  }

  void run_greedy() {
    while (!done_ && budget_left()) {
      const auto visible = sense();
      if (const auto* target = nearest_visible_target(visible)) {
        log_decision("target", target->cell);
        if (!go_to(target->cell)) return;
        continue;
      }
      if (!explore_step()) return;
    }
  }

  void run_srg_gcn() {
    while (!done_ && budget_left()) {
      const auto visible = sense();
      if (const auto* target = nearest_visible_target(visible)) {
        log_decision("target", target->cell);
        if (!go_to(target->cell)) return;
        continue;
      }
      if (visible.empty()) {
        if (!explore_step()) return;
        continue;
      }

      const auto estimates = visible_regions(*policy_.srg, visible, config_.k_nearest);

      // Prefer regions whose instance has not been visited; fall back to
      // revisits only when everything in view is already explored.
      VisibleRegionMap unvisited;
      for (const auto& est : estimates) {
        if (!visited_instances_[scene_.instance_at(est.object_cell)]) {
          unvisited.push_back(est);
        }
      }
      const VisibleRegionMap& pool = unvisited.empty() ? estimates : unvisited;
      std::optional<int> history;
      if (config_.history_walk_score && prev_region_category_ >= 0) {
        history = prev_region_category_;
      }
      const auto choice = select_next_region(*policy_.table, pool, record_.target, history);
      if (!choice) {
        if (!explore_step()) return;
        continue;
      }

      const Cell goal = motion_goal(*choice);
      if (goal == pose_.cell) {
        if (!explore_step()) return;
        continue;
      }
      log_decision("region", goal, estimates, choice->similarities, choice->region);
      if (!go_to(goal, /*interrupt_on_target=*/true)) return;
    }
  }

  /// Where "move to that region" lands: the chosen instance's nearest
  /// doorway when the instance is elsewhere, a not-yet-crossed doorway when
  /// the agent is already inside it, the anchor object as a last resort.
  Cell motion_goal(const RegionChoice& choice) const {
    const int instance = scene_.instance_at(choice.anchor_cell);
    const int current = scene_.instance_at(pose_.cell);
    const auto& doorways = scene_.regions[instance].doorways;
    if (instance != current) {
      Cell best = choice.anchor_cell;
      double best_d = std::numeric_limits<double>::infinity();
      for (const Cell& d : doorways) {
        const double dist = scene_.euclidean_m(pose_.cell, d);
        if (dist < best_d || (dist == best_d && d < best)) {
          best_d = dist;
          best = d;
        }
      }
      return best;
    }
    Cell best = pose_.cell;  // sentinel: caller treats "here" as no progress
    double best_d = std::numeric_limits<double>::infinity();
    for (const Cell& d : doorways) {
      if (visited_cells_[scene_.index(d)]) continue;
      const double dist = scene_.euclidean_m(pose_.cell, d);
      if (dist < best_d || (dist == best_d && d < best)) {
        best_d = dist;
        best = d;
      }
    }
    return best;
  }

  void finalize() {
    record_.terminal_euclidean_m = min_euclid_to_target(pose_.cell);
    const auto dist = distance_field(scene_, pose_.cell);
    int best = -1;
    for (const Cell& t : target_cells_) {
      const int d = dist[scene_.index(t)];
      if (d >= 0 && (best < 0 || d < best)) best = d;
    }
    record_.terminal_geodesic_m =
        best >= 0 ? scene_.cell_size * best : record_.terminal_euclidean_m;
  }

  const Scene& scene_;
  const Policy& policy_;
  const EpisodeConfig& config_;
  Rng rng_;
  EpisodeRecord record_;
  Pose pose_;
  bool done_ = false;
  int last_instance_ = -1;
  int prev_region_category_ = -1;
  std::vector<char> visited_cells_;
  std::vector<char> visited_instances_;
  std::vector<Cell> target_cells_;
};

}  // namespace

EpisodeRecord run_episode(const Scene& scene, const Policy& policy, int target_category,
                          const Pose& start, const EpisodeConfig& config,
                          std::uint64_t episode_seed) {
  policy.validate();
  EpisodeRunner runner(scene, policy, target_category, start, config, episode_seed);
  return runner.run();
}

}  // namespace srgnav
