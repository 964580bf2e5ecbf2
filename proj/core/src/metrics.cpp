#include "srgnav/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "srgnav/errors.hpp"
#include "srgnav/pathfind.hpp"
#include "srgnav/rng.hpp"

namespace srgnav {

namespace {

void require_records(std::span<const EpisodeRecord> records, const char* what) {
  if (records.empty()) throw DomainError(std::string(what) + ": empty record set");
  for (const auto& r : records) {
    if (r.shortest_length_m <= 0.0) {
      throw DomainError(std::string(what) + ": episode with l_i <= 0");
    }
  }
}

}  // namespace

double spl(std::span<const EpisodeRecord> records) {
  require_records(records, "spl");
  double sum = 0.0;
  for (const auto& r : records) {
    if (!r.success) continue;
    sum += r.shortest_length_m / std::max(r.path_length_m, r.shortest_length_m);
  }
  return sum / static_cast<double>(records.size());
}

double soft_spl(std::span<const EpisodeRecord> records) {
  require_records(records, "soft_spl");
  double sum = 0.0;
  for (const auto& r : records) {
    const double d = r.terminal_geodesic_m;
    const double progress = 1.0 - d / std::max(r.shortest_length_m, d);
    sum += progress * (r.shortest_length_m / std::max(r.path_length_m, r.shortest_length_m));
  }
  return sum / static_cast<double>(records.size());
}

double dts(const EpisodeRecord& record, double success_radius_m) {
  return std::max(record.terminal_euclidean_m - success_radius_m, 0.0);
}

double mean_dts(std::span<const EpisodeRecord> records, double success_radius_m) {
  if (records.empty()) throw DomainError("mean_dts: empty record set");
  double sum = 0.0;
  for (const auto& r : records) sum += dts(r, success_radius_m);
  return sum / static_cast<double>(records.size());
}

double success_rate(std::span<const EpisodeRecord> records) {
  if (records.empty()) throw DomainError("success_rate: empty record set");
  double sum = 0.0;
  for (const auto& r : records) sum += r.success ? 1.0 : 0.0;
  return sum / static_cast<double>(records.size());
}

std::vector<EpisodeSpec> make_episode_specs(std::span<const Scene> scenes,
                                            int episodes_per_scene, std::uint64_t seed) {
  if (scenes.empty()) throw DomainError("make_episode_specs: no scenes");
  if (episodes_per_scene < 1) throw DomainError("episodes_per_scene must be >= 1");
  std::vector<EpisodeSpec> specs;
  specs.reserve(scenes.size() * static_cast<std::size_t>(episodes_per_scene));
  for (std::size_t si = 0; si < scenes.size(); ++si) {
    const Scene& scene = scenes[si];
    std::set<int> present_set;
    for (const auto& obj : scene.objects) present_set.insert(obj.category);
    if (present_set.empty()) {
      throw DomainError("scene '" + scene.id + "' has no objects to navigate to");
    }
    const std::vector<int> present(present_set.begin(), present_set.end());
    for (int e = 0; e < episodes_per_scene; ++e) {
      Rng rng(Rng::mix(Rng::mix(seed, si), static_cast<std::uint64_t>(e)));
      EpisodeSpec spec;
      spec.scene_index = si;
      // Rejection-sample a free start with a strictly positive shortest
      // path to the chosen target category.
      for (int attempt = 0;; ++attempt) {
        if (attempt >= 1000) {
          throw GenerationError("could not sample a start pose with l_i > 0 in scene '" +
                                scene.id + "'");
        }
        spec.target = present[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<int>(present.size()) - 1))];
        const Cell cell{rng.uniform_int(0, scene.rows - 1),
                        rng.uniform_int(0, scene.cols - 1)};
        if (scene.blocked(cell)) continue;
        const auto dist = distance_field(scene, cell);
        int best = -1;
        for (const auto& obj : scene.objects) {
          if (obj.category != spec.target) continue;
          const int d = dist[scene.index(obj.cell)];
          if (d >= 0 && (best < 0 || d < best)) best = d;
        }
        if (best <= 0) continue;  // unreachable or start on the object itself
        spec.start = Pose{cell, rng.uniform_int(0, kHeadingCount - 1)};
        break;
      }
      spec.seed = rng.next_u64();
      specs.push_back(spec);
    }
  }
  return specs;
}

std::string episode_spec_hash(std::span<const EpisodeSpec> specs,
                              std::span<const Scene> scenes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  auto feed = [&h](const std::string& text) {
    for (unsigned char c : text) {
      h ^= c;
      h *= 0x100000001B3ULL;
    }
  };
  for (const auto& s : specs) {
    feed(scenes[s.scene_index].id);
    feed("|" + std::to_string(s.start.cell.row) + "," + std::to_string(s.start.cell.col) +
         "," + std::to_string(s.start.heading) + "|" + std::to_string(s.target) + "|" +
         std::to_string(s.seed) + ";");
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

namespace {

SceneMetricsRow make_row(const std::string& scene_id,
                         std::span<const EpisodeRecord> records) {
  SceneMetricsRow row;
  row.scene_id = scene_id;
  row.episodes = records.size();
  row.success = success_rate(records);
  row.spl = spl(records);
  row.soft_spl = soft_spl(records);
  row.dts_mean_m = mean_dts(records);
  return row;
}

}  // namespace

CompareResult compare_policies(std::span<const Scene> scenes,
                               std::span<const PolicyRun> policies,
                               int episodes_per_scene, const EpisodeConfig& config,
                               std::uint64_t seed, int workers) {
  if (policies.empty()) throw DomainError("compare_policies: no policies");
  for (const auto& run : policies) run.policy.validate();  // fail before any episode

  CompareResult result;
  result.specs = make_episode_specs(scenes, episodes_per_scene, seed);
  const std::string spec_hash = episode_spec_hash(result.specs, scenes);

  for (const auto& run : policies) {
    std::vector<EpisodeRecord> records(result.specs.size());
    const int thread_count = std::max(1, workers);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= result.specs.size()) return;
        const EpisodeSpec& spec = result.specs[i];
        try {
          records[i] = run_episode(scenes[spec.scene_index], run.policy, spec.target,
                                   spec.start, config, spec.seed);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    };
    if (thread_count == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    MetricsReport report;
    report.policy = run.name;
    report.spec_hash = spec_hash;
    report.config = config;
    report.seed = seed;
    for (std::size_t si = 0; si < scenes.size(); ++si) {
      std::vector<EpisodeRecord> subset;
      for (std::size_t i = 0; i < result.specs.size(); ++i) {
        if (result.specs[i].scene_index == si) subset.push_back(records[i]);
      }
      report.per_scene.push_back(make_row(scenes[si].id, subset));
    }
    report.aggregate = make_row("ALL", records);
    result.reports.push_back(std::move(report));
    result.records.push_back(std::move(records));
  }
  return result;
}

std::string format_report_table(std::span<const MetricsReport> reports) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-18s %-24s %9s %9s %9s %9s %9s\n", "policy", "scene",
                "episodes", "success", "spl", "softspl", "dts_m");
  out << line;
  for (const auto& report : reports) {
    for (const auto& row : report.per_scene) {
      std::snprintf(line, sizeof(line), "%-18s %-24s %9zu %9.4f %9.4f %9.4f %9.4f\n",
                    report.policy.c_str(), row.scene_id.c_str(), row.episodes, row.success,
                    row.spl, row.soft_spl, row.dts_mean_m);
      out << line;
    }
    const auto& row = report.aggregate;
    std::snprintf(line, sizeof(line), "%-18s %-24s %9zu %9.4f %9.4f %9.4f %9.4f\n",
                  report.policy.c_str(), row.scene_id.c_str(), row.episodes, row.success,
                  row.spl, row.soft_spl, row.dts_mean_m);
    out << line;
  }
  return out.str();
}

}  // namespace srgnav
