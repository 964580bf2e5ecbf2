#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "srgnav/errors.hpp"
#include "srgnav/metrics.hpp"
#include "srgnav/rng.hpp"
#include "srgnav/scene_gen.hpp"
#include "test_fixtures.hpp"

using namespace srgnav;
using namespace srgnav::testing;

namespace {

EpisodeRecord record_of(bool success, double l, double p, double d_geo, double d_euc) {
  EpisodeRecord r;
  r.scene_id = "s";
  r.success = success;
  r.shortest_length_m = l;
  r.path_length_m = p;
  r.terminal_geodesic_m = d_geo;
  r.terminal_euclidean_m = d_euc;
  return r;
}

std::vector<EpisodeRecord> random_records(Rng& rng, int count) {
  std::vector<EpisodeRecord> records;
  for (int i = 0; i < count; ++i) {
    const bool success = rng.bernoulli(0.5);
    const double l = 0.5 + 10.0 * rng.uniform_real();
    const double p = success ? l + 5.0 * rng.uniform_real() : 20.0 * rng.uniform_real();
    const double d = success ? 0.8 * rng.uniform_real() : 6.0 * rng.uniform_real();
    records.push_back(record_of(success, l, p, d, d));
  }
  return records;
}

}  // namespace

TEST_CASE("spl: formula basics") {
  CHECK(spl(std::vector<EpisodeRecord>{record_of(true, 5.0, 10.0, 0, 0)}) ==
        doctest::Approx(0.5));
  CHECK(spl(std::vector<EpisodeRecord>{record_of(false, 5.0, 10.0, 4, 4)}) == 0.0);
  CHECK_THROWS_AS(spl({}), DomainError);
  CHECK_THROWS_AS(spl(std::vector<EpisodeRecord>{record_of(true, 0.0, 1.0, 0, 0)}),
                  DomainError);
}

TEST_CASE("soft_spl: progress endpoints") {
  // d == 0 and p == l: full credit.
  CHECK(soft_spl(std::vector<EpisodeRecord>{record_of(false, 4.0, 4.0, 0.0, 0.0)}) ==
        doctest::Approx(1.0));
  // d == l: zero progress regardless of p.
  CHECK(soft_spl(std::vector<EpisodeRecord>{record_of(false, 4.0, 9.0, 4.0, 4.0)}) ==
        doctest::Approx(0.0));
}

TEST_CASE("dts: clamped distance beyond the success radius") {
  CHECK(dts(record_of(false, 5, 5, 3.0, 3.0)) == doctest::Approx(2.0));
  CHECK(dts(record_of(true, 5, 5, 0.8, 0.8)) == 0.0);
  const std::vector<EpisodeRecord> batch{record_of(false, 5, 5, 3.0, 3.0),
                                         record_of(true, 5, 5, 0.8, 0.8)};
  CHECK(mean_dts(batch) == doctest::Approx(1.0));
}

TEST_CASE("success_rate: ratios") {
  std::vector<EpisodeRecord> records;
  for (int i = 0; i < 10; ++i) records.push_back(record_of(i < 7, 1.0, 1.0, 0, 0));
  CHECK(success_rate(records) == doctest::Approx(0.7));
  CHECK(success_rate(std::vector<EpisodeRecord>(records.begin(), records.begin() + 7)) ==
        1.0);
  CHECK_THROWS_AS(success_rate({}), DomainError);
}

TEST_CASE("metrics: 20 random record sets match direct recomputation") {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const auto records = random_records(rng, rng.uniform_int(1, 30));
    double want_spl = 0, want_soft = 0, want_success = 0, want_dts = 0;
    for (const auto& r : records) {
      want_success += r.success ? 1.0 : 0.0;
      want_spl += r.success
                      ? r.shortest_length_m / std::max(r.path_length_m, r.shortest_length_m)
                      : 0.0;
      want_soft += (1.0 - r.terminal_geodesic_m /
                              std::max(r.shortest_length_m, r.terminal_geodesic_m)) *
                   (r.shortest_length_m / std::max(r.path_length_m, r.shortest_length_m));
      want_dts += std::max(r.terminal_euclidean_m - 1.0, 0.0);
    }
    const double n = static_cast<double>(records.size());
    CHECK(std::abs(spl(records) - want_spl / n) < 1e-12);
    CHECK(std::abs(soft_spl(records) - want_soft / n) < 1e-12);
    CHECK(std::abs(success_rate(records) - want_success / n) < 1e-12);
    CHECK(std::abs(mean_dts(records) - want_dts / n) < 1e-12);

    // SPL can never exceed Success.
    CHECK(spl(records) <= success_rate(records) + 1e-15);

    // Permutation invariance.
    auto shuffled = records;
    std::reverse(shuffled.begin(), shuffled.end());
    CHECK(std::abs(spl(shuffled) - spl(records)) < 1e-12);
    CHECK(std::abs(soft_spl(shuffled) - soft_spl(records)) < 1e-12);
    CHECK(std::abs(mean_dts(shuffled) - mean_dts(records)) < 1e-12);
  }
}

TEST_CASE("metrics: per-episode SoftSPL term equals SPL term when d_i = 0") {
  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const double l = 0.5 + 10.0 * rng.uniform_real();
    const double p = l + 5.0 * rng.uniform_real();
    const auto success_record = record_of(true, l, p, 0.0, 0.0);
    const std::vector<EpisodeRecord> one{success_record};
    CHECK(soft_spl(one) == doctest::Approx(spl(one)).epsilon(1e-15));
  }
}

TEST_CASE("make_episode_specs: deterministic, positive l_i, identical across policies") {
  SceneGenConfig config = peaked_config(tiny_space());
  config.grid_rows = 26;
  config.grid_cols = 26;
  config.num_regions = 4;
  std::vector<Scene> scenes;
  for (int s = 0; s < 2; ++s) {
    scenes.push_back(generate_scene(config, 70 + static_cast<std::uint64_t>(s)));
  }
  const auto specs = make_episode_specs(scenes, 5, 99);
  CHECK(specs.size() == 10);
  for (const auto& spec : specs) {
    const Scene& scene = scenes[spec.scene_index];
    CHECK(!scene.blocked(spec.start.cell));
    bool has_target = false;
    for (const auto& obj : scene.objects) {
      has_target |= obj.category == spec.target && !(obj.cell == spec.start.cell);
    }
    CHECK(has_target);
  }
  const auto again = make_episode_specs(scenes, 5, 99);
  CHECK(episode_spec_hash(specs, scenes) == episode_spec_hash(again, scenes));
}

TEST_CASE("compare_policies: pairing, reports, and asset validation") {
  SceneGenConfig config = peaked_config(tiny_space());
  config.grid_rows = 26;
  config.grid_cols = 26;
  config.num_regions = 4;
  const std::vector<Scene> scenes{generate_scene(config, 500)};
  EpisodeConfig episode_config;
  episode_config.max_steps = 60;

  SUBCASE("single policy, single scene, one row") {
    const std::vector<PolicyRun> runs{{"random", Policy{PolicyKind::Random}}};
    const CompareResult result =
        compare_policies(scenes, runs, 3, episode_config, 7, 1);
    REQUIRE(result.reports.size() == 1);
    CHECK(result.reports[0].per_scene.size() == 1);
    CHECK(result.reports[0].aggregate.episodes == 3);
  }

  SUBCASE("two policies share identical episode specifications") {
    const std::vector<PolicyRun> runs{
        {"random", Policy{PolicyKind::Random}},
        {"greedy_unexplored", Policy{PolicyKind::GreedyUnexplored}}};
    const CompareResult result =
        compare_policies(scenes, runs, 4, episode_config, 7, 2);
    REQUIRE(result.reports.size() == 2);
    CHECK(result.reports[0].spec_hash == result.reports[1].spec_hash);
    // Same (scene, start, target) per index.
    for (std::size_t i = 0; i < result.records[0].size(); ++i) {
      CHECK(result.records[0][i].target == result.records[1][i].target);
      CHECK(result.records[0][i].start.cell == result.records[1][i].start.cell);
    }
  }

  SUBCASE("missing assets fail before any episode runs") {
    const std::vector<PolicyRun> runs{{"srg_gcn", Policy{PolicyKind::SrgGcn}}};
    CHECK_THROWS_AS(compare_policies(scenes, runs, 3, episode_config, 7, 1),
                    DependencyError);
  }

  SUBCASE("worker count does not change the outcome") {
    const std::vector<PolicyRun> runs{{"random", Policy{PolicyKind::Random}}};
    const CompareResult a = compare_policies(scenes, runs, 6, episode_config, 7, 1);
    const CompareResult b = compare_policies(scenes, runs, 6, episode_config, 7, 4);
    CHECK(a.reports[0].aggregate.success == b.reports[0].aggregate.success);
    CHECK(a.reports[0].aggregate.spl == b.reports[0].aggregate.spl);
    CHECK(a.reports[0].aggregate.dts_mean_m == b.reports[0].aggregate.dts_mean_m);
  }
}

TEST_CASE("format_report_table: golden rendering") {
  MetricsReport report;
  report.policy = "random";
  report.per_scene.push_back({"scene-a", 10, 0.5, 0.25, 0.3, 1.5});
  report.aggregate = {"ALL", 10, 0.5, 0.25, 0.3, 1.5};
  const std::string table = format_report_table(std::vector<MetricsReport>{report});
  const std::string golden =
      "policy             scene                     episodes   success       spl"
      "   softspl     dts_m\n"
      "random             scene-a                         10    0.5000    0.2500"
      "    0.3000    1.5000\n"
      "random             ALL                             10    0.5000    0.2500"
      "    0.3000    1.5000\n";
  CHECK(table == golden);
}
