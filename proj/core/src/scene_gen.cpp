#include "srgnav/scene_gen.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <optional>
#include <unordered_set>

#include "srgnav/errors.hpp"
#include "srgnav/rng.hpp"

namespace srgnav {

SceneGenConfig SceneGenConfig::basic(CategorySpace space,
                                     std::vector<std::vector<double>> placement) {
  SceneGenConfig config;
  config.space = std::move(space);
  config.region_prior.assign(config.space.regions.size(), 1.0);
  config.placement_prior = std::move(placement);
  return config;
}

void SceneGenConfig::validate() const {
  space.validate();
  if (grid_rows < min_room_span + 2 || grid_cols < min_room_span + 2) {
    throw DomainError("grid too small for one room plus border walls");
  }
  if (cell_size <= 0.0) throw DomainError("cell_size must be positive");
  if (num_regions < 1) throw DomainError("num_regions must be >= 1");
  if (num_regions > 62) throw DomainError("num_regions above the 62-instance file limit");
  if (doorway_width < 1) throw DomainError("doorway_width must be >= 1");
  if (min_room_span < 2) throw DomainError("min_room_span must be >= 2");
  if (extra_door_prob < 0.0 || extra_door_prob > 1.0) {
    throw DomainError("extra_door_prob must lie in [0,1]");
  }
  if (region_prior.size() != space.regions.size()) {
    throw DomainError("region_prior size must match region categories");
  }
  double prior_sum = 0.0;
  for (double w : region_prior) {
    if (w < 0.0) throw DomainError("region_prior weights must be non-negative");
    prior_sum += w;
  }
  if (prior_sum <= 0.0) throw DomainError("region_prior must have positive mass");
  if (placement_prior.size() != space.objects.size()) {
    throw DomainError("placement_prior must have one row per object category");
  }
  for (std::size_t o = 0; o < placement_prior.size(); ++o) {
    if (placement_prior[o].size() != space.regions.size()) {
      throw DomainError("placement_prior rows must have one column per region category");
    }
    double best = 0.0;
    for (double p : placement_prior[o]) {
      if (p < 0.0 || p > 1.0) throw DomainError("placement probabilities must lie in [0,1]");
      best = std::max(best, p);
    }
    if (best <= 0.0) {
      throw DomainError("object category '" + space.objects[o] +
                        "' is not placeable in any region");
    }
  }
}

namespace {

struct RoomRect {
  int r0, c0, r1, c1;  // inclusive interior bounds

  int height() const { return r1 - r0 + 1; }
  int width() const { return c1 - c0 + 1; }
  long area() const { return static_cast<long>(height()) * width(); }
};

struct WallSegment {
  int room_a, room_b;  // leaf indices, a < b
  bool vertical_wall;  // true: wall is a column between horizontally adjacent rooms
  int wall_line;       // the blocked row/col holding the wall
  int lo, hi;          // inclusive overlap range along the wall
};

std::vector<WallSegment> shared_walls(const std::vector<RoomRect>& rooms) {
  std::vector<WallSegment> segments;
  for (std::size_t a = 0; a < rooms.size(); ++a) {
    for (std::size_t b = a + 1; b < rooms.size(); ++b) {
      const RoomRect& ra = rooms[a];
      const RoomRect& rb = rooms[b];
      // Horizontally adjacent across a single wall column.
      if (ra.c1 + 2 == rb.c0 || rb.c1 + 2 == ra.c0) {
        const int wall = (ra.c1 + 2 == rb.c0) ? ra.c1 + 1 : rb.c1 + 1;
        const int lo = std::max(ra.r0, rb.r0);
        const int hi = std::min(ra.r1, rb.r1);
        if (lo <= hi) {
          segments.push_back({static_cast<int>(a), static_cast<int>(b), true, wall, lo, hi});
        }
      }
      // Vertically adjacent across a single wall row.
      if (ra.r1 + 2 == rb.r0 || rb.r1 + 2 == ra.r0) {
        const int wall = (ra.r1 + 2 == rb.r0) ? ra.r1 + 1 : rb.r1 + 1;
        const int lo = std::max(ra.c0, rb.c0);
        const int hi = std::min(ra.c1, rb.c1);
        if (lo <= hi) {
          segments.push_back({static_cast<int>(a), static_cast<int>(b), false, wall, lo, hi});
        }
      }
    }
  }
  return segments;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool merge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

std::optional<Scene> attempt_generate(const SceneGenConfig& config, std::uint64_t seed,
                                      Rng& rng) {
  const int rows = config.grid_rows;
  const int cols = config.grid_cols;
  const int min_span = config.min_room_span;

  // Binary space partition of the interior; each split consumes one wall line.
  std::vector<RoomRect> rooms{{1, 1, rows - 2, cols - 2}};
  while (static_cast<int>(rooms.size()) < config.num_regions) {
    int best = -1;
    for (std::size_t i = 0; i < rooms.size(); ++i) {
      const bool splittable =
          rooms[i].height() >= 2 * min_span + 1 || rooms[i].width() >= 2 * min_span + 1;
      if (!splittable) continue;
      if (best < 0 || rooms[i].area() > rooms[best].area()) best = static_cast<int>(i);
    }
    if (best < 0) return std::nullopt;  // cannot reach the requested room count

    RoomRect room = rooms[best];
    const bool can_h = room.height() >= 2 * min_span + 1;
    const bool can_v = room.width() >= 2 * min_span + 1;
    bool horizontal;
    if (can_h && can_v) {
      horizontal = room.height() > room.width() ||
                   (room.height() == room.width() && rng.bernoulli(0.5));
    } else {
      horizontal = can_h;
    }
    if (horizontal) {
      const int wall = rng.uniform_int(room.r0 + min_span, room.r1 - min_span);
      rooms[best] = {room.r0, room.c0, wall - 1, room.c1};
      rooms.push_back({wall + 1, room.c0, room.r1, room.c1});
    } else {
      const int wall = rng.uniform_int(room.c0 + min_span, room.c1 - min_span);
      rooms[best] = {room.r0, room.c0, room.r1, wall - 1};
      rooms.push_back({room.r0, wall + 1, room.r1, room.c1});
    }
  }

  Scene scene;
  char id_buf[32];
  std::snprintf(id_buf, sizeof(id_buf), "scene-%016llx",
                static_cast<unsigned long long>(seed));
  scene.id = id_buf;
  scene.rows = rows;
  scene.cols = cols;
  scene.cell_size = config.cell_size;
  scene.grid.assign(static_cast<std::size_t>(rows) * cols, -1);

  scene.regions.resize(rooms.size());
  for (std::size_t i = 0; i < rooms.size(); ++i) {
    RegionInstance& inst = scene.regions[i];
    inst.id = static_cast<int>(i);
    inst.category = static_cast<int>(rng.categorical(config.region_prior));
    for (int r = rooms[i].r0; r <= rooms[i].r1; ++r) {
      for (int c = rooms[i].c0; c <= rooms[i].c1; ++c) {
        inst.cells.push_back({r, c});
        scene.grid[scene.index({r, c})] = static_cast<std::int16_t>(i);
      }
    }
  }

  // Doors: spanning tree over shared-wall segments guarantees the region
  // adjacency graph is connected; extra doors open with a fixed probability.
  auto segments = shared_walls(rooms);
  if (rooms.size() > 1 && segments.empty()) return std::nullopt;
  for (std::size_t i = segments.size(); i > 1; --i) {
    std::swap(segments[i - 1], segments[rng.uniform_int(0, static_cast<int>(i) - 1)]);
  }
  UnionFind components(rooms.size());
  std::vector<const WallSegment*> to_open;
  std::vector<const WallSegment*> optional_segments;
  for (const auto& seg : segments) {
    if (components.merge(seg.room_a, seg.room_b)) {
      to_open.push_back(&seg);
    } else {
      optional_segments.push_back(&seg);
    }
  }
  for (std::size_t i = 1; i < rooms.size(); ++i) {
    if (components.find(static_cast<int>(i)) != components.find(0)) return std::nullopt;
  }
  for (const auto* seg : optional_segments) {
    if (rng.bernoulli(config.extra_door_prob)) to_open.push_back(seg);
  }

  for (const auto* seg : to_open) {
    const int span = seg->hi - seg->lo + 1;
    const int width = std::min(config.doorway_width, span);
    const int start = rng.uniform_int(seg->lo, seg->hi - width + 1);
    const int owner = std::min(seg->room_a, seg->room_b);
    const int other = std::max(seg->room_a, seg->room_b);
    for (int k = 0; k < width; ++k) {
      const Cell door = seg->vertical_wall ? Cell{start + k, seg->wall_line}
                                           : Cell{seg->wall_line, start + k};
      scene.grid[scene.index(door)] = static_cast<std::int16_t>(owner);
      scene.regions[owner].cells.push_back(door);
      scene.regions[owner].doorways.push_back(door);
      scene.regions[other].doorways.push_back(door);
    }
  }
  for (auto& inst : scene.regions) {
    std::sort(inst.cells.begin(), inst.cells.end());
    std::sort(inst.doorways.begin(), inst.doorways.end());
  }

  // Object placement: one Bernoulli draw per (room, object category), the
  // instance dropped on a free non-doorway cell of the room.
  int next_object_id = 0;
  for (std::size_t i = 0; i < rooms.size(); ++i) {
    const RegionInstance& inst = scene.regions[i];
    std::unordered_set<std::size_t> used;
    std::vector<Cell> placeable;
    for (const Cell& c : inst.cells) {
      if (!std::binary_search(inst.doorways.begin(), inst.doorways.end(), c)) {
        placeable.push_back(c);
      }
    }
    for (std::size_t o = 0; o < config.space.objects.size(); ++o) {
      const double p = config.placement_prior[o][inst.category];
      if (p <= 0.0 || !rng.bernoulli(p)) continue;
      if (used.size() == placeable.size()) break;  // room is full
      Cell cell;
      do {
        cell = placeable[rng.uniform_int(0, static_cast<int>(placeable.size()) - 1)];
      } while (used.count(scene.index(cell)));
      used.insert(scene.index(cell));
      scene.objects.push_back({next_object_id++, static_cast<int>(o), cell});
    }
  }
  return scene;
}

}  // namespace

Scene generate_scene(const SceneGenConfig& config, std::uint64_t seed) {
  config.validate();
  constexpr int kMaxAttempts = 32;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(attempt)));
    auto scene = attempt_generate(config, seed, rng);
    if (scene) {
      scene->validate(config.space);
      return std::move(*scene);
    }
  }
  throw GenerationError("scene generation failed after " + std::to_string(kMaxAttempts) +
                        " attempts (room count or connectivity unreachable for this grid)");
}

}  // namespace srgnav
