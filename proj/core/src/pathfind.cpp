#include "srgnav/pathfind.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <queue>

#include "srgnav/errors.hpp"

namespace srgnav {

namespace {

// Neighbor offsets in (row, col) lexicographic order; BFS ties resolve by
// whichever parent enqueues a cell first under this ordering.
constexpr Cell kNeighborOffsets[4] = {{-1, 0}, {0, -1}, {0, 1}, {1, 0}};

}  // namespace

std::vector<int> distance_field(const Scene& scene, Cell from) {
  std::vector<int> dist(scene.grid.size(), -1);
  if (!scene.in_bounds(from) || scene.blocked(from)) return dist;
  std::queue<Cell> frontier;
  dist[scene.index(from)] = 0;
  frontier.push(from);
  while (!frontier.empty()) {
    const Cell cur = frontier.front();
    frontier.pop();
    const int d = dist[scene.index(cur)];
    for (const Cell& off : kNeighborOffsets) {
      const Cell next{cur.row + off.row, cur.col + off.col};
      if (!scene.in_bounds(next) || scene.blocked(next)) continue;
      if (dist[scene.index(next)] >= 0) continue;
      dist[scene.index(next)] = d + 1;
      frontier.push(next);
    }
  }
  return dist;
}

std::optional<Path> try_geodesic_path(const Scene& scene, Cell from, Cell to) {
  if (!scene.in_bounds(from) || scene.blocked(from) || !scene.in_bounds(to) ||
      scene.blocked(to)) {
    throw DomainError("geodesic_path endpoints must be free in-bounds cells");
  }
  if (from == to) return Path{{from}, 0.0};

  std::vector<std::int32_t> parent(scene.grid.size(), -2);  // -2 unvisited
  std::queue<Cell> frontier;
  parent[scene.index(from)] = -1;
  frontier.push(from);
  bool found = false;
  while (!frontier.empty() && !found) {
    const Cell cur = frontier.front();
    frontier.pop();
    for (const Cell& off : kNeighborOffsets) {
      const Cell next{cur.row + off.row, cur.col + off.col};
      if (!scene.in_bounds(next) || scene.blocked(next)) continue;
      auto& slot = parent[scene.index(next)];
      if (slot != -2) continue;
      slot = static_cast<std::int32_t>(scene.index(cur));
      if (next == to) {
        found = true;
        break;
      }
      frontier.push(next);
    }
  }
  if (!found) return std::nullopt;

  Path path;
  Cell cur = to;
  while (!(cur == from)) {
    path.cells.push_back(cur);
    const std::int32_t p = parent[scene.index(cur)];
    cur = Cell{static_cast<int>(p) / scene.cols, static_cast<int>(p) % scene.cols};
  }
  path.cells.push_back(from);
  std::reverse(path.cells.begin(), path.cells.end());
  path.length_m = scene.cell_size * static_cast<double>(path.cells.size() - 1);
  return path;
}

Path geodesic_path(const Scene& scene, Cell from, Cell to) {
  auto path = try_geodesic_path(scene, from, to);
  if (!path) {
    throw NoPathError("no traversable path between (" + std::to_string(from.row) + "," +
                      std::to_string(from.col) + ") and (" + std::to_string(to.row) + "," +
                      std::to_string(to.col) + ")");
  }
  return *path;
}

std::optional<double> geodesic_distance_m(const Scene& scene, Cell from, Cell to) {
  auto path = try_geodesic_path(scene, from, to);
  if (!path) return std::nullopt;
  return path->length_m;
}

bool line_of_sight(const Scene& scene, Cell a, Cell b) {
  if (a == b) return true;
  const int adr = std::abs(b.row - a.row);
  const int adc = std::abs(b.col - a.col);
  const int step_r = (b.row > a.row) - (b.row < a.row);
  const int step_c = (b.col > a.col) - (b.col < a.col);

  // Exact voxel traversal from center to center. Boundary crossings happen
  // at t = (2k+1)/(2*|d|) per axis; comparing crossings via cross
  // multiplication keeps everything in integers.
  Cell cur = a;
  long kr = 0, kc = 0;
  while (!(cur == b)) {
    bool step_row;
    bool corner = false;
    if (adr == 0) {
      step_row = false;
    } else if (adc == 0) {
      step_row = true;
    } else {
      const long lhs = (2 * kr + 1) * static_cast<long>(adc);
      const long rhs = (2 * kc + 1) * static_cast<long>(adr);
      if (lhs < rhs) {
        step_row = true;
      } else if (rhs < lhs) {
        step_row = false;
      } else {
        corner = true;
        step_row = true;
      }
    }
    if (corner) {
      // The ray passes exactly through a lattice corner; both bracketing
      // cells must be free or sight is blocked.
      const Cell side_a{cur.row + step_r, cur.col};
      const Cell side_b{cur.row, cur.col + step_c};
      if (!scene.in_bounds(side_a) || scene.blocked(side_a)) return false;
      if (!scene.in_bounds(side_b) || scene.blocked(side_b)) return false;
      cur = Cell{cur.row + step_r, cur.col + step_c};
      ++kr;
      ++kc;
    } else if (step_row) {
      cur = Cell{cur.row + step_r, cur.col};
      ++kr;
    } else {
      cur = Cell{cur.row, cur.col + step_c};
      ++kc;
    }
    if (cur == b) break;
    if (!scene.in_bounds(cur) || scene.blocked(cur)) return false;
  }
  return true;
}

std::vector<ObjectInstance> visible_objects(const Scene& scene, const Pose& pose,
                                            double radius_m) {
  if (radius_m <= 0.0) throw DomainError("visibility radius must be positive");
  std::vector<ObjectInstance> out;
  for (const auto& obj : scene.objects) {
    if (scene.euclidean_m(pose.cell, obj.cell) > radius_m) continue;
    if (!line_of_sight(scene, pose.cell, obj.cell)) continue;
    out.push_back(obj);
  }
  std::sort(out.begin(), out.end(), [&](const ObjectInstance& a, const ObjectInstance& b) {
    const double da = scene.euclidean_m(pose.cell, a.cell);
    const double db = scene.euclidean_m(pose.cell, b.cell);
    if (da != db) return da < db;
    return a.id < b.id;
  });
  return out;
}

std::vector<int> region_sequence_of_path(const Scene& scene, std::span<const Cell> path) {
  std::vector<int> out;
  for (const Cell& c : path) {
    const int cat = scene.region_category_at(c);
    if (out.empty() || out.back() != cat) out.push_back(cat);
  }
  return out;
}

}  // namespace srgnav
