#include "srgnav/scene.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_set>

#include "srgnav/errors.hpp"

namespace srgnav {

double Scene::euclidean_m(Cell a, Cell b) const {
  const double dr = a.row - b.row;
  const double dc = a.col - b.col;
  return cell_size * std::sqrt(dr * dr + dc * dc);
}

std::vector<int> Scene::adjacent_instances(int instance) const {
  std::vector<int> out;
  for (const Cell& d : regions[instance].doorways) {
    const int owner = instance_at(d);
    if (owner != instance && owner >= 0) out.push_back(owner);
    // A doorway owned by this instance connects to the free neighbors of
    // another instance.
    const Cell neighbors[4] = {{d.row - 1, d.col}, {d.row, d.col - 1},
                               {d.row, d.col + 1}, {d.row + 1, d.col}};
    for (const Cell& n : neighbors) {
      if (!in_bounds(n) || blocked(n)) continue;
      const int other = instance_at(n);
      if (other != instance) out.push_back(other);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Cell Scene::instance_centroid_cell(int instance) const {
  const auto& cells = regions[instance].cells;
  double mean_r = 0.0, mean_c = 0.0;
  for (const Cell& c : cells) {
    mean_r += c.row;
    mean_c += c.col;
  }
  mean_r /= static_cast<double>(cells.size());
  mean_c /= static_cast<double>(cells.size());
  Cell best = cells.front();
  double best_d = 1e300;
  for (const Cell& c : cells) {
    const double d = (c.row - mean_r) * (c.row - mean_r) + (c.col - mean_c) * (c.col - mean_c);
    if (d < best_d - 1e-12 || (std::abs(d - best_d) <= 1e-12 && c < best)) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

void Scene::validate(const CategorySpace& space) const {
  if (rows <= 0 || cols <= 0 || grid.size() != static_cast<std::size_t>(rows) * cols) {
    throw DomainError("scene '" + id + "': grid dimensions inconsistent");
  }
  if (cell_size <= 0.0) throw DomainError("scene '" + id + "': cell_size must be positive");
  if (regions.empty()) throw DomainError("scene '" + id + "': no region instances");

  // Free cells and instance cell lists must tile each other exactly.
  std::vector<char> seen(grid.size(), 0);
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const auto& inst = regions[i];
    if (inst.id != static_cast<int>(i)) {
      throw DomainError("scene '" + id + "': region instance ids must be dense");
    }
    if (inst.category < 0 || inst.category >= static_cast<int>(space.regions.size())) {
      throw DomainError("scene '" + id + "': region category out of range");
    }
    if (inst.cells.empty()) throw DomainError("scene '" + id + "': empty region instance");
    for (const Cell& c : inst.cells) {
      if (!in_bounds(c) || instance_at(c) != inst.id) {
        throw DomainError("scene '" + id + "': grid/instance cell mismatch");
      }
      if (seen[index(c)]++) {
        throw DomainError("scene '" + id + "': cell owned by two instances");
      }
    }
    // 4-connectivity of the instance itself.
    std::unordered_set<long> member;
    for (const Cell& c : inst.cells) member.insert(static_cast<long>(index(c)));
    std::queue<Cell> frontier;
    std::unordered_set<long> reached;
    frontier.push(inst.cells.front());
    reached.insert(static_cast<long>(index(inst.cells.front())));
    while (!frontier.empty()) {
      const Cell cur = frontier.front();
      frontier.pop();
      const Cell neighbors[4] = {{cur.row - 1, cur.col}, {cur.row, cur.col - 1},
                                 {cur.row, cur.col + 1}, {cur.row + 1, cur.col}};
      for (const Cell& n : neighbors) {
        if (!in_bounds(n)) continue;
        const long key = static_cast<long>(index(n));
        if (member.count(key) && !reached.count(key)) {
          reached.insert(key);
          frontier.push(n);
        }
      }
    }
    if (reached.size() != inst.cells.size()) {
      throw DomainError("scene '" + id + "': region instance not 4-connected");
    }
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] >= 0 && !seen[i]) {
      throw DomainError("scene '" + id + "': free cell not owned by any instance");
    }
    if (grid[i] >= static_cast<int>(regions.size())) {
      throw DomainError("scene '" + id + "': grid references unknown instance");
    }
  }

  for (const auto& obj : objects) {
    if (obj.category < 0 || obj.category >= static_cast<int>(space.objects.size())) {
      throw DomainError("scene '" + id + "': object category out of range");
    }
    if (!in_bounds(obj.cell) || blocked(obj.cell)) {
      throw DomainError("scene '" + id + "': object on blocked cell");
    }
  }

  // Region-connectivity graph (instances linked by shared doorways) must be
  // connected.
  if (regions.size() > 1) {
    std::vector<char> reached(regions.size(), 0);
    std::queue<int> frontier;
    frontier.push(0);
    reached[0] = 1;
    std::size_t count = 1;
    while (!frontier.empty()) {
      const int cur = frontier.front();
      frontier.pop();
      for (int next : adjacent_instances(cur)) {
        if (!reached[next]) {
          reached[next] = 1;
          ++count;
          frontier.push(next);
        }
      }
    }
    if (count != regions.size()) {
      throw DomainError("scene '" + id + "': region adjacency graph disconnected");
    }
  }
}

}  // namespace srgnav
