#include "srgnav/scene_graph.hpp"

#include <algorithm>

namespace srgnav {

SceneGraph extract_scene_graph(const Scene& scene) {
  SceneGraph graph;
  graph.scene_id = scene.id;
  for (const auto& inst : scene.regions) {
    graph.region_nodes.push_back({inst.id, inst.category});
  }
  for (const auto& obj : scene.objects) {
    graph.object_nodes.push_back({obj.id, obj.category});
    graph.includes_edges.emplace_back(obj.id, scene.instance_at(obj.cell));
  }
  for (const auto& inst : scene.regions) {
    for (int other : scene.adjacent_instances(inst.id)) {
      if (inst.id < other) graph.adjacency_edges.emplace_back(inst.id, other);
    }
  }
  std::sort(graph.adjacency_edges.begin(), graph.adjacency_edges.end());
  graph.adjacency_edges.erase(
      std::unique(graph.adjacency_edges.begin(), graph.adjacency_edges.end()),
      graph.adjacency_edges.end());
  return graph;
}

}  // namespace srgnav
