#pragma once

#include <string>
#include <utility>
#include <vector>

#include "srgnav/scene.hpp"

namespace srgnav {

/// Per-scene graph: region-instance nodes, object-instance nodes, adjacency
/// edges between doorway-sharing instances and one includes edge per object.
struct SceneGraph {
  struct RegionNode {
    int instance_id = 0;
    int category = 0;
  };
  struct ObjectNode {
    int instance_id = 0;
    int category = 0;
  };

  std::string scene_id;
  std::vector<RegionNode> region_nodes;
  std::vector<ObjectNode> object_nodes;
  std::vector<std::pair<int, int>> adjacency_edges;  // region instance ids, a < b
  std::vector<std::pair<int, int>> includes_edges;   // (object id, region instance id)
};

SceneGraph extract_scene_graph(const Scene& scene);

}  // namespace srgnav
