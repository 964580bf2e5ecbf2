#include "srgnav/srg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "srgnav/errors.hpp"

namespace srgnav {

namespace {

// Deterministic edge ordering: includes edges first (object, region), then
// adjacency edges (a, b).
void append_edges_from_tables(Srg& srg) {
  const std::size_t num_regions = srg.space.regions.size();
  const std::size_t num_objects = srg.space.objects.size();
  srg.edges.clear();
  for (std::size_t o = 0; o < num_objects; ++o) {
    for (std::size_t r = 0; r < num_regions; ++r) {
      const long count = srg.includes_count[o][r];
      if (count <= 0 || srg.region_freq[r] <= 0) continue;
      double weight = static_cast<double>(count) / static_cast<double>(srg.region_freq[r]);
      weight = std::min(weight, 1.0);
      srg.edges.push_back({SrgEdgeType::Includes, static_cast<int>(o),
                           static_cast<int>(r), weight, count});
    }
  }
  for (std::size_t a = 0; a < num_regions; ++a) {
    for (std::size_t b = a; b < num_regions; ++b) {
      const long count = srg.co_adjacency[a][b];
      if (count <= 0) continue;
      const long denom = std::min(srg.region_freq[a], srg.region_freq[b]);
      if (denom <= 0) continue;
      double weight = static_cast<double>(count) / static_cast<double>(denom);
      weight = std::min(weight, 1.0);
      srg.edges.push_back({SrgEdgeType::Adjacency, static_cast<int>(a),
                           static_cast<int>(b), weight, count});
    }
  }
}

}  // namespace

void Srg::rebuild_lookup() {
  const std::size_t num_regions = space.regions.size();
  includes_lookup.assign(space.objects.size() * num_regions, 0.0);
  adjacency_lookup.assign(num_regions * num_regions, 0.0);
  for (const auto& e : edges) {
    if (e.type == SrgEdgeType::Includes) {
      includes_lookup[static_cast<std::size_t>(e.a) * num_regions + e.b] = e.weight;
    } else {
      adjacency_lookup[static_cast<std::size_t>(e.a) * num_regions + e.b] = e.weight;
      adjacency_lookup[static_cast<std::size_t>(e.b) * num_regions + e.a] = e.weight;
    }
  }
}

double Srg::includes_weight(int object_cat, int region_cat) const {
  return includes_lookup[static_cast<std::size_t>(object_cat) * space.regions.size() +
                         region_cat];
}

double Srg::adjacency_weight(int region_a, int region_b) const {
  return adjacency_lookup[static_cast<std::size_t>(region_a) * space.regions.size() +
                          region_b];
}

Srg build_srg(std::span<const SceneGraph> scene_graphs, const CategorySpace& space) {
  if (scene_graphs.empty()) throw DomainError("build_srg needs at least one scene graph");
  space.validate();

  Srg srg;
  srg.space = space;
  srg.scene_graph_count = static_cast<long>(scene_graphs.size());
  const std::size_t num_regions = space.regions.size();
  const std::size_t num_objects = space.objects.size();
  srg.region_freq.assign(num_regions, 0);
  srg.includes_count.assign(num_objects, std::vector<long>(num_regions, 0));
  srg.co_adjacency.assign(num_regions, std::vector<long>(num_regions, 0));

  for (const auto& graph : scene_graphs) {
    // Instance-level counting: a category occurring twice in one scene
    // counts twice, matching frequency-without-deduplication semantics.
    std::vector<int> instance_category;
    for (const auto& node : graph.region_nodes) {
      if (node.instance_id != static_cast<int>(instance_category.size())) {
        throw DomainError("scene graph '" + graph.scene_id +
                          "': region instance ids must be dense");
      }
      if (node.category < 0 || node.category >= static_cast<int>(num_regions)) {
        throw DomainError("scene graph '" + graph.scene_id + "': bad region category");
      }
      instance_category.push_back(node.category);
      ++srg.region_freq[node.category];
    }
    std::vector<int> object_category(graph.object_nodes.size(), -1);
    for (const auto& node : graph.object_nodes) {
      if (node.category < 0 || node.category >= static_cast<int>(num_objects)) {
        throw DomainError("scene graph '" + graph.scene_id + "': bad object category");
      }
      if (node.instance_id < 0 ||
          node.instance_id >= static_cast<int>(object_category.size())) {
        throw DomainError("scene graph '" + graph.scene_id +
                          "': object instance ids must be dense");
      }
      object_category[node.instance_id] = node.category;
    }
    for (const auto& [object_id, region_instance] : graph.includes_edges) {
      const int o = object_category.at(object_id);
      const int r = instance_category.at(region_instance);
      ++srg.includes_count[o][r];
    }
    for (const auto& [inst_a, inst_b] : graph.adjacency_edges) {
      const int ra = instance_category.at(inst_a);
      const int rb = instance_category.at(inst_b);
      ++srg.co_adjacency[std::min(ra, rb)][std::max(ra, rb)];
      if (ra != rb) ++srg.co_adjacency[std::max(ra, rb)][std::min(ra, rb)];
    }
  }

  append_edges_from_tables(srg);
  srg.rebuild_lookup();
  return srg;
}

PrunedSrg prune_srg(const Srg& srg, double threshold) {
  if (threshold < 0.0 || threshold > 1.0) {
    throw DomainError("prune threshold must lie in [0,1]");
  }
  PrunedSrg pruned;
  pruned.threshold = threshold;
  pruned.graph = srg;
  // Strict comparison: an edge with weight exactly at the threshold is cut.
  std::erase_if(pruned.graph.edges,
                [threshold](const SrgEdge& e) { return e.weight <= threshold; });
  pruned.graph.rebuild_lookup();
  return pruned;
}

GcnInputs srg_to_gcn_inputs(const PrunedSrg& pruned, const CategorySpace& space) {
  const std::size_t n = space.node_count();
  GcnInputs inputs;
  inputs.features = Matrix::identity(n);
  inputs.adjacency = Matrix(n, n, 0.0);
  for (const auto& e : pruned.graph.edges) {
    std::size_t u, v;
    if (e.type == SrgEdgeType::Includes) {
      u = space.object_node(static_cast<std::size_t>(e.a));
      v = space.region_node(static_cast<std::size_t>(e.b));
    } else {
      u = space.region_node(static_cast<std::size_t>(e.a));
      v = space.region_node(static_cast<std::size_t>(e.b));
    }
    inputs.adjacency(u, v) = 1.0;
    inputs.adjacency(v, u) = 1.0;
  }
  return inputs;
}

namespace {

std::string dot_of(const Srg& srg, double threshold, bool pruned) {
  std::ostringstream out;
  out << "graph srg {\n";
  if (pruned) {
    char line[64];
    std::snprintf(line, sizeof(line), "  // pruned at weight > %.2f\n", threshold);
    out << line;
  }
  for (std::size_t r = 0; r < srg.space.regions.size(); ++r) {
    out << "  \"" << srg.space.regions[r] << "\" [shape=box];\n";
  }
  for (std::size_t o = 0; o < srg.space.objects.size(); ++o) {
    out << "  \"" << srg.space.objects[o] << "\" [shape=ellipse];\n";
  }
  for (const auto& e : srg.edges) {
    char weight[16];
    std::snprintf(weight, sizeof(weight), "%.2f", e.weight);
    if (e.type == SrgEdgeType::Includes) {
      out << "  \"" << srg.space.objects[e.a] << "\" -- \"" << srg.space.regions[e.b]
          << "\" [label=\"" << weight << "\", style=dashed];\n";
    } else {
      out << "  \"" << srg.space.regions[e.a] << "\" -- \"" << srg.space.regions[e.b]
          << "\" [label=\"" << weight << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace

std::string export_dot(const Srg& srg) { return dot_of(srg, 0.0, false); }

std::string export_dot(const PrunedSrg& pruned) {
  return dot_of(pruned.graph, pruned.threshold, true);
}

}  // namespace srgnav
