#pragma once

#include <span>
#include <string>
#include <vector>

#include "srgnav/category_space.hpp"
#include "srgnav/matrix.hpp"
#include "srgnav/scene_graph.hpp"

namespace srgnav {

enum class SrgEdgeType { Includes, Adjacency };

struct SrgEdge {
  SrgEdgeType type = SrgEdgeType::Includes;
  // Includes: a = object category, b = region category.
  // Adjacency: a <= b, both region categories.
  int a = 0;
  int b = 0;
  double weight = 0.0;
  long count = 0;  // raw co-occurrence tally behind the weight
};

/// Spatial relational graph over categories, aggregated from scene graphs.
///
/// Node set is the whole CategorySpace (categories never observed simply
/// have no edges). Frequency tables count region instances, includes pairs
/// and instance-adjacency pairs across all scene graphs; they are persisted
/// alongside the weights so every weight remains auditable as count / freq.
struct Srg {
  CategorySpace space;
  std::vector<long> region_freq;                  // [region]
  std::vector<std::vector<long>> includes_count;  // [object][region]
  std::vector<std::vector<long>> co_adjacency;    // [region][region], symmetric
  std::vector<SrgEdge> edges;                     // deterministic order
  long scene_graph_count = 0;

  /// Weight of the includes edge (0 when absent).
  double includes_weight(int object_cat, int region_cat) const;
  /// Weight of the adjacency edge (0 when absent).
  double adjacency_weight(int region_a, int region_b) const;

  /// Refreshes the dense weight lookups from the edge list. build_srg,
  /// prune_srg and deserialization call this; call it again after editing
  /// edges by hand (fixtures).
  void rebuild_lookup();

  // Derived from edges; not persisted.
  std::vector<double> includes_lookup;   // [object * regions + region]
  std::vector<double> adjacency_lookup;  // [a * regions + b]
};

/// Edge weights:
///   includes(o, r)  = #(o-in-r pairs) / #(r instances)
///   adjacency(r,s)  = #(r~s instance adjacencies) / min(#r, #s instances)
/// both clamped to 1 when instance multiplicity pushes the ratio above 1.
Srg build_srg(std::span<const SceneGraph> scene_graphs, const CategorySpace& space);

/// SRG restricted to edges with weight strictly above the threshold.
struct PrunedSrg {
  Srg graph;
  double threshold = 0.5;
};

PrunedSrg prune_srg(const Srg& srg, double threshold = 0.5);

/// Inputs for graph-convolution training: binary symmetric adjacency from
/// the retained edges and one-hot node features (N x N identity).
struct GcnInputs {
  Matrix adjacency;
  Matrix features;
};

GcnInputs srg_to_gcn_inputs(const PrunedSrg& pruned, const CategorySpace& space);

/// Graphviz text with node types and edge weights at 2 decimals;
/// deterministic ordering.
std::string export_dot(const Srg& srg);
std::string export_dot(const PrunedSrg& pruned);

}  // namespace srgnav
