#pragma once

#include <span>
#include <vector>

#include "srgnav/scene.hpp"
#include "srgnav/srg.hpp"

namespace srgnav {

/// Floor applied to includes-weights inside likelihood products, so one
/// unseen object cannot annihilate a posterior.
constexpr double kLikelihoodFloor = 1e-4;

double smoothed_likelihood(double srg_weight);

/// Naive-Bayes region posterior given observed object categories.
///
/// Raw scores are the running products of smoothed p(object | region); the
/// global evidence factor is never materialized — normalization divides by
/// the score sum, so any positive rescaling of the scores leaves the
/// distribution and argmax unchanged. Extending with one more object at a
/// time reproduces the one-shot product bit for bit.
struct RegionPosterior {
  std::vector<double> scores;  // unnormalized, one per region category
  bool degenerate = true;      // no informative evidence yet (or underflow)
  int evidence_count = 0;      // informative candidates folded in so far

  static RegionPosterior prior(const Srg& srg);  // all scores 1, degenerate

  /// Folds one more observed object category into the product.
  void extend(const Srg& srg, int object_category);

  /// scores / sum(scores); uniform when the evidence is degenerate.
  std::vector<double> normalized() const;
  int argmax() const;  // ties resolved toward the lower region index
};

/// Posterior from a whole candidate set at once. An empty candidate list or
/// all-zero evidence yields the uniform distribution with the degenerate
/// flag set.
RegionPosterior region_posterior(const Srg& srg, std::span<const int> candidate_objects);

/// Visible-region estimate for one observed object.
struct RegionEstimate {
  int object_id = 0;
  int object_category = 0;
  Cell object_cell;
  std::vector<int> candidate_categories;  // itself + up to k nearest, in distance order
  RegionPosterior posterior;
  int label = 0;  // argmax region category
};

using VisibleRegionMap = std::vector<RegionEstimate>;

/// Assigns a region label to every visible object: the candidate evidence
/// is the object itself plus its k nearest visible objects (Euclidean cell
/// distance, ties by object id), and the label is the posterior argmax.
VisibleRegionMap visible_regions(const Srg& srg, std::span<const ObjectInstance> visible,
                                 int k = 4);

}  // namespace srgnav
