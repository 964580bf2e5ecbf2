#include "srgnav/region_bayes.hpp"

#include <algorithm>
#include <cmath>

#include "srgnav/errors.hpp"

namespace srgnav {

double smoothed_likelihood(double srg_weight) {
  return std::max(srg_weight, kLikelihoodFloor);
}

RegionPosterior RegionPosterior::prior(const Srg& srg) {
  RegionPosterior posterior;
  posterior.scores.assign(srg.space.regions.size(), 1.0);
  return posterior;
}

std::vector<double> RegionPosterior::normalized() const {
  const std::size_t n = scores.size();
  double sum = 0.0;
  for (double s : scores) sum += s;
  if (sum <= 0.0) {
    return std::vector<double>(n, 1.0 / static_cast<double>(n));
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = scores[i] / sum;
  return out;
}

int RegionPosterior::argmax() const {
  int best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = static_cast<int>(i);
  }
  return best;
}

void RegionPosterior::extend(const Srg& srg, int object_category) {
  if (object_category < 0 ||
      object_category >= static_cast<int>(srg.space.objects.size())) {
    throw DomainError("region_posterior: object category out of range");
  }
  bool informative = false;
  double sum = 0.0;
  for (std::size_t r = 0; r < scores.size(); ++r) {
    const double w = srg.includes_weight(object_category, static_cast<int>(r));
    if (w > 0.0) informative = true;
    scores[r] *= smoothed_likelihood(w);
    sum += scores[r];
  }
  if (informative) ++evidence_count;
  degenerate = evidence_count == 0 || sum <= 0.0;
}

RegionPosterior region_posterior(const Srg& srg, std::span<const int> candidate_objects) {
  // One code path: the batch posterior is the incremental fold, so the two
  // agree bit for bit.
  RegionPosterior posterior = RegionPosterior::prior(srg);
  for (int object_category : candidate_objects) {
    posterior.extend(srg, object_category);
  }
  return posterior;
}

VisibleRegionMap visible_regions(const Srg& srg, std::span<const ObjectInstance> visible,
                                 int k) {
  if (k < 0) throw DomainError("visible_regions: k must be >= 0");
  VisibleRegionMap map;
  map.reserve(visible.size());
  for (const auto& obj : visible) {
    // Candidate evidence: the object plus its k nearest visible peers.
    std::vector<const ObjectInstance*> peers;
    for (const auto& other : visible) {
      if (other.id != obj.id) peers.push_back(&other);
    }
    std::sort(peers.begin(), peers.end(),
              [&obj](const ObjectInstance* a, const ObjectInstance* b) {
                const long da = static_cast<long>(a->cell.row - obj.cell.row) *
                                    (a->cell.row - obj.cell.row) +
                                static_cast<long>(a->cell.col - obj.cell.col) *
                                    (a->cell.col - obj.cell.col);
                const long db = static_cast<long>(b->cell.row - obj.cell.row) *
                                    (b->cell.row - obj.cell.row) +
                                static_cast<long>(b->cell.col - obj.cell.col) *
                                    (b->cell.col - obj.cell.col);
                if (da != db) return da < db;
                return a->id < b->id;
              });
    RegionEstimate estimate;
    estimate.object_id = obj.id;
    estimate.object_category = obj.category;
    estimate.object_cell = obj.cell;
    estimate.candidate_categories.push_back(obj.category);
    for (std::size_t i = 0; i < peers.size() && i < static_cast<std::size_t>(k); ++i) {
      estimate.candidate_categories.push_back(peers[i]->category);
    }
    estimate.posterior = region_posterior(srg, estimate.candidate_categories);
    estimate.label = estimate.posterior.argmax();
    map.push_back(std::move(estimate));
  }
  return map;
}

}  // namespace srgnav
