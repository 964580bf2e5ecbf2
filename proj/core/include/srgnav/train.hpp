#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "srgnav/adam.hpp"
#include "srgnav/gcn.hpp"
#include "srgnav/srg.hpp"
#include "srgnav/trajectory.hpp"

namespace srgnav {

struct TrainConfig {
  double learning_rate = 3e-4;
  int epochs = 400;
  std::uint64_t seed = 0;
  std::size_t hidden1 = 128;
  std::size_t hidden2 = 128;
  std::size_t embed_dim = 128;
  PairScore pair_score = PairScore::Dot;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Early stop once the loss improves by less than plateau_tol (relative)
  // for plateau_patience consecutive epochs; 0 patience disables it.
  int plateau_patience = 25;
  double plateau_tol = 1e-9;
};

struct TrainResult {
  GcnModel model;
  EmbeddingTable table;
  std::vector<double> loss_history;  // one entry per completed epoch
  std::size_t pair_count = 0;
};

/// Full-batch training of the GCN on all pairs expanded from the corpus.
/// Deterministic for fixed (seed, corpus, config); throws NumericError if
/// the loss diverges to a non-finite value. With 0 epochs the table is the
/// forward pass of the freshly initialized model.
TrainResult train(const PrunedSrg& pruned, std::span<const Trajectory> corpus,
                  const TrainConfig& config);

}  // namespace srgnav
