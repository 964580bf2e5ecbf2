#include "srgnav/train.hpp"

#include <cmath>

#include "srgnav/errors.hpp"

namespace srgnav {

TrainResult train(const PrunedSrg& pruned, std::span<const Trajectory> corpus,
                  const TrainConfig& config) {
  if (corpus.empty()) throw DomainError("train: empty trajectory corpus");
  if (config.learning_rate <= 0.0) throw DomainError("train: learning rate must be > 0");
  const CategorySpace& space = pruned.graph.space;

  const GcnInputs inputs = srg_to_gcn_inputs(pruned, space);
  const NormalizedAdjacency adj = normalize_adjacency(inputs.adjacency);
  const auto pairs = expand_training_pairs(corpus, space);
  if (pairs.empty()) throw DomainError("train: corpus expands to zero training pairs");

  GcnDims dims;
  dims.input = space.node_count();
  dims.hidden1 = config.hidden1;
  dims.hidden2 = config.hidden2;
  dims.embed = config.embed_dim;

  TrainResult result;
  result.model = GcnModel::init(dims, config.seed);
  result.pair_count = pairs.size();

  AdamConfig adam{config.learning_rate, config.beta1, config.beta2, config.epsilon};
  AdamState state = AdamState::zeros_like(result.model);

  double best_loss = 0.0;
  int stall = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    ForwardCache cache;
    const Matrix embeddings = gcn_forward(result.model, adj, inputs.features, &cache);
    PairLossResult loss = pair_loss_and_grad(embeddings, pairs, config.pair_score);
    if (!std::isfinite(loss.loss)) {
      throw NumericError("train: loss diverged to a non-finite value at epoch " +
                         std::to_string(epoch));
    }
    const GcnGrads grads =
        gcn_backward(result.model, adj, inputs.features, cache, loss.d_embeddings);
    adam_step(result.model, grads, state, adam);
    result.loss_history.push_back(loss.loss);

    if (config.plateau_patience > 0) {
      const bool improved =
          epoch == 0 ||
          best_loss - loss.loss > config.plateau_tol * std::max(1.0, std::abs(best_loss));
      if (improved) {
        best_loss = loss.loss;
        stall = 0;
      } else if (++stall >= config.plateau_patience) {
        break;
      }
    }
  }

  result.table.space = space;
  result.table.vectors = gcn_forward(result.model, adj, inputs.features, nullptr);
  return result;
}

}  // namespace srgnav
