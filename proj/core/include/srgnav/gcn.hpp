#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "srgnav/category_space.hpp"
#include "srgnav/matrix.hpp"
#include "srgnav/trajectory.hpp"

namespace srgnav {

/// Three-layer graph convolutional encoder. Layers 1 and 2 apply
/// H' = relu(A_hat H W); the last layer is linear and its width is the
/// embedding dimension.
struct GcnDims {
  std::size_t input = 47;
  std::size_t hidden1 = 128;
  std::size_t hidden2 = 128;
  std::size_t embed = 128;
};

struct GcnModel {
  GcnDims dims;
  Matrix w1;  // input  x hidden1
  Matrix w2;  // hidden1 x hidden2
  Matrix w3;  // hidden2 x embed

  /// Glorot-uniform initialization, deterministic for a seed.
  static GcnModel init(const GcnDims& dims, std::uint64_t seed);

  void check_dims() const;  // throws DimensionError
};

/// Symmetric-normalized adjacency with self loops:
/// A_hat = D^(-1/2) (A + I) D^(-1/2), D the degree of A + I. An isolated
/// node keeps a unit self-weight.
struct NormalizedAdjacency {
  Matrix a_hat;
};

NormalizedAdjacency normalize_adjacency(const Matrix& binary_adjacency);

/// Intermediate activations kept for the backward pass.
struct ForwardCache {
  Matrix ax;    // A_hat X
  Matrix pre1;  // A_hat X W1
  Matrix ah1;   // A_hat relu(pre1)
  Matrix pre2;  // A_hat relu(pre1) W2
  Matrix ah2;   // A_hat relu(pre2)
};

/// Returns the N x E embedding matrix. Throws NumericError naming the layer
/// if an intermediate goes non-finite.
Matrix gcn_forward(const GcnModel& model, const NormalizedAdjacency& adj,
                   const Matrix& features, ForwardCache* cache = nullptr);

/// Similarity fed through the sigmoid during training. Inference always
/// uses cosine; the training-side choice is configurable because either
/// reading of the loss is defensible.
enum class PairScore { Dot, Cosine };

struct PairLossResult {
  double loss = 0.0;
  Matrix d_embeddings;  // exact gradient of the mean loss
};

/// Mean sigmoid cross-entropy over pairs: BCE(sigmoid(score(z_a, z_b)),
/// label). Throws DomainError on an empty pair list (and, in cosine mode,
/// on a zero-norm embedding).
PairLossResult pair_loss_and_grad(const Matrix& embeddings,
                                  std::span<const TrainingPair> pairs,
                                  PairScore score = PairScore::Dot);

struct GcnGrads {
  Matrix w1;
  Matrix w2;
  Matrix w3;
};

/// Exact analytic gradients for all three weight matrices given the
/// upstream gradient w.r.t. the embeddings.
GcnGrads gcn_backward(const GcnModel& model, const NormalizedAdjacency& adj,
                      const Matrix& features, const ForwardCache& cache,
                      const Matrix& d_embeddings);

/// Cosine similarity; throws DomainError on a zero-norm input rather than
/// silently returning 0.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Final per-node embeddings, rows in CategorySpace node order.
struct EmbeddingTable {
  CategorySpace space;
  Matrix vectors;  // node_count x E

  std::span<const double> node(std::size_t node_index) const {
    return vectors.row(node_index);
  }
  std::span<const double> region(std::size_t region_cat) const {
    return vectors.row(space.region_node(region_cat));
  }
  std::span<const double> object(std::size_t object_cat) const {
    return vectors.row(space.object_node(object_cat));
  }
};

}  // namespace srgnav
