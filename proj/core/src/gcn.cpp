#include "srgnav/gcn.hpp"

#include <cmath>

#include "srgnav/errors.hpp"
#include "srgnav/rng.hpp"

namespace srgnav {

namespace {

Matrix glorot_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Matrix w(fan_in, fan_out);
  for (double& v : w.data()) v = (2.0 * rng.uniform_real() - 1.0) * limit;
  return w;
}

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// BCE(sigmoid(x), y) = softplus(x) - y * x, computed without overflow.
double sigmoid_cross_entropy(double x, double y) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))) - y * x;
}

Matrix relu(const Matrix& m) {
  Matrix out = m;
  for (double& v : out.data()) v = v > 0.0 ? v : 0.0;
  return out;
}

void require_finite(const Matrix& m, const char* layer) {
  if (!all_finite(m)) {
    throw NumericError(std::string("gcn_forward: non-finite values in ") + layer);
  }
}

}  // namespace

GcnModel GcnModel::init(const GcnDims& dims, std::uint64_t seed) {
  Rng rng(Rng::mix(seed, 0x67636e5f696e6974ULL));
  GcnModel model;
  model.dims = dims;
  model.w1 = glorot_uniform(dims.input, dims.hidden1, rng);
  model.w2 = glorot_uniform(dims.hidden1, dims.hidden2, rng);
  model.w3 = glorot_uniform(dims.hidden2, dims.embed, rng);
  return model;
}

void GcnModel::check_dims() const {
  if (w1.rows() != dims.input || w1.cols() != dims.hidden1 ||
      w2.rows() != dims.hidden1 || w2.cols() != dims.hidden2 ||
      w3.rows() != dims.hidden2 || w3.cols() != dims.embed) {
    throw DimensionError("gcn model weight shapes do not chain input->embed");
  }
}

NormalizedAdjacency normalize_adjacency(const Matrix& binary_adjacency) {
  if (binary_adjacency.rows() != binary_adjacency.cols()) {
    throw DimensionError("adjacency matrix must be square");
  }
  const std::size_t n = binary_adjacency.rows();
  Matrix with_loops = binary_adjacency;
  for (std::size_t i = 0; i < n; ++i) with_loops(i, i) = 1.0;
  std::vector<double> inv_sqrt_degree(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double degree = 0.0;
    for (std::size_t j = 0; j < n; ++j) degree += with_loops(i, j);
    inv_sqrt_degree[i] = 1.0 / std::sqrt(degree);  // degree >= 1 from the self loop
  }
  NormalizedAdjacency adj;
  adj.a_hat = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      adj.a_hat(i, j) = with_loops(i, j) * inv_sqrt_degree[i] * inv_sqrt_degree[j];
    }
  }
  return adj;
}

Matrix gcn_forward(const GcnModel& model, const NormalizedAdjacency& adj,
                   const Matrix& features, ForwardCache* cache) {
  model.check_dims();
  if (features.rows() != adj.a_hat.rows() || features.cols() != model.dims.input) {
    throw DimensionError("gcn_forward: feature matrix shape mismatch");
  }
  Matrix ax = matmul(adj.a_hat, features);
  Matrix pre1 = matmul(ax, model.w1);
  require_finite(pre1, "layer 1 pre-activation");
  Matrix ah1 = matmul(adj.a_hat, relu(pre1));
  Matrix pre2 = matmul(ah1, model.w2);
  require_finite(pre2, "layer 2 pre-activation");
  Matrix ah2 = matmul(adj.a_hat, relu(pre2));
  Matrix embeddings = matmul(ah2, model.w3);
  require_finite(embeddings, "layer 3 output");
  if (cache) {
    cache->ax = std::move(ax);
    cache->pre1 = std::move(pre1);
    cache->ah1 = std::move(ah1);
    cache->pre2 = std::move(pre2);
    cache->ah2 = std::move(ah2);
  }
  return embeddings;
}

PairLossResult pair_loss_and_grad(const Matrix& embeddings,
                                  std::span<const TrainingPair> pairs, PairScore score) {
  if (pairs.empty()) throw DomainError("pair_loss_and_grad: empty pair list");
  const std::size_t dim = embeddings.cols();
  const double inv_count = 1.0 / static_cast<double>(pairs.size());

  PairLossResult result;
  result.d_embeddings = Matrix(embeddings.rows(), dim, 0.0);
  for (const auto& pair : pairs) {
    const auto za = embeddings.row(static_cast<std::size_t>(pair.anchor));
    const auto zb = embeddings.row(static_cast<std::size_t>(pair.other));
    const double label = pair.positive ? 1.0 : 0.0;
    double dot = 0.0;
    for (std::size_t e = 0; e < dim; ++e) dot += za[e] * zb[e];

    auto da = result.d_embeddings.row(static_cast<std::size_t>(pair.anchor));
    auto db = result.d_embeddings.row(static_cast<std::size_t>(pair.other));
    if (score == PairScore::Dot) {
      result.loss += sigmoid_cross_entropy(dot, label) * inv_count;
      const double g = (stable_sigmoid(dot) - label) * inv_count;
      for (std::size_t e = 0; e < dim; ++e) {
        da[e] += g * zb[e];
        db[e] += g * za[e];
      }
    } else {
      double na2 = 0.0, nb2 = 0.0;
      for (std::size_t e = 0; e < dim; ++e) {
        na2 += za[e] * za[e];
        nb2 += zb[e] * zb[e];
      }
      if (na2 == 0.0 || nb2 == 0.0) {
        throw DomainError("pair_loss_and_grad: zero-norm embedding in cosine mode");
      }
      const double na = std::sqrt(na2);
      const double nb = std::sqrt(nb2);
      const double cos = dot / (na * nb);
      result.loss += sigmoid_cross_entropy(cos, label) * inv_count;
      const double g = (stable_sigmoid(cos) - label) * inv_count;
      for (std::size_t e = 0; e < dim; ++e) {
        da[e] += g * (zb[e] / (na * nb) - cos * za[e] / na2);
        db[e] += g * (za[e] / (na * nb) - cos * zb[e] / nb2);
      }
    }
  }
  return result;
}

GcnGrads gcn_backward(const GcnModel& model, const NormalizedAdjacency& adj,
                      const Matrix& features, const ForwardCache& cache,
                      const Matrix& d_embeddings) {
  model.check_dims();
  if (d_embeddings.rows() != features.rows() || d_embeddings.cols() != model.dims.embed) {
    throw DimensionError("gcn_backward: upstream gradient shape mismatch");
  }
  GcnGrads grads;
  grads.w3 = matmul_tn(cache.ah2, d_embeddings);
  Matrix d_ah2 = matmul_nt(d_embeddings, model.w3);
  Matrix d_h2 = matmul_tn(adj.a_hat, d_ah2);
  for (std::size_t i = 0; i < d_h2.data().size(); ++i) {
    if (cache.pre2.data()[i] <= 0.0) d_h2.data()[i] = 0.0;
  }
  grads.w2 = matmul_tn(cache.ah1, d_h2);
  Matrix d_ah1 = matmul_nt(d_h2, model.w2);
  Matrix d_h1 = matmul_tn(adj.a_hat, d_ah1);
  for (std::size_t i = 0; i < d_h1.data().size(); ++i) {
    if (cache.pre1.data()[i] <= 0.0) d_h1.data()[i] = 0.0;
  }
  grads.w1 = matmul_tn(cache.ax, d_h1);
  return grads;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("cosine_similarity: length mismatch");
  if (a.empty()) throw DomainError("cosine_similarity: empty vectors");
  double dot = 0.0, na2 = 0.0, nb2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na2 += a[i] * a[i];
    nb2 += b[i] * b[i];
  }
  if (na2 == 0.0 || nb2 == 0.0) {
    throw DomainError("cosine_similarity: zero-norm input");
  }
  return dot / (std::sqrt(na2) * std::sqrt(nb2));
}

}  // namespace srgnav
