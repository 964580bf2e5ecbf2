#pragma once

#include "srgnav/gcn.hpp"
#include "srgnav/matrix.hpp"

namespace srgnav {

struct AdamConfig {
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  long timestep = 0;
  Matrix m1, v1, m2, v2, m3, v3;

  static AdamState zeros_like(const GcnModel& model);
};

/// One bias-corrected Adam update over all three weight matrices.
void adam_step(GcnModel& model, const GcnGrads& grads, AdamState& state,
               const AdamConfig& config);

/// Single-matrix update, exposed for optimizer tests.
void adam_update(Matrix& w, const Matrix& grad, Matrix& m, Matrix& v,
                 long timestep, const AdamConfig& config);

}  // namespace srgnav
