#include "srgnav/adam.hpp"

#include <cmath>

#include "srgnav/errors.hpp"

namespace srgnav {

AdamState AdamState::zeros_like(const GcnModel& model) {
  AdamState state;
  state.m1 = Matrix(model.w1.rows(), model.w1.cols());
  state.v1 = Matrix(model.w1.rows(), model.w1.cols());
  state.m2 = Matrix(model.w2.rows(), model.w2.cols());
  state.v2 = Matrix(model.w2.rows(), model.w2.cols());
  state.m3 = Matrix(model.w3.rows(), model.w3.cols());
  state.v3 = Matrix(model.w3.rows(), model.w3.cols());
  return state;
}

void adam_update(Matrix& w, const Matrix& grad, Matrix& m, Matrix& v, long timestep,
                 const AdamConfig& config) {
  if (w.rows() != grad.rows() || w.cols() != grad.cols()) {
    throw DimensionError("adam_update: gradient shape mismatch");
  }
  const double bias1 = 1.0 - std::pow(config.beta1, static_cast<double>(timestep));
  const double bias2 = 1.0 - std::pow(config.beta2, static_cast<double>(timestep));
  for (std::size_t i = 0; i < w.data().size(); ++i) {
    const double g = grad.data()[i];
    m.data()[i] = config.beta1 * m.data()[i] + (1.0 - config.beta1) * g;
    v.data()[i] = config.beta2 * v.data()[i] + (1.0 - config.beta2) * g * g;
    const double m_hat = m.data()[i] / bias1;
    const double v_hat = v.data()[i] / bias2;
    w.data()[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
}

void adam_step(GcnModel& model, const GcnGrads& grads, AdamState& state,
               const AdamConfig& config) {
  ++state.timestep;
  adam_update(model.w1, grads.w1, state.m1, state.v1, state.timestep, config);
  adam_update(model.w2, grads.w2, state.m2, state.v2, state.timestep, config);
  adam_update(model.w3, grads.w3, state.m3, state.v3, state.timestep, config);
}

}  // namespace srgnav
