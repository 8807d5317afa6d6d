#include "sgbench/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace sgbench {

AdamState make_adam_state(const std::vector<Parameter*>& params,
                          double learning_rate, double weight_decay,
                          double beta1, double beta2, double epsilon) {
  if (learning_rate <= 0.0)
    throw std::invalid_argument("learning rate must be positive");
  AdamState st;
  st.learning_rate = learning_rate;
  st.weight_decay = weight_decay;
  st.beta1 = beta1;
  st.beta2 = beta2;
  st.epsilon = epsilon;
  st.m.reserve(params.size());
  st.v.reserve(params.size());
  for (const Parameter* p : params) {
    st.m.emplace_back(p->value.rows, p->value.cols);
    st.v.emplace_back(p->value.rows, p->value.cols);
  }
  return st;
}

void adam_step(const std::vector<Parameter*>& params, AdamState& state) {
  if (params.size() != state.m.size())
    throw std::invalid_argument("adam_step: state built for a different parameter list");
  state.step_count += 1;
  const double t = static_cast<double>(state.step_count);
  const double bias1 = 1.0 - std::pow(state.beta1, t);
  const double bias2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Parameter& p = *params[pi];
    DenseMatrix& m = state.m[pi];
    DenseMatrix& v = state.v[pi];
    for (int i = 0; i < p.value.size(); ++i) {
      const double g =
          p.grad.data[i] + state.weight_decay * p.value.data[i];
      m.data[i] = state.beta1 * m.data[i] + (1.0 - state.beta1) * g;
      v.data[i] = state.beta2 * v.data[i] + (1.0 - state.beta2) * g * g;
      const double m_hat = m.data[i] / bias1;
      const double v_hat = v.data[i] / bias2;
      p.value.data[i] -=
          state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
    p.zero_grad();
  }
}

}  // namespace sgbench
