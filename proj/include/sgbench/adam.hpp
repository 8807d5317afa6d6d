#pragma once

#include <vector>

#include "sgbench/ops.hpp"

namespace sgbench {

// Adam with coupled L2 weight decay (decay added to the gradient before the
// moment updates, matching the defaults of common training stacks).
struct AdamState {
  double learning_rate = 0.001;
  double weight_decay = 0.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  long step_count = 0;
  std::vector<DenseMatrix> m;  // first moments, aligned with the param list
  std::vector<DenseMatrix> v;  // second moments
};

AdamState make_adam_state(const std::vector<Parameter*>& params,
                          double learning_rate, double weight_decay,
                          double beta1 = 0.9, double beta2 = 0.999,
                          double epsilon = 1e-8);

// One optimizer step over all parameters; increments the step counter once
// and zeroes every gradient buffer afterwards.
void adam_step(const std::vector<Parameter*>& params, AdamState& state);

}  // namespace sgbench
