#pragma once

#include <functional>
#include <vector>

#include "sgbench/matrix.hpp"
#include "sgbench/rng.hpp"

namespace sgbench {

// Trainable tensor: value plus an explicitly managed gradient buffer.
struct Parameter {
  DenseMatrix value;
  DenseMatrix grad;

  Parameter() = default;
  Parameter(int rows, int cols)
      : value(rows, cols), grad(rows, cols) {}

  void zero_grad() { grad.fill(0.0); }
};

// Forward primitives paired with analytic backward functions. Backwards
// accumulate (+=) into the given gradient buffers; pass nullptr to skip an
// input whose gradient is not needed.

void matmul_backward(const DenseMatrix& a, const DenseMatrix& b,
                     const DenseMatrix& grad_out, DenseMatrix* grad_a,
                     DenseMatrix* grad_b);

// h is n x m, bias is 1 x m broadcast over rows.
DenseMatrix add_row_bias(const DenseMatrix& h, const DenseMatrix& bias);
void add_row_bias_backward(const DenseMatrix& grad_out, DenseMatrix* grad_h,
                           DenseMatrix* grad_bias);

DenseMatrix relu(const DenseMatrix& h);
void relu_backward(const DenseMatrix& input, const DenseMatrix& grad_out,
                   DenseMatrix* grad_in);

DenseMatrix leaky_relu(const DenseMatrix& h, double slope);
void leaky_relu_backward(const DenseMatrix& input, double slope,
                         const DenseMatrix& grad_out, DenseMatrix* grad_in);

// Softmax per row over entries where mask != 0; exactly 0 elsewhere.
// Every row must have at least one unmasked entry.
DenseMatrix masked_row_softmax(const DenseMatrix& logits,
                               const DenseMatrix& mask);
void masked_row_softmax_backward(const DenseMatrix& softmax_out,
                                 const DenseMatrix& mask,
                                 const DenseMatrix& grad_out,
                                 DenseMatrix* grad_logits);

// Inverted dropout: with probability p an entry is zeroed, survivors are
// scaled by 1/(1-p); eval mode is the identity. keep_scale holds the
// per-entry factor (0 or 1/(1-p)) consumed by the backward pass.
struct DropoutResult {
  DenseMatrix out;
  DenseMatrix keep_scale;
};
DropoutResult dropout(const DenseMatrix& h, double p, bool training, Rng& rng);
void dropout_backward(const DenseMatrix& keep_scale,
                      const DenseMatrix& grad_out, DenseMatrix* grad_in);

// Mean of elementwise squared differences.
double mse(const DenseMatrix& pred, const DenseMatrix& target);
// grad_pred += upstream * 2 * (pred - target) / numel
void mse_backward(const DenseMatrix& pred, const DenseMatrix& target,
                  double upstream, DenseMatrix* grad_pred);

// Central finite differences against the analytic gradients currently held
// in each parameter's grad buffer. loss must be deterministic (dropout in
// eval mode or a fixed mask) and is re-evaluated at perturbed parameter
// values. Returns max over coordinates of
// |analytic - numeric| / max(1, |numeric|).
double grad_check(const std::function<double()>& loss,
                  const std::vector<Parameter*>& params, double eps = 1e-5);

}  // namespace sgbench
