#include "sgbench/ops.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sgbench {

void matmul_backward(const DenseMatrix& a, const DenseMatrix& b,
                     const DenseMatrix& grad_out, DenseMatrix* grad_a,
                     DenseMatrix* grad_b) {
  if (grad_out.rows != a.rows || grad_out.cols != b.cols) {
    throw std::invalid_argument("matmul_backward shape mismatch: grad " +
                                grad_out.shape() + " for " + a.shape() +
                                " * " + b.shape());
  }
  if (grad_a) {
    // dA = dC * B^T
    for (int i = 0; i < a.rows; ++i)
      for (int k = 0; k < a.cols; ++k) {
        double acc = 0.0;
        for (int j = 0; j < b.cols; ++j) acc += grad_out(i, j) * b(k, j);
        (*grad_a)(i, k) += acc;
      }
  }
  if (grad_b) {
    // dB = A^T * dC
    for (int k = 0; k < a.cols; ++k)
      for (int i = 0; i < a.rows; ++i) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        for (int j = 0; j < b.cols; ++j)
          (*grad_b)(k, j) += aik * grad_out(i, j);
      }
  }
}

DenseMatrix add_row_bias(const DenseMatrix& h, const DenseMatrix& bias) {
  if (bias.rows != 1 || bias.cols != h.cols) {
    throw std::invalid_argument("add_row_bias shape mismatch: " + h.shape() +
                                " + " + bias.shape());
  }
  DenseMatrix out = h;
  for (int i = 0; i < h.rows; ++i)
    for (int j = 0; j < h.cols; ++j) out(i, j) += bias(0, j);
  return out;
}

void add_row_bias_backward(const DenseMatrix& grad_out, DenseMatrix* grad_h,
                           DenseMatrix* grad_bias) {
  if (grad_h) axpy(1.0, grad_out, *grad_h);
  if (grad_bias) {
    for (int i = 0; i < grad_out.rows; ++i)
      for (int j = 0; j < grad_out.cols; ++j)
        (*grad_bias)(0, j) += grad_out(i, j);
  }
}

DenseMatrix relu(const DenseMatrix& h) {
  DenseMatrix out = h;
  for (auto& v : out.data) v = v > 0.0 ? v : 0.0;
  return out;
}

void relu_backward(const DenseMatrix& input, const DenseMatrix& grad_out,
                   DenseMatrix* grad_in) {
  require_same_shape(input, grad_out, "relu_backward");
  if (!grad_in) return;
  for (int i = 0; i < input.size(); ++i)
    if (input.data[i] > 0.0) grad_in->data[i] += grad_out.data[i];
}

DenseMatrix leaky_relu(const DenseMatrix& h, double slope) {
  DenseMatrix out = h;
  for (auto& v : out.data) v = v > 0.0 ? v : slope * v;
  return out;
}

void leaky_relu_backward(const DenseMatrix& input, double slope,
                         const DenseMatrix& grad_out, DenseMatrix* grad_in) {
  require_same_shape(input, grad_out, "leaky_relu_backward");
  if (!grad_in) return;
  for (int i = 0; i < input.size(); ++i)
    grad_in->data[i] +=
        grad_out.data[i] * (input.data[i] > 0.0 ? 1.0 : slope);
}

DenseMatrix masked_row_softmax(const DenseMatrix& logits,
                               const DenseMatrix& mask) {
  require_same_shape(logits, mask, "masked_row_softmax");
  DenseMatrix out(logits.rows, logits.cols);
  for (int i = 0; i < logits.rows; ++i) {
    double row_max = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < logits.cols; ++j)
      if (mask(i, j) != 0.0 && logits(i, j) > row_max) row_max = logits(i, j);
    if (row_max == -std::numeric_limits<double>::infinity()) {
      throw std::invalid_argument("masked_row_softmax: row " +
                                  std::to_string(i) + " has no unmasked entry");
    }
    double denom = 0.0;
    for (int j = 0; j < logits.cols; ++j) {
      if (mask(i, j) != 0.0) {
        out(i, j) = std::exp(logits(i, j) - row_max);
        denom += out(i, j);
      }
    }
    for (int j = 0; j < logits.cols; ++j)
      if (mask(i, j) != 0.0) out(i, j) /= denom;
  }
  return out;
}

void masked_row_softmax_backward(const DenseMatrix& softmax_out,
                                 const DenseMatrix& mask,
                                 const DenseMatrix& grad_out,
                                 DenseMatrix* grad_logits) {
  require_same_shape(softmax_out, grad_out, "masked_row_softmax_backward");
  if (!grad_logits) return;
  for (int i = 0; i < softmax_out.rows; ++i) {
    double dot = 0.0;
    for (int j = 0; j < softmax_out.cols; ++j)
      if (mask(i, j) != 0.0) dot += grad_out(i, j) * softmax_out(i, j);
    for (int j = 0; j < softmax_out.cols; ++j)
      if (mask(i, j) != 0.0)
        (*grad_logits)(i, j) += softmax_out(i, j) * (grad_out(i, j) - dot);
  }
}

DropoutResult dropout(const DenseMatrix& h, double p, bool training,
                      Rng& rng) {
  if (p < 0.0 || p >= 1.0)
    throw std::invalid_argument("dropout probability must be in [0, 1)");
  DropoutResult r;
  r.keep_scale = DenseMatrix(h.rows, h.cols, 1.0);
  if (training) {
    const double scale = 1.0 / (1.0 - p);
    for (auto& s : r.keep_scale.data) s = rng.uniform() < p ? 0.0 : scale;
  }
  r.out = h;
  for (int i = 0; i < h.size(); ++i) r.out.data[i] *= r.keep_scale.data[i];
  return r;
}

void dropout_backward(const DenseMatrix& keep_scale,
                      const DenseMatrix& grad_out, DenseMatrix* grad_in) {
  require_same_shape(keep_scale, grad_out, "dropout_backward");
  if (!grad_in) return;
  for (int i = 0; i < grad_out.size(); ++i)
    grad_in->data[i] += grad_out.data[i] * keep_scale.data[i];
}

double mse(const DenseMatrix& pred, const DenseMatrix& target) {
  require_same_shape(pred, target, "mse");
  if (pred.size() == 0) throw std::invalid_argument("mse on empty matrix");
  double acc = 0.0;
  for (int i = 0; i < pred.size(); ++i) {
    const double d = pred.data[i] - target.data[i];
    acc += d * d;
  }
  return acc / pred.size();
}

void mse_backward(const DenseMatrix& pred, const DenseMatrix& target,
                  double upstream, DenseMatrix* grad_pred) {
  require_same_shape(pred, target, "mse_backward");
  if (!grad_pred) return;
  const double c = 2.0 * upstream / pred.size();
  for (int i = 0; i < pred.size(); ++i)
    grad_pred->data[i] += c * (pred.data[i] - target.data[i]);
}

double grad_check(const std::function<double()>& loss,
                  const std::vector<Parameter*>& params, double eps) {
  // Snapshot analytic gradients before touching values.
  std::vector<DenseMatrix> analytic;
  analytic.reserve(params.size());
  for (const Parameter* p : params) analytic.push_back(p->grad);

  double worst = 0.0;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Parameter* p = params[pi];
    for (int i = 0; i < p->value.size(); ++i) {
      const double saved = p->value.data[i];
      p->value.data[i] = saved + eps;
      const double up = loss();
      p->value.data[i] = saved - eps;
      const double down = loss();
      p->value.data[i] = saved;
      if (!std::isfinite(up) || !std::isfinite(down))
        throw std::runtime_error("grad_check: non-finite loss");
      const double numeric = (up - down) / (2.0 * eps);
      const double disc = std::fabs(analytic[pi].data[i] - numeric) /
                          std::max(1.0, std::fabs(numeric));
      if (disc > worst) worst = disc;
    }
  }
  return worst;
}

}  // namespace sgbench
