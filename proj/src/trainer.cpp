#include "sgbench/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sgbench/adam.hpp"
#include "sgbench/ops.hpp"
#include "sgbench/rng.hpp"
#include "sgbench/stats.hpp"

namespace sgbench {

namespace {

// Mean per-example MSE over a segment, eval mode.
double segment_loss(ModelParams& params,
                    const std::vector<WindowExample>& segment,
                    const GraphOperators& ops) {
  Rng unused(0);  // eval mode consumes no draws
  double total = 0.0;
  for (const WindowExample& ex : segment) {
    DenseMatrix pred = model_forward(ex.x, ops, params, false, unused);
    total += mse(pred, ex.y);
  }
  return total / segment.size();
}

}  // namespace

std::vector<EpochRecord> train(ModelParams& params,
                               const WindowedDataset& dataset,
                               const GraphOperators& ops,
                               const TrainConfig& config) {
  if (config.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (dataset.train_examples.empty() || dataset.test_examples.empty())
    throw std::invalid_argument("dataset has an empty segment");

  std::vector<Parameter*> learnable = params.all();
  AdamState adam =
      make_adam_state(learnable, config.learning_rate, config.weight_decay,
                      config.beta1, config.beta2, config.epsilon);

  int k_train = static_cast<int>(dataset.train_examples.size());
  const double upstream = 1.0 / k_train;  // loss = mean of per-example MSE

  std::vector<EpochRecord> records;
  records.reserve(config.epochs);
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    double batch_loss = 0.0;
    for (int k = 0; k < k_train; ++k) {
      const WindowExample& ex = dataset.train_examples[k];
      Rng rng(derive_seed(config.seed, streams::dropout,
                          static_cast<std::uint64_t>(epoch),
                          static_cast<std::uint64_t>(k)));
      ForwardCache cache;
      DenseMatrix pred = model_forward(ex.x, ops, params, true, rng, &cache);
      double example_loss = mse(pred, ex.y);
      if (!std::isfinite(example_loss))
        throw std::runtime_error("epoch " + std::to_string(epoch) +
                                 ": non-finite training loss at example " +
                                 std::to_string(k));
      batch_loss += example_loss;
      DenseMatrix grad_pred(pred.rows, pred.cols);
      mse_backward(pred, ex.y, upstream, &grad_pred);
      model_backward(params, cache, grad_pred);
    }
    adam_step(learnable, adam);

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = segment_loss(params, dataset.train_examples, ops);
    rec.test_loss = segment_loss(params, dataset.test_examples, ops);
    if (!std::isfinite(rec.train_loss) || !std::isfinite(rec.test_loss))
      throw std::runtime_error("epoch " + std::to_string(epoch) +
                               ": non-finite evaluation loss");
    records.push_back(rec);
  }
  return records;
}

EvalResult evaluate(ModelParams& params,
                    const std::vector<WindowExample>& segment,
                    const GraphOperators& ops) {
  if (segment.empty()) throw std::invalid_argument("empty dataset segment");

  int k_count = static_cast<int>(segment.size());
  int n = segment[0].y.rows;
  EvalResult result;
  result.se = DenseMatrix(k_count, n);
  result.predictions = DenseMatrix(k_count, n);
  result.labels = DenseMatrix(k_count, n);

  Rng unused(0);
  for (int k = 0; k < k_count; ++k) {
    const WindowExample& ex = segment[k];
    DenseMatrix pred = model_forward(ex.x, ops, params, false, unused);
    result.label_times.push_back(ex.t);
    for (int i = 0; i < n; ++i) {
      double err = pred(i, 0) - ex.y(i, 0);
      result.predictions(k, i) = pred(i, 0);
      result.labels(k, i) = ex.y(i, 0);
      result.se(k, i) = err * err;
    }
  }

  double total = 0.0;
  for (double v : result.se.data) total += v;
  result.mse = total / result.se.size();

  std::vector<double> flat = result.se.data;
  std::sort(flat.begin(), flat.end());
  result.median_se = quantile_sorted(flat, 0.5);
  return result;
}

}  // namespace sgbench
