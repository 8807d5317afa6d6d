#pragma once

#include <cstdint>
#include <vector>

#include "sgbench/dataset.hpp"
#include "sgbench/matrix.hpp"
#include "sgbench/models.hpp"

namespace sgbench {

struct TrainConfig {
  int epochs = 200;
  double learning_rate = 0.001;
  double weight_decay = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;
};

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double test_loss = 0.0;
};

struct EvalResult {
  DenseMatrix se;           // example x node squared errors
  DenseMatrix predictions;  // example x node
  DenseMatrix labels;       // example x node
  std::vector<int> label_times;
  double mse = 0.0;
  double median_se = 0.0;
};

// Full-batch training: every epoch runs all train examples in order with
// dropout active (each example gets its own keyed RNG stream so results
// never depend on scheduling), accumulates the gradient of the mean
// per-example MSE, takes exactly one Adam step, then records train and test
// losses in eval mode. Deterministic given (seed, config).
std::vector<EpochRecord> train(ModelParams& params,
                               const WindowedDataset& dataset,
                               const GraphOperators& ops,
                               const TrainConfig& config);

// Eval-mode metrics over one segment's examples: per-cell squared errors,
// their mean and median, and the prediction series per node.
EvalResult evaluate(ModelParams& params,
                    const std::vector<WindowExample>& segment,
                    const GraphOperators& ops);

}  // namespace sgbench
