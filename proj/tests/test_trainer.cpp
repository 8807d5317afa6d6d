#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "sgbench/dataset.hpp"
#include "sgbench/graph.hpp"
#include "sgbench/models.hpp"
#include "sgbench/trainer.hpp"

using namespace sgbench;

namespace {

struct TinyProblem {
  DirectedGraph graph;
  WindowedDataset dataset;
  GraphOperators ops;
};

TinyProblem tiny_problem(std::uint64_t data_seed = 11) {
  std::vector<ProductNode> nodes;
  for (int i = 0; i < 4; ++i)
    nodes.push_back({"N" + std::to_string(i), "G1", "SG1", "P1", "S1"});
  TinyProblem p;
  p.graph.nodes = nodes;
  p.graph.edges = {{0, 1}, {1, 0}, {2, 3}, {3, 2}};

  TemporalFeatureTable t =
      synth_generate(p.graph, 60, 0.3, 1.0, data_seed);
  SplitSpec s = split(t.t_len(), 0.8);
  Normalizer n = fit_normalizer(t, s);
  TemporalFeatureTable z = apply_normalizer(t, n);
  p.dataset = make_windows(z, s);
  p.ops = build_graph_operators(p.graph, AdjacencyMode::symmetrized);
  return p;
}

TrainConfig short_config(std::uint64_t seed) {
  TrainConfig c;
  c.epochs = 15;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("training records one entry per epoch with 1-based numbering") {
  TinyProblem p = tiny_problem();
  ModelParams params = init_params(default_config(ModelKind::mlp), 1);
  auto curve = train(params, p.dataset, p.ops, short_config(1));
  REQUIRE(curve.size() == 15);
  CHECK(curve.front().epoch == 1);
  CHECK(curve.back().epoch == 15);
  for (const auto& r : curve) {
    CHECK(std::isfinite(r.train_loss));
    CHECK(std::isfinite(r.test_loss));
  }
}

TEST_CASE("training is bit-deterministic given the seed") {
  TinyProblem p = tiny_problem();
  for (ModelKind k : {ModelKind::mlp, ModelKind::gcn, ModelKind::gat}) {
    ModelParams a = init_params(default_config(k), 4);
    ModelParams b = init_params(default_config(k), 4);
    auto ca = train(a, p.dataset, p.ops, short_config(4));
    auto cb = train(b, p.dataset, p.ops, short_config(4));
    REQUIRE(ca.size() == cb.size());
    for (size_t i = 0; i < ca.size(); ++i) {
      CHECK(ca[i].train_loss == cb[i].train_loss);
      CHECK(ca[i].test_loss == cb[i].test_loss);
    }
    CHECK(a.weight2.value.data == b.weight2.value.data);

    ModelParams c = init_params(default_config(k), 5);
    auto cc = train(c, p.dataset, p.ops, short_config(5));
    CHECK(cc.back().train_loss != ca.back().train_loss);
  }
}

TEST_CASE("loss falls over training on the coupled toy series") {
  TinyProblem p = tiny_problem();
  for (ModelKind k : {ModelKind::mlp, ModelKind::gcn, ModelKind::gat}) {
    ModelParams params = init_params(default_config(k), 2);
    TrainConfig c;
    c.epochs = 60;
    c.seed = 2;
    auto curve = train(params, p.dataset, p.ops, c);
    double early = 0.0, late = 0.0;
    for (int i = 0; i < 5; ++i) early += curve[i].train_loss;
    for (int i = 55; i < 60; ++i) late += curve[i].train_loss;
    INFO("model ", to_string(k));
    CHECK(late < early);
  }
}

TEST_CASE("evaluate reports per-cell squared errors consistent with mse") {
  TinyProblem p = tiny_problem();
  ModelParams params = init_params(default_config(ModelKind::gcn), 3);
  train(params, p.dataset, p.ops, short_config(3));

  EvalResult r = evaluate(params, p.dataset.test_examples, p.ops);
  int examples = static_cast<int>(p.dataset.test_examples.size());
  CHECK(r.se.rows == examples);
  CHECK(r.se.cols == 4);
  REQUIRE(r.label_times.size() == static_cast<size_t>(examples));
  CHECK(r.label_times.front() == p.dataset.test_examples.front().t);

  double mean = 0.0;
  std::vector<double> cells;
  for (int i = 0; i < r.se.rows; ++i)
    for (int j = 0; j < r.se.cols; ++j) {
      double d = r.predictions(i, j) - r.labels(i, j);
      CHECK(r.se(i, j) == doctest::Approx(d * d).epsilon(1e-12));
      mean += r.se(i, j);
      cells.push_back(r.se(i, j));
    }
  mean /= r.se.size();
  CHECK(r.mse == doctest::Approx(mean).epsilon(1e-12));

  std::sort(cells.begin(), cells.end());
  size_t n = cells.size();
  double median = (n % 2 == 1) ? cells[n / 2]
                               : 0.5 * (cells[n / 2 - 1] + cells[n / 2]);
  CHECK(r.median_se == doctest::Approx(median).epsilon(1e-12));
}

TEST_CASE("train and test losses in the curve match eval-mode metrics") {
  TinyProblem p = tiny_problem();
  ModelParams params = init_params(default_config(ModelKind::mlp), 7);
  auto curve = train(params, p.dataset, p.ops, short_config(7));
  EvalResult tr = evaluate(params, p.dataset.train_examples, p.ops);
  EvalResult te = evaluate(params, p.dataset.test_examples, p.ops);
  CHECK(curve.back().train_loss == doctest::Approx(tr.mse).epsilon(1e-12));
  CHECK(curve.back().test_loss == doctest::Approx(te.mse).epsilon(1e-12));
}
