#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sgbench/dataset.hpp"
#include "sgbench/graph.hpp"
#include "sgbench/models.hpp"

namespace sgbench {

enum class DataMode { synth, csv };
const char* to_string(DataMode m);
DataMode data_mode_from_string(const std::string& s);

// Every field has a config-file key of the same name and a CLI flag.
// Defaults follow the benchmark setup: plant edges, sales order feature,
// 0.95 split, window 5, 0.9 masking threshold, three models, 200 epochs,
// Adam 0.001 with 5e-4 weight decay.
struct PipelineConfig {
  DataMode data_mode = DataMode::synth;
  std::string data_dir;  // csv mode: directory holding the dataset files
  EdgeType edge_type = EdgeType::plant;
  FeatureName feature = FeatureName::sales_order;
  int synth_products = 40;
  int synth_inactive = 11;
  int synth_t = 221;
  double coupling = 0.3;
  double noise_std = 1.0;
  std::uint64_t data_seed = 7;  // synthetic data identity; training seeds vary separately
  double train_ratio = 0.95;
  int window = 5;
  double zero_fraction_threshold = 0.9;
  AdjacencyMode adjacency_mode = AdjacencyMode::symmetrized;
  NormalizeScope normalize_scope = NormalizeScope::train_only;
  std::vector<ModelKind> models = {ModelKind::mlp, ModelKind::gcn,
                                   ModelKind::gat};
  int epochs = 200;
  double learning_rate = 0.001;
  double weight_decay = 5e-4;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::vector<std::uint64_t> seeds = {7};
  std::string out_dir = "out";
};

// Set one key; unknown keys and malformed values are rejected with a
// diagnostic naming the key.
void set_config_value(PipelineConfig& config, const std::string& key,
                      const std::string& value);

// Flat `key = value` file; '#' starts a comment, blank lines are skipped,
// later assignments win.
PipelineConfig parse_config_file(const std::string& path);

// Canonical `key = value` text for every field; parsing it back reproduces
// the config exactly.
std::string serialize_config(const PipelineConfig& config);

// Basic cross-field validation shared by all pipeline stages.
void validate_config(const PipelineConfig& config);

std::string models_to_string(const std::vector<ModelKind>& models);
std::string seeds_to_string(const std::vector<std::uint64_t>& seeds);

}  // namespace sgbench
