#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sgbench/config.hpp"
#include "sgbench/dataset.hpp"
#include "sgbench/graph.hpp"
#include "sgbench/models.hpp"
#include "sgbench/trainer.hpp"

namespace sgbench {

// Failure annotated with the pipeline stage it came from, so the CLI can
// emit `ERROR <stage>: <message>` and clean up.
struct StageError : std::runtime_error {
  std::string stage;
  StageError(std::string stage_name, const std::string& message)
      : std::runtime_error(message), stage(std::move(stage_name)) {}
};

// Run `fn` under a stage name; any non-StageError exception is rethrown as
// a StageError for that stage.
template <typename F>
auto with_stage(const char* name, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

// Records every file an invocation writes under one root so a failed run
// can remove its partial outputs.
class OutputTracker {
 public:
  explicit OutputTracker(std::filesystem::path root)
      : root_(std::move(root)) {}

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path path_for(const std::string& relative) const {
    return root_ / relative;
  }

  // Write content (binary, byte-exact) to root/relative and record it.
  void write_text(const std::string& relative, const std::string& content);
  // Record a file some other writer produced under root.
  void record(const std::string& relative);
  const std::vector<std::string>& written() const { return written_; }
  // Best-effort deletion of everything recorded.
  void remove_written();

 private:
  std::filesystem::path root_;
  std::vector<std::string> written_;
};

// Everything derived deterministically from the config before training:
// the deduped graph, the masked active graph, the selected feature aligned
// to each, the split, normalization, windows, and graph operators.
struct PreparedData {
  DirectedGraph graph;              // after dedupe
  MaskResult masked;                // active subgraph + removed codes
  TemporalFeatureTable feature;     // selected feature, active columns
  SplitSpec split;
  Normalizer normalizer;
  TemporalFeatureTable normalized;  // z-scored active feature
  WindowedDataset dataset;
  GraphOperators ops;
};

PreparedData prepare_data(const PipelineConfig& config);

struct QaSummary {
  int nodes_before = 0;  // after dedupe, before masking
  int nodes_after = 0;
  std::vector<std::string> removed_codes;
  int edges_before = 0;
  int edges_after = 0;
};

// One line like "nodes: 40 -> 29 (removed 11)".
std::string qa_summary_line(const QaSummary& qa);

// ---- Stages ---------------------------------------------------------------
//
// Each stage reads the prepared data and/or files earlier stages left in
// the output directory, so running stages one-per-invocation produces the
// same bytes as one chained `run`.

// Writes qa.json and adjacency.csv for the masked graph.
QaSummary stage_qa(const PipelineConfig& config, const PreparedData& data,
                   OutputTracker& out);

// Writes the synthetic fixture CSVs into out.root().
void stage_synth(const PipelineConfig& config, OutputTracker& out);

// Trains every configured model under every seed; writes label CSVs once,
// and per (model, seed): learning-curve CSV, checkpoint, prediction CSVs,
// and squared-error CSVs for both segments.
void stage_train(const PipelineConfig& config, const PreparedData& data,
                 OutputTracker& out);

// Reads the squared-error CSVs and writes stats_s<seed>.csv per seed:
// Kruskal-Wallis omnibus plus the two pre-declared pairwise tests
// (mlp vs gcn, gcn vs gat), Bonferroni-corrected, on both segments.
void stage_stats(const PipelineConfig& config, OutputTracker& out);

// Reads the CSVs and writes report.json plus every figure.
void stage_report(const PipelineConfig& config, const PreparedData& data,
                  OutputTracker& out);

// qa -> train -> stats -> report under one prepared dataset.
QaSummary run_pipeline(const PipelineConfig& config, OutputTracker& out);

// ---- Shared naming --------------------------------------------------------

std::string curve_file(ModelKind kind, std::uint64_t seed);
std::string params_file(ModelKind kind, std::uint64_t seed);
std::string pred_file(ModelKind kind, std::uint64_t seed,
                      const std::string& segment);
std::string se_file(ModelKind kind, std::uint64_t seed,
                    const std::string& segment);
std::string stats_file(std::uint64_t seed);

// Full sorted manifest of the files a `run` with this config produces.
std::vector<std::string> expected_files(const PipelineConfig& config);

}  // namespace sgbench
