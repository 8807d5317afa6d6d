#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sgbench/graph.hpp"
#include "sgbench/matrix.hpp"

namespace sgbench {

enum class FeatureName { production, sales_order, delivery, factory_issue };
const char* to_string(FeatureName f);
FeatureName feature_from_string(const std::string& s);

// One temporal feature over all products: values(t, j) is the quantity of
// product product_codes[j] at timestamps[t]. Timestamps are ISO dates and
// strictly increasing; no missing cells.
struct TemporalFeatureTable {
  FeatureName feature = FeatureName::sales_order;
  std::vector<std::string> product_codes;
  std::vector<std::string> timestamps;
  DenseMatrix values;  // T x N

  int t_len() const { return values.rows; }
  int node_count() const { return values.cols; }
  // Column index of a product code, -1 if absent.
  int column_of(const std::string& code) const;
};

// Train/test boundary: train rows [0, boundary), test rows [boundary, T).
struct SplitSpec {
  int boundary = 0;
  double train_ratio = 0.0;
};

// boundary = floor(train_ratio * t_len). Both segments must keep at least
// window + 1 points so windowing stays possible.
SplitSpec split(int t_len, double train_ratio, int window = 5);

// Per-node z-score statistics.
struct Normalizer {
  std::vector<double> mean;
  std::vector<double> stddev;
};

enum class NormalizeScope { train_only, full_series };
const char* to_string(NormalizeScope s);
NormalizeScope normalize_scope_from_string(const std::string& s);

// Mean and population standard deviation per node over the fitting rows
// (train segment by default; full_series uses every row). A zero std means
// a constant column that QA should have removed, so it is an error.
Normalizer fit_normalizer(const TemporalFeatureTable& table,
                          const SplitSpec& split,
                          NormalizeScope scope = NormalizeScope::train_only);

// x -> (x - mean) / std columnwise over the whole table.
TemporalFeatureTable apply_normalizer(const TemporalFeatureTable& table,
                                      const Normalizer& norm);

// One supervised example: x(i, w) holds node i's normalized value at times
// t - window + w, y(i, 0) its value at label time t.
struct WindowExample {
  DenseMatrix x;  // N x window
  DenseMatrix y;  // N x 1
  int t = 0;      // label time index into the full table
};

struct WindowedDataset {
  int window = 5;
  std::vector<WindowExample> train_examples;
  std::vector<WindowExample> test_examples;
};

// Rolling windows per segment; a segment of length L yields L - window
// examples and no window straddles the boundary.
WindowedDataset make_windows(const TemporalFeatureTable& normalized,
                             const SplitSpec& split, int window = 5);

// ---- CSV ingestion and emission ----------------------------------------
//
// nodes file:    header `product,group,subgroup,plant,storage`
// edges file:    header `source,target`, product codes per row
// feature file:  header `date,<code1>,<code2>,...`, ISO dates, one row per
//                time point

std::vector<ProductNode> read_nodes_csv(const std::string& path);
std::vector<std::pair<std::string, std::string>> read_edges_csv(
    const std::string& path);
TemporalFeatureTable read_feature_csv(const std::string& path,
                                      FeatureName feature);

void write_nodes_csv(const std::string& path,
                     const std::vector<ProductNode>& nodes);
void write_edges_csv(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& edges);
void write_feature_csv(const std::string& path,
                       const TemporalFeatureTable& table);

struct IngestResult {
  DirectedGraph graph;
  std::vector<TemporalFeatureTable> features;
};

// Read and dedupe the graph, read every feature file (feature kind inferred
// from the file stem), and realign feature columns to graph node order.
// Rejects tables whose product set differs from the node file's.
IngestResult ingest(const std::string& nodes_path,
                    const std::string& edges_path,
                    const std::vector<std::string>& feature_paths,
                    EdgeType edge_type);

// ---- Synthetic data ------------------------------------------------------

// Graph-coupled AR(1) series over the graph's nodes:
//   x_0 ~ N(0, 1),  x_t = 0.6 x_{t-1} + coupling * A_hat x_{t-1} + eps_t,
// eps_t ~ N(0, noise_std^2) i.i.d., A_hat the symmetrized normalized
// adjacency. Returns the raw process values (fixture emission rescales them
// to nonnegative quantities). Deterministic given seed.
TemporalFeatureTable synth_generate(const DirectedGraph& graph, int t_len,
                                    double coupling, double noise_std,
                                    std::uint64_t seed);

// ISO dates starting 2023-01-01, one per day.
std::vector<std::string> make_dates(int t_len);

// ---- Self-contained fixture ----------------------------------------------

struct FixtureSpec {
  int products = 40;      // distinct products before duplicate rows
  int inactive = 11;      // mostly-zero columns the QA mask should drop
  int t_len = 221;
  double coupling = 0.3;
  double noise_std = 1.0;
  std::uint64_t seed = 7;
};

// A full SupplyGraph-format dataset: raw node rows (with a few duplicates),
// one raw edge list per edge type (with a few duplicate rows), and all four
// feature tables. Active columns carry the coupled process generated on the
// subgraph of active products; inactive columns are mostly zero.
struct Fixture {
  FixtureSpec spec;
  std::vector<ProductNode> raw_nodes;
  std::map<EdgeType, std::vector<std::pair<std::string, std::string>>>
      raw_edges;
  std::vector<TemporalFeatureTable> features;
  std::vector<std::string> inactive_codes;
};

Fixture make_fixture(const FixtureSpec& spec);

// Write nodes.csv, edges_<type>.csv per type, and <feature>.csv per feature
// into dir (created if missing).
void write_fixture(const Fixture& fixture, const std::string& dir);

}  // namespace sgbench
