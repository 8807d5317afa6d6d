#include "sgbench/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <utility>

#include "sgbench/fmt.hpp"
#include "sgbench/json_out.hpp"
#include "sgbench/stats.hpp"
#include "sgbench/svg.hpp"

namespace sgbench {

namespace fs = std::filesystem;

// ---- OutputTracker ---------------------------------------------------------

void OutputTracker::write_text(const std::string& relative,
                               const std::string& content) {
  fs::path p = root_ / relative;
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  f.close();
  if (!f) throw std::runtime_error("write failed for " + p.string());
  record(relative);
}

void OutputTracker::record(const std::string& relative) {
  if (std::find(written_.begin(), written_.end(), relative) == written_.end())
    written_.push_back(relative);
}

void OutputTracker::remove_written() {
  for (const std::string& rel : written_) {
    std::error_code ec;
    fs::remove(root_ / rel, ec);  // best effort; cleanup must not throw
  }
  written_.clear();
}

// ---- File naming -----------------------------------------------------------

std::string curve_file(ModelKind kind, std::uint64_t seed) {
  return "curve_" + std::string(to_string(kind)) + "_s" +
         std::to_string(seed) + ".csv";
}
std::string params_file(ModelKind kind, std::uint64_t seed) {
  return "params_" + std::string(to_string(kind)) + "_s" +
         std::to_string(seed) + ".txt";
}
std::string pred_file(ModelKind kind, std::uint64_t seed,
                      const std::string& segment) {
  return "pred_" + std::string(to_string(kind)) + "_s" +
         std::to_string(seed) + "_" + segment + ".csv";
}
std::string se_file(ModelKind kind, std::uint64_t seed,
                    const std::string& segment) {
  return "se_" + std::string(to_string(kind)) + "_s" + std::to_string(seed) +
         "_" + segment + ".csv";
}
std::string stats_file(std::uint64_t seed) {
  return "stats_s" + std::to_string(seed) + ".csv";
}

std::vector<std::string> expected_files(const PipelineConfig& config) {
  std::vector<std::string> files = {
      "qa.json",          "adjacency.csv",    "labels_train.csv",
      "labels_test.csv",  "fig_adjacency.svg", "fig_box_train.svg",
      "fig_box_test.svg", "report.json"};
  for (ModelKind kind : config.models) {
    files.push_back("fig_curves_" + std::string(to_string(kind)) + ".svg");
    files.push_back("fig_series_" + std::string(to_string(kind)) + ".svg");
  }
  for (std::uint64_t seed : config.seeds) {
    files.push_back(stats_file(seed));
    for (ModelKind kind : config.models) {
      files.push_back(curve_file(kind, seed));
      files.push_back(params_file(kind, seed));
      for (const char* seg : {"train", "test"}) {
        files.push_back(pred_file(kind, seed, seg));
        files.push_back(se_file(kind, seed, seg));
      }
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

// ---- CSV helpers -----------------------------------------------------------

namespace {

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

std::vector<std::vector<std::string>> read_csv_rows(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(split_cells(line));
  }
  if (rows.empty()) throw std::runtime_error("empty csv " + path.string());
  return rows;
}

double cell_double(const std::string& cell, const fs::path& path) {
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  auto [p, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc() || p != end)
    throw std::runtime_error("bad numeric cell '" + cell + "' in " +
                             path.string());
  return v;
}

int cell_int(const std::string& cell, const fs::path& path) {
  int v = 0;
  const char* end = cell.data() + cell.size();
  auto [p, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc() || p != end)
    throw std::runtime_error("bad integer cell '" + cell + "' in " +
                             path.string());
  return v;
}

// `t,<code...>` table: one row per label time, one column per product.
struct SeriesTable {
  std::vector<std::string> codes;
  std::vector<int> times;
  DenseMatrix values;
};

SeriesTable read_series_csv(const fs::path& path) {
  auto rows = read_csv_rows(path);
  if (rows[0].empty() || rows[0][0] != "t")
    throw std::runtime_error("expected 't' header in " + path.string());
  SeriesTable table;
  table.codes.assign(rows[0].begin() + 1, rows[0].end());
  int n = static_cast<int>(table.codes.size());
  int k = static_cast<int>(rows.size()) - 1;
  table.values = DenseMatrix(k, n);
  for (int i = 0; i < k; ++i) {
    const auto& row = rows[i + 1];
    if (static_cast<int>(row.size()) != n + 1)
      throw std::runtime_error("ragged row in " + path.string());
    table.times.push_back(cell_int(row[0], path));
    for (int j = 0; j < n; ++j)
      table.values(i, j) = cell_double(row[j + 1], path);
  }
  return table;
}

void write_series_csv(OutputTracker& out, const std::string& relative,
                      const std::vector<std::string>& codes,
                      const std::vector<int>& times, const DenseMatrix& m) {
  std::string s = "t";
  for (const std::string& c : codes) s += "," + c;
  s += "\n";
  for (int i = 0; i < m.rows; ++i) {
    s += std::to_string(times[i]);
    for (int j = 0; j < m.cols; ++j) s += "," + format_double(m(i, j));
    s += "\n";
  }
  out.write_text(relative, s);
}

std::vector<EpochRecord> read_curve_csv(const fs::path& path) {
  auto rows = read_csv_rows(path);
  if (rows[0] != std::vector<std::string>{"epoch", "train_loss", "test_loss"})
    throw std::runtime_error("unexpected curve header in " + path.string());
  std::vector<EpochRecord> records;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 3)
      throw std::runtime_error("ragged row in " + path.string());
    records.push_back({cell_int(rows[i][0], path),
                       cell_double(rows[i][1], path),
                       cell_double(rows[i][2], path)});
  }
  return records;
}

std::vector<double> read_se_values(const fs::path& path) {
  SeriesTable table = read_series_csv(path);
  return table.values.data;  // row-major: time-major over products
}

// ---- Data preparation helpers ----------------------------------------------

TemporalFeatureTable align_columns(const TemporalFeatureTable& table,
                                   const std::vector<ProductNode>& nodes) {
  TemporalFeatureTable out;
  out.feature = table.feature;
  out.timestamps = table.timestamps;
  out.values = DenseMatrix(table.t_len(), static_cast<int>(nodes.size()));
  for (int j = 0; j < static_cast<int>(nodes.size()); ++j) {
    int c = table.column_of(nodes[j].code);
    if (c < 0)
      throw std::runtime_error("feature table lacks product " +
                               nodes[j].code);
    out.product_codes.push_back(nodes[j].code);
    for (int t = 0; t < table.t_len(); ++t)
      out.values(t, j) = table.values(t, c);
  }
  return out;
}

FixtureSpec fixture_spec_from(const PipelineConfig& config) {
  FixtureSpec spec;
  spec.products = config.synth_products;
  spec.inactive = config.synth_inactive;
  spec.t_len = config.synth_t;
  spec.coupling = config.coupling;
  spec.noise_std = config.noise_std;
  spec.seed = config.data_seed;
  return spec;
}

QaSummary make_qa_summary(const PreparedData& data) {
  QaSummary qa;
  qa.nodes_before = data.graph.node_count();
  qa.nodes_after = data.masked.graph.node_count();
  qa.removed_codes = data.masked.removed_codes;
  qa.edges_before = static_cast<int>(data.graph.edges.size());
  qa.edges_after = static_cast<int>(data.masked.graph.edges.size());
  return qa;
}

DenseMatrix vstack(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols != b.cols) throw std::runtime_error("vstack column mismatch");
  DenseMatrix out(a.rows + b.rows, a.cols);
  std::copy(a.data.begin(), a.data.end(), out.data.begin());
  std::copy(b.data.begin(), b.data.end(), out.data.begin() + a.data.size());
  return out;
}

DenseMatrix denormalize(const DenseMatrix& z, const Normalizer& norm) {
  DenseMatrix out = z;
  for (int i = 0; i < z.rows; ++i)
    for (int j = 0; j < z.cols; ++j)
      out(i, j) = z(i, j) * norm.stddev[j] + norm.mean[j];
  return out;
}

ordered_json config_json(const PipelineConfig& c) {
  ordered_json j;
  j["data_mode"] = to_string(c.data_mode);
  j["data_dir"] = c.data_dir;
  j["edge_type"] = to_string(c.edge_type);
  j["feature"] = to_string(c.feature);
  j["synth_products"] = c.synth_products;
  j["synth_inactive"] = c.synth_inactive;
  j["synth_t"] = c.synth_t;
  j["coupling"] = c.coupling;
  j["noise_std"] = c.noise_std;
  j["data_seed"] = c.data_seed;
  j["train_ratio"] = c.train_ratio;
  j["window"] = c.window;
  j["zero_fraction_threshold"] = c.zero_fraction_threshold;
  j["adjacency_mode"] = to_string(c.adjacency_mode);
  j["normalize_scope"] = to_string(c.normalize_scope);
  ordered_json models = ordered_json::array();
  for (ModelKind m : c.models) models.push_back(to_string(m));
  j["models"] = models;
  j["epochs"] = c.epochs;
  j["learning_rate"] = c.learning_rate;
  j["weight_decay"] = c.weight_decay;
  j["adam_beta1"] = c.adam_beta1;
  j["adam_beta2"] = c.adam_beta2;
  j["adam_eps"] = c.adam_eps;
  ordered_json seeds = ordered_json::array();
  for (std::uint64_t s : c.seeds) seeds.push_back(s);
  j["seeds"] = seeds;
  j["out_dir"] = c.out_dir;
  return j;
}

bool has_model(const PipelineConfig& config, ModelKind kind) {
  return std::find(config.models.begin(), config.models.end(), kind) !=
         config.models.end();
}

}  // namespace

// ---- Preparation -----------------------------------------------------------

PreparedData prepare_data(const PipelineConfig& config) {
  validate_config(config);
  PreparedData data;
  TemporalFeatureTable full;
  if (config.data_mode == DataMode::synth) {
    Fixture fx = make_fixture(fixture_spec_from(config));
    data.graph =
        dedupe(fx.raw_nodes, fx.raw_edges.at(config.edge_type),
               config.edge_type);
    const TemporalFeatureTable* selected = nullptr;
    for (const TemporalFeatureTable& t : fx.features)
      if (t.feature == config.feature) selected = &t;
    if (!selected) throw std::runtime_error("fixture lacks requested feature");
    full = align_columns(*selected, data.graph.nodes);
  } else {
    fs::path dir = config.data_dir;
    std::string edges_name =
        "edges_" + std::string(to_string(config.edge_type)) + ".csv";
    std::string feature_name =
        std::string(to_string(config.feature)) + ".csv";
    IngestResult r =
        ingest((dir / "nodes.csv").string(), (dir / edges_name).string(),
               {(dir / feature_name).string()}, config.edge_type);
    data.graph = std::move(r.graph);
    full = std::move(r.features.at(0));
  }
  data.masked =
      mask_inactive_nodes(data.graph, full, config.zero_fraction_threshold);
  data.feature = align_columns(full, data.masked.graph.nodes);
  data.split = split(data.feature.t_len(), config.train_ratio, config.window);
  data.normalizer =
      fit_normalizer(data.feature, data.split, config.normalize_scope);
  data.normalized = apply_normalizer(data.feature, data.normalizer);
  data.dataset = make_windows(data.normalized, data.split, config.window);
  data.ops = build_graph_operators(data.masked.graph, config.adjacency_mode);
  return data;
}

std::string qa_summary_line(const QaSummary& qa) {
  return "nodes: " + std::to_string(qa.nodes_before) + " → " +
         std::to_string(qa.nodes_after) + " (removed " +
         std::to_string(qa.removed_codes.size()) + ")";
}

// ---- Stages ----------------------------------------------------------------

QaSummary stage_qa(const PipelineConfig& config, const PreparedData& data,
                   OutputTracker& out) {
  QaSummary qa = make_qa_summary(data);

  ordered_json j;
  j["schema"] = "qa-summary/v1";
  j["edge_type"] = to_string(config.edge_type);
  j["feature"] = to_string(config.feature);
  j["zero_fraction_threshold"] = config.zero_fraction_threshold;
  j["nodes_before"] = qa.nodes_before;
  j["nodes_after"] = qa.nodes_after;
  j["removed_count"] = static_cast<int>(qa.removed_codes.size());
  j["removed_codes"] = qa.removed_codes;
  j["edges_before"] = qa.edges_before;
  j["edges_after"] = qa.edges_after;
  out.write_text("qa.json", dump_json(j));

  DenseMatrix adj = adjacency_matrix(data.masked.graph);
  std::string csv = "code";
  for (const ProductNode& node : data.masked.graph.nodes)
    csv += "," + node.code;
  csv += "\n";
  for (int i = 0; i < adj.rows; ++i) {
    csv += data.masked.graph.nodes[i].code;
    for (int j2 = 0; j2 < adj.cols; ++j2)
      csv += "," + std::to_string(static_cast<int>(adj(i, j2)));
    csv += "\n";
  }
  out.write_text("adjacency.csv", csv);
  return qa;
}

void stage_synth(const PipelineConfig& config, OutputTracker& out) {
  Fixture fx = make_fixture(fixture_spec_from(config));
  write_fixture(fx, out.root().string());
  out.record("nodes.csv");
  for (EdgeType t : {EdgeType::plant, EdgeType::storage, EdgeType::group,
                     EdgeType::subgroup})
    out.record("edges_" + std::string(to_string(t)) + ".csv");
  for (FeatureName f :
       {FeatureName::production, FeatureName::sales_order,
        FeatureName::delivery, FeatureName::factory_issue})
    out.record(std::string(to_string(f)) + ".csv");
}

void stage_train(const PipelineConfig& config, const PreparedData& data,
                 OutputTracker& out) {
  const std::vector<std::string>& codes = data.feature.product_codes;
  int n = static_cast<int>(codes.size());

  auto label_matrix = [&](const std::vector<WindowExample>& segment,
                          std::vector<int>& times) {
    DenseMatrix m(static_cast<int>(segment.size()), n);
    for (int k = 0; k < m.rows; ++k) {
      times.push_back(segment[k].t);
      for (int j = 0; j < n; ++j) m(k, j) = segment[k].y(j, 0);
    }
    return m;
  };
  std::vector<int> train_times, test_times;
  DenseMatrix train_labels = label_matrix(data.dataset.train_examples,
                                          train_times);
  DenseMatrix test_labels = label_matrix(data.dataset.test_examples,
                                         test_times);
  write_series_csv(out, "labels_train.csv", codes, train_times, train_labels);
  write_series_csv(out, "labels_test.csv", codes, test_times, test_labels);

  for (std::uint64_t seed : config.seeds) {
    for (ModelKind kind : config.models) {
      ModelConfig mc = default_config(kind);
      mc.input_dim = config.window;
      ModelParams params = init_params(mc, seed);

      TrainConfig tc;
      tc.epochs = config.epochs;
      tc.learning_rate = config.learning_rate;
      tc.weight_decay = config.weight_decay;
      tc.beta1 = config.adam_beta1;
      tc.beta2 = config.adam_beta2;
      tc.epsilon = config.adam_eps;
      tc.seed = seed;
      std::vector<EpochRecord> records =
          train(params, data.dataset, data.ops, tc);

      std::string curve = "epoch,train_loss,test_loss\n";
      for (const EpochRecord& r : records)
        curve += std::to_string(r.epoch) + "," + format_double(r.train_loss) +
                 "," + format_double(r.test_loss) + "\n";
      out.write_text(curve_file(kind, seed), curve);

      save_params(params, out.path_for(params_file(kind, seed)).string());
      out.record(params_file(kind, seed));

      EvalResult train_eval =
          evaluate(params, data.dataset.train_examples, data.ops);
      EvalResult test_eval =
          evaluate(params, data.dataset.test_examples, data.ops);
      write_series_csv(out, pred_file(kind, seed, "train"), codes,
                       train_eval.label_times, train_eval.predictions);
      write_series_csv(out, pred_file(kind, seed, "test"), codes,
                       test_eval.label_times, test_eval.predictions);
      write_series_csv(out, se_file(kind, seed, "train"), codes,
                       train_eval.label_times, train_eval.se);
      write_series_csv(out, se_file(kind, seed, "test"), codes,
                       test_eval.label_times, test_eval.se);
    }
  }
}

void stage_stats(const PipelineConfig& config, OutputTracker& out) {
  if (config.models.size() < 2)
    throw std::runtime_error("stats needs at least two models");

  for (std::uint64_t seed : config.seeds) {
    std::string csv = "dataset_segment,test,statistic,df,p,corrected_p,significant\n";
    for (const char* segment : {"train", "test"}) {
      std::vector<SampleGroup> groups;
      for (ModelKind kind : config.models)
        groups.push_back(
            {to_string(kind),
             read_se_values(out.path_for(se_file(kind, seed, segment)))});
      auto group_of = [&](ModelKind kind) -> const SampleGroup& {
        for (std::size_t i = 0; i < config.models.size(); ++i)
          if (config.models[i] == kind) return groups[i];
        throw std::runtime_error("model group missing");
      };

      std::vector<TestResult> results;
      results.push_back(kruskal_wallis(groups));

      std::vector<TestResult> pairwise;
      if (has_model(config, ModelKind::mlp) &&
          has_model(config, ModelKind::gcn)) {
        TestResult r = mann_whitney_u(group_of(ModelKind::mlp),
                                      group_of(ModelKind::gcn));
        r.test_name = "mann_whitney_u_mlp_vs_gcn";
        pairwise.push_back(r);
      }
      if (has_model(config, ModelKind::gcn) &&
          has_model(config, ModelKind::gat)) {
        TestResult r = mann_whitney_u(group_of(ModelKind::gcn),
                                      group_of(ModelKind::gat));
        r.test_name = "mann_whitney_u_gcn_vs_gat";
        pairwise.push_back(r);
      }
      apply_bonferroni(pairwise, static_cast<int>(pairwise.size()));
      results.insert(results.end(), pairwise.begin(), pairwise.end());

      for (const TestResult& r : results) {
        bool omnibus = !r.corrected_p.has_value();
        csv += std::string(segment) + "," + r.test_name + "," +
               format_double(r.statistic) + ",";
        csv += omnibus ? std::to_string(r.degrees_of_freedom) : "";
        csv += "," + format_double(r.p_value) + ",";
        csv += omnibus ? "" : format_double(*r.corrected_p);
        csv += std::string(",") + (r.significant ? "true" : "false") + "\n";
      }
    }
    out.write_text(stats_file(seed), csv);
  }
}

void stage_report(const PipelineConfig& config, const PreparedData& data,
                  OutputTracker& out) {
  QaSummary qa = make_qa_summary(data);
  const std::vector<std::string>& codes = data.feature.product_codes;
  std::uint64_t first_seed = config.seeds.front();

  SeriesTable labels_train =
      read_series_csv(out.path_for("labels_train.csv"));
  SeriesTable labels_test = read_series_csv(out.path_for("labels_test.csv"));
  std::vector<int> all_times = labels_train.times;
  all_times.insert(all_times.end(), labels_test.times.begin(),
                   labels_test.times.end());
  DenseMatrix actual = denormalize(
      vstack(labels_train.values, labels_test.values), data.normalizer);

  // figures ------------------------------------------------------------
  out.write_text("fig_adjacency.svg",
                 render_adjacency_figure(data.masked.graph, config.data_seed));

  for (ModelKind kind : config.models) {
    std::string label = to_string(kind);
    std::vector<EpochRecord> curve =
        read_curve_csv(out.path_for(curve_file(kind, first_seed)));
    out.write_text("fig_curves_" + label + ".svg",
                   render_curves_figure(label, curve));

    SeriesTable pred_train =
        read_series_csv(out.path_for(pred_file(kind, first_seed, "train")));
    SeriesTable pred_test =
        read_series_csv(out.path_for(pred_file(kind, first_seed, "test")));
    DenseMatrix predicted = denormalize(
        vstack(pred_train.values, pred_test.values), data.normalizer);
    out.write_text(
        "fig_series_" + label + ".svg",
        render_series_figure(label, codes, all_times, actual, predicted,
                             data.split.boundary));
  }

  for (const char* segment : {"train", "test"}) {
    std::vector<std::pair<std::string, BoxStats>> boxes;
    for (ModelKind kind : config.models) {
      std::vector<double> se =
          read_se_values(out.path_for(se_file(kind, first_seed, segment)));
      boxes.emplace_back(to_string(kind), box_stats(se));
    }
    out.write_text(
        "fig_box_" + std::string(segment) + ".svg",
        render_box_figure(std::string(segment) + " squared error by model",
                          boxes));
  }

  // report.json ----------------------------------------------------------
  ordered_json report;
  report["schema"] = "run-report/v1";
  report["config"] = config_json(config);

  ordered_json qa_json;
  qa_json["nodes_before"] = qa.nodes_before;
  qa_json["nodes_after"] = qa.nodes_after;
  qa_json["removed_count"] = static_cast<int>(qa.removed_codes.size());
  qa_json["removed_codes"] = qa.removed_codes;
  qa_json["edges_before"] = qa.edges_before;
  qa_json["edges_after"] = qa.edges_after;
  report["qa"] = qa_json;

  ordered_json split_json;
  split_json["t_len"] = data.feature.t_len();
  split_json["boundary"] = data.split.boundary;
  split_json["window"] = data.dataset.window;
  split_json["train_windows"] =
      static_cast<int>(data.dataset.train_examples.size());
  split_json["test_windows"] =
      static_cast<int>(data.dataset.test_examples.size());
  report["split"] = split_json;

  ordered_json models = ordered_json::array();
  for (std::uint64_t seed : config.seeds) {
    for (ModelKind kind : config.models) {
      ordered_json entry;
      entry["model"] = to_string(kind);
      entry["seed"] = seed;
      for (const char* segment : {"train", "test"}) {
        std::vector<double> se =
            read_se_values(out.path_for(se_file(kind, seed, segment)));
        double sum = 0.0;
        for (double v : se) sum += v;
        std::vector<double> sorted = se;
        std::sort(sorted.begin(), sorted.end());
        entry[std::string(segment) + "_mse"] =
            sum / static_cast<double>(se.size());
        entry[std::string(segment) + "_median_se"] =
            quantile_sorted(sorted, 0.5);
      }
      std::vector<EpochRecord> curve =
          read_curve_csv(out.path_for(curve_file(kind, seed)));
      ordered_json epochs = ordered_json::array();
      ordered_json train_loss = ordered_json::array();
      ordered_json test_loss = ordered_json::array();
      for (const EpochRecord& r : curve) {
        epochs.push_back(r.epoch);
        train_loss.push_back(r.train_loss);
        test_loss.push_back(r.test_loss);
      }
      ordered_json curve_json;
      curve_json["epoch"] = epochs;
      curve_json["train_loss"] = train_loss;
      curve_json["test_loss"] = test_loss;
      entry["curve"] = curve_json;
      models.push_back(entry);
    }
  }
  report["models"] = models;

  ordered_json stats = ordered_json::array();
  for (std::uint64_t seed : config.seeds) {
    fs::path path = out.path_for(stats_file(seed));
    auto rows = read_csv_rows(path);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto& row = rows[i];
      if (row.size() != 7)
        throw std::runtime_error("ragged row in " + path.string());
      ordered_json r;
      r["seed"] = seed;
      r["dataset_segment"] = row[0];
      r["test"] = row[1];
      r["statistic"] = cell_double(row[2], path);
      if (row[3].empty())
        r["df"] = nullptr;
      else
        r["df"] = cell_int(row[3], path);
      r["p"] = cell_double(row[4], path);
      if (row[5].empty())
        r["corrected_p"] = nullptr;
      else
        r["corrected_p"] = cell_double(row[5], path);
      r["significant"] = row[6] == "true";
      stats.push_back(r);
    }
  }
  report["stats"] = stats;
  report["files"] = expected_files(config);

  out.write_text("report.json", dump_json(report));
}

QaSummary run_pipeline(const PipelineConfig& config, OutputTracker& out) {
  PreparedData data =
      with_stage("qa", [&] { return prepare_data(config); });
  QaSummary qa = with_stage("qa", [&] { return stage_qa(config, data, out); });
  with_stage("train", [&] { stage_train(config, data, out); });
  with_stage("stats", [&] { stage_stats(config, out); });
  with_stage("report", [&] { stage_report(config, data, out); });
  return qa;
}

}  // namespace sgbench
