#include "sgbench/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "sgbench/fmt.hpp"
#include "sgbench/rng.hpp"

namespace sgbench {

const char* to_string(FeatureName f) {
  switch (f) {
    case FeatureName::production: return "production";
    case FeatureName::sales_order: return "sales_order";
    case FeatureName::delivery: return "delivery";
    case FeatureName::factory_issue: return "factory_issue";
  }
  throw std::logic_error("unhandled feature name");
}

FeatureName feature_from_string(const std::string& s) {
  if (s == "production") return FeatureName::production;
  if (s == "sales_order") return FeatureName::sales_order;
  if (s == "delivery") return FeatureName::delivery;
  if (s == "factory_issue") return FeatureName::factory_issue;
  throw std::invalid_argument(
      "unknown feature '" + s +
      "' (expected production, sales_order, delivery, factory_issue)");
}

const char* to_string(NormalizeScope s) {
  switch (s) {
    case NormalizeScope::train_only: return "train_only";
    case NormalizeScope::full_series: return "full_series";
  }
  throw std::logic_error("unhandled normalize scope");
}

NormalizeScope normalize_scope_from_string(const std::string& s) {
  if (s == "train_only") return NormalizeScope::train_only;
  if (s == "full_series") return NormalizeScope::full_series;
  throw std::invalid_argument("unknown normalize scope '" + s +
                              "' (expected train_only, full_series)");
}

int TemporalFeatureTable::column_of(const std::string& code) const {
  for (int j = 0; j < node_count(); ++j) {
    if (product_codes[j] == code) return j;
  }
  return -1;
}

SplitSpec split(int t_len, double train_ratio, int window) {
  if (t_len < 2) throw std::invalid_argument("need at least 2 time points");
  if (!(train_ratio > 0.0 && train_ratio < 1.0))
    throw std::invalid_argument("train_ratio must be in (0, 1)");
  if (window < 1) throw std::invalid_argument("window must be positive");

  SplitSpec spec;
  spec.train_ratio = train_ratio;
  spec.boundary = static_cast<int>(std::floor(train_ratio * t_len));
  int train_len = spec.boundary;
  int test_len = t_len - spec.boundary;
  if (train_len < window + 1 || test_len < window + 1)
    throw std::invalid_argument(
        "segment too short: split of " + std::to_string(t_len) + " at " +
        std::to_string(spec.boundary) + " leaves " + std::to_string(train_len) +
        "/" + std::to_string(test_len) + " points, need at least " +
        std::to_string(window + 1) + " on each side");
  return spec;
}

Normalizer fit_normalizer(const TemporalFeatureTable& table,
                          const SplitSpec& split, NormalizeScope scope) {
  int t_fit = (scope == NormalizeScope::train_only) ? split.boundary
                                                    : table.t_len();
  if (t_fit <= 0 || t_fit > table.t_len())
    throw std::invalid_argument("split boundary outside table");

  Normalizer norm;
  int n = table.node_count();
  norm.mean.resize(n);
  norm.stddev.resize(n);
  for (int j = 0; j < n; ++j) {
    double sum = 0.0;
    for (int t = 0; t < t_fit; ++t) sum += table.values(t, j);
    double mean = sum / t_fit;
    double sq = 0.0;
    for (int t = 0; t < t_fit; ++t) {
      double d = table.values(t, j) - mean;
      sq += d * d;
    }
    double sd = std::sqrt(sq / t_fit);  // population std
    if (sd == 0.0)
      throw std::invalid_argument("product '" + table.product_codes[j] +
                                  "' is constant over the fitting segment; "
                                  "it should have been masked");
    norm.mean[j] = mean;
    norm.stddev[j] = sd;
  }
  return norm;
}

TemporalFeatureTable apply_normalizer(const TemporalFeatureTable& table,
                                      const Normalizer& norm) {
  int n = table.node_count();
  if (static_cast<int>(norm.mean.size()) != n ||
      static_cast<int>(norm.stddev.size()) != n)
    throw std::invalid_argument("normalizer size does not match table");

  TemporalFeatureTable out = table;
  for (int t = 0; t < table.t_len(); ++t)
    for (int j = 0; j < n; ++j)
      out.values(t, j) = (table.values(t, j) - norm.mean[j]) / norm.stddev[j];
  return out;
}

namespace {

void append_segment_windows(const TemporalFeatureTable& table, int seg_start,
                            int seg_len, int window,
                            std::vector<WindowExample>& out) {
  int n = table.node_count();
  for (int k = 0; k + window < seg_len; ++k) {
    WindowExample ex;
    ex.x = DenseMatrix(n, window);
    ex.y = DenseMatrix(n, 1);
    ex.t = seg_start + k + window;
    for (int w = 0; w < window; ++w)
      for (int i = 0; i < n; ++i)
        ex.x(i, w) = table.values(seg_start + k + w, i);
    for (int i = 0; i < n; ++i) ex.y(i, 0) = table.values(ex.t, i);
    out.push_back(std::move(ex));
  }
}

}  // namespace

WindowedDataset make_windows(const TemporalFeatureTable& normalized,
                             const SplitSpec& split, int window) {
  int t_len = normalized.t_len();
  int train_len = split.boundary;
  int test_len = t_len - split.boundary;
  if (train_len <= window || test_len <= window)
    throw std::invalid_argument("segment too short for window " +
                                std::to_string(window));

  WindowedDataset ds;
  ds.window = window;
  append_segment_windows(normalized, 0, train_len, window, ds.train_examples);
  append_segment_windows(normalized, split.boundary, test_len, window,
                         ds.test_examples);
  return ds;
}

// ---- CSV helpers ----------------------------------------------------------

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    rows.push_back(split_line(line));
  }
  if (rows.empty()) throw std::runtime_error("'" + path + "' is empty");
  return rows;
}

void require_header(const std::vector<std::string>& got,
                    const std::vector<std::string>& want,
                    const std::string& path) {
  if (got != want) {
    std::string expected;
    for (size_t i = 0; i < want.size(); ++i) {
      if (i) expected += ',';
      expected += want[i];
    }
    throw std::runtime_error("'" + path + "': expected header '" + expected +
                             "'");
  }
}

double parse_cell(const std::string& cell, int row, const std::string& column,
                  const std::string& path) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw std::runtime_error("'" + path + "': non-numeric cell '" + cell +
                             "' at row " + std::to_string(row) + ", column " +
                             column);
  return v;
}

}  // namespace

std::vector<ProductNode> read_nodes_csv(const std::string& path) {
  auto rows = read_csv(path);
  require_header(rows[0], {"product", "group", "subgroup", "plant", "storage"},
                 path);
  std::vector<ProductNode> nodes;
  for (size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 5)
      throw std::runtime_error("'" + path + "': row " + std::to_string(r) +
                               " has " + std::to_string(rows[r].size()) +
                               " cells, expected 5");
    nodes.push_back(
        {rows[r][0], rows[r][1], rows[r][2], rows[r][3], rows[r][4]});
  }
  return nodes;
}

std::vector<std::pair<std::string, std::string>> read_edges_csv(
    const std::string& path) {
  auto rows = read_csv(path);
  require_header(rows[0], {"source", "target"}, path);
  std::vector<std::pair<std::string, std::string>> edges;
  for (size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 2)
      throw std::runtime_error("'" + path + "': row " + std::to_string(r) +
                               " has " + std::to_string(rows[r].size()) +
                               " cells, expected 2");
    edges.emplace_back(rows[r][0], rows[r][1]);
  }
  return edges;
}

TemporalFeatureTable read_feature_csv(const std::string& path,
                                      FeatureName feature) {
  auto rows = read_csv(path);
  const auto& header = rows[0];
  if (header.empty() || header[0] != "date")
    throw std::runtime_error("'" + path + "': first header column must be "
                             "'date'");
  if (header.size() < 2)
    throw std::runtime_error("'" + path + "': no product columns");
  if (rows.size() < 2)
    throw std::runtime_error("'" + path + "': no data rows");

  TemporalFeatureTable table;
  table.feature = feature;
  table.product_codes.assign(header.begin() + 1, header.end());
  int n = static_cast<int>(table.product_codes.size());
  int t_len = static_cast<int>(rows.size()) - 1;
  table.values = DenseMatrix(t_len, n);
  for (int t = 0; t < t_len; ++t) {
    const auto& row = rows[t + 1];
    if (static_cast<int>(row.size()) != n + 1)
      throw std::runtime_error("'" + path + "': row " + std::to_string(t + 1) +
                               " has " + std::to_string(row.size()) +
                               " cells, expected " + std::to_string(n + 1));
    const std::string& date = row[0];
    if (date.empty())
      throw std::runtime_error("'" + path + "': empty date at row " +
                               std::to_string(t + 1));
    if (t > 0) {
      const std::string& prev = table.timestamps.back();
      if (date == prev)
        throw std::runtime_error("'" + path + "': duplicate timestamp '" +
                                 date + "'");
      if (date < prev)  // ISO dates order lexicographically
        throw std::runtime_error("'" + path +
                                 "': timestamps not increasing at row " +
                                 std::to_string(t + 1));
    }
    table.timestamps.push_back(date);
    for (int j = 0; j < n; ++j)
      table.values(t, j) =
          parse_cell(row[j + 1], t + 1, table.product_codes[j], path);
  }
  return table;
}

void write_nodes_csv(const std::string& path,
                     const std::vector<ProductNode>& nodes) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "product,group,subgroup,plant,storage\n";
  for (const ProductNode& n : nodes)
    out << n.code << ',' << n.group << ',' << n.subgroup << ',' << n.plant
        << ',' << n.storage << '\n';
}

void write_edges_csv(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& edges) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "source,target\n";
  for (const auto& [src, dst] : edges) out << src << ',' << dst << '\n';
}

void write_feature_csv(const std::string& path,
                       const TemporalFeatureTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "date";
  for (const std::string& code : table.product_codes) out << ',' << code;
  out << '\n';
  for (int t = 0; t < table.t_len(); ++t) {
    out << table.timestamps[t];
    for (int j = 0; j < table.node_count(); ++j)
      out << ',' << format_double(table.values(t, j));
    out << '\n';
  }
}

IngestResult ingest(const std::string& nodes_path,
                    const std::string& edges_path,
                    const std::vector<std::string>& feature_paths,
                    EdgeType edge_type) {
  IngestResult result;
  result.graph =
      dedupe(read_nodes_csv(nodes_path), read_edges_csv(edges_path), edge_type);

  for (const std::string& path : feature_paths) {
    FeatureName feature =
        feature_from_string(std::filesystem::path(path).stem().string());
    TemporalFeatureTable table = read_feature_csv(path, feature);

    // Align columns to graph node order; the product sets must match.
    std::unordered_map<std::string, int> col_of;
    for (int j = 0; j < table.node_count(); ++j) {
      if (!col_of.emplace(table.product_codes[j], j).second)
        throw std::runtime_error("'" + path + "': duplicate column '" +
                                 table.product_codes[j] + "'");
    }
    std::string missing, unknown;
    std::unordered_set<std::string> node_codes;
    for (const ProductNode& node : result.graph.nodes) {
      node_codes.insert(node.code);
      if (!col_of.count(node.code))
        missing += (missing.empty() ? "" : ", ") + node.code;
    }
    for (const std::string& code : table.product_codes)
      if (!node_codes.count(code))
        unknown += (unknown.empty() ? "" : ", ") + code;
    if (!missing.empty() || !unknown.empty()) {
      std::string msg = "'" + path + "': product mismatch with nodes file";
      if (!missing.empty()) msg += "; missing columns: " + missing;
      if (!unknown.empty()) msg += "; unknown products: " + unknown;
      throw std::runtime_error(msg);
    }

    TemporalFeatureTable aligned;
    aligned.feature = table.feature;
    aligned.timestamps = table.timestamps;
    aligned.values =
        DenseMatrix(table.t_len(), result.graph.node_count());
    for (int j = 0; j < result.graph.node_count(); ++j) {
      const std::string& code = result.graph.nodes[j].code;
      aligned.product_codes.push_back(code);
      int src_col = col_of.at(code);
      for (int t = 0; t < table.t_len(); ++t)
        aligned.values(t, j) = table.values(t, src_col);
    }
    result.features.push_back(std::move(aligned));
  }
  return result;
}

// ---- Synthetic data --------------------------------------------------------

std::vector<std::string> make_dates(int t_len) {
  using namespace std::chrono;
  const sys_days start = sys_days(year{2023} / January / 1);
  std::vector<std::string> dates;
  dates.reserve(t_len);
  for (int t = 0; t < t_len; ++t) {
    year_month_day ymd{start + days{t}};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u",
                  static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()));
    dates.emplace_back(buf);
  }
  return dates;
}

TemporalFeatureTable synth_generate(const DirectedGraph& graph, int t_len,
                                    double coupling, double noise_std,
                                    std::uint64_t seed) {
  if (t_len < 20) throw std::invalid_argument("synthetic series needs t >= 20");
  if (!(coupling >= 0.0 && coupling < 1.0))
    throw std::invalid_argument("coupling must be in [0, 1)");
  if (noise_std < 0.0)
    throw std::invalid_argument("noise_std must be nonnegative");
  int n = graph.node_count();
  if (n == 0) throw std::invalid_argument("graph has no nodes");

  NormalizedAdjacency a_hat =
      normalize_adjacency(adjacency_matrix(graph), AdjacencyMode::symmetrized);

  TemporalFeatureTable table;
  table.feature = FeatureName::sales_order;
  for (const ProductNode& node : graph.nodes)
    table.product_codes.push_back(node.code);
  table.timestamps = make_dates(t_len);
  table.values = DenseMatrix(t_len, n);

  Rng rng(derive_seed(seed, streams::synth));
  for (int j = 0; j < n; ++j) table.values(0, j) = rng.normal();
  std::vector<double> coupled(n);
  for (int t = 1; t < t_len; ++t) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j)
        acc += a_hat.weights(i, j) * table.values(t - 1, j);
      coupled[i] = acc;
    }
    for (int j = 0; j < n; ++j)
      table.values(t, j) = 0.6 * table.values(t - 1, j) +
                           coupling * coupled[j] + noise_std * rng.normal();
  }
  return table;
}

// ---- Fixture ----------------------------------------------------------------

namespace {

// Directed edges inside each attribute class, expected out-degree ~2.5.
std::vector<std::pair<std::string, std::string>> class_edges(
    const std::vector<ProductNode>& nodes,
    const std::function<std::string(const ProductNode&)>& attr, Rng& rng) {
  std::vector<std::string> class_order;
  std::unordered_map<std::string, std::vector<int>> members;
  for (size_t i = 0; i < nodes.size(); ++i) {
    std::string key = attr(nodes[i]);
    if (!members.count(key)) class_order.push_back(key);
    members[key].push_back(static_cast<int>(i));
  }

  std::vector<std::pair<std::string, std::string>> edges;
  for (const std::string& key : class_order) {
    const std::vector<int>& idx = members[key];
    int s = static_cast<int>(idx.size());
    if (s < 2) continue;
    double q = std::min(1.0, 2.5 / (s - 1));
    for (int i : idx)
      for (int j : idx) {
        if (i == j) continue;
        if (rng.uniform() < q)
          edges.emplace_back(nodes[i].code, nodes[j].code);
      }
  }
  return edges;
}

// Plant lines couple consecutive same-plant products in disjoint pairs.
// Active products pair with active ones (and inactive with inactive) so
// masking never severs a pair; odd leftovers stay isolated.
std::vector<std::pair<std::string, std::string>> pair_edges(
    const std::vector<ProductNode>& nodes, const std::vector<bool>& active,
    const std::function<std::string(const ProductNode&)>& attr) {
  std::vector<std::string> class_order;
  std::unordered_map<std::string, std::vector<int>> members;
  for (size_t i = 0; i < nodes.size(); ++i) {
    std::string key = attr(nodes[i]);
    if (!members.count(key)) class_order.push_back(key);
    members[key].push_back(static_cast<int>(i));
  }
  std::vector<std::pair<std::string, std::string>> edges;
  for (const std::string& key : class_order) {
    for (bool want_active : {true, false}) {
      std::vector<int> list;
      for (int i : members[key])
        if (active[i] == want_active) list.push_back(i);
      for (size_t start = 0; start + 1 < list.size(); start += 2) {
        edges.emplace_back(nodes[list[start]].code, nodes[list[start + 1]].code);
        edges.emplace_back(nodes[list[start + 1]].code, nodes[list[start]].code);
      }
    }
  }
  return edges;
}

DirectedGraph induce(const DirectedGraph& g, const std::vector<bool>& keep) {
  DirectedGraph sub;
  sub.edge_type = g.edge_type;
  std::vector<int> new_index(g.node_count(), -1);
  for (int i = 0; i < g.node_count(); ++i) {
    if (!keep[i]) continue;
    new_index[i] = sub.node_count();
    sub.nodes.push_back(g.nodes[i]);
  }
  for (const auto& [src, dst] : g.edges)
    if (new_index[src] >= 0 && new_index[dst] >= 0)
      sub.edges.emplace_back(new_index[src], new_index[dst]);
  return sub;
}

}  // namespace

Fixture make_fixture(const FixtureSpec& spec) {
  if (spec.products < 2)
    throw std::invalid_argument("fixture needs at least 2 products");
  if (spec.inactive < 0 || spec.inactive >= spec.products)
    throw std::invalid_argument("inactive count must be in [0, products)");

  Fixture fx;
  fx.spec = spec;
  int n = spec.products;

  // Plants get weighted contiguous blocks; the other attributes cycle so
  // their classes interleave across plants.
  const double plant_weight[4] = {0.35, 0.30, 0.20, 0.15};
  int plant_bound[4];
  double cum = 0.0;
  for (int p = 0; p < 4; ++p) {
    cum += plant_weight[p];
    plant_bound[p] = static_cast<int>(std::lround(cum * n));
  }
  plant_bound[3] = n;

  std::vector<ProductNode> products;
  for (int i = 0; i < n; ++i) {
    char code[16];
    std::snprintf(code, sizeof(code), "PRD%03d", i + 1);
    int plant = 0;
    while (i >= plant_bound[plant]) ++plant;
    products.push_back({code, "G" + std::to_string(1 + i % 2),
                        "SG" + std::to_string(1 + i % 5),
                        "P" + std::to_string(1 + plant),
                        "S" + std::to_string(1 + i % 3)});
  }

  // Raw node rows repeat the first few products so ingestion has duplicates
  // to collapse.
  fx.raw_nodes = products;
  for (int i = 0; i < std::min(3, n); ++i) fx.raw_nodes.push_back(products[i]);

  // Spread the inactive products over the index range so every plant keeps
  // active members.
  std::vector<bool> active(n, true);
  for (int k = 0; k < spec.inactive; ++k) {
    int pos = static_cast<int>((k + 0.5) * n / spec.inactive);
    while (!active[pos]) pos = (pos + 1) % n;  // formula collisions at tiny n
    active[pos] = false;
    fx.inactive_codes.push_back(products[pos].code);
  }
  std::sort(fx.inactive_codes.begin(), fx.inactive_codes.end());

  const EdgeType types[4] = {EdgeType::plant, EdgeType::storage,
                             EdgeType::group, EdgeType::subgroup};
  for (int ti = 0; ti < 4; ++ti) {
    Rng rng(derive_seed(spec.seed, streams::fixture, 1, ti));
    auto attr = [ti](const ProductNode& node) -> std::string {
      switch (ti) {
        case 0: return node.plant;
        case 1: return node.storage;
        case 2: return node.group;
        default: return node.subgroup;
      }
    };
    // Plant is the modeling graph: deterministic pair wiring keeps each
    // product's neighborhood small and stable. The other attributes get
    // random intra-class edges for ingestion variety.
    std::vector<std::pair<std::string, std::string>> edges;
    if (types[ti] == EdgeType::plant)
      edges = pair_edges(products, active, attr);
    else
      edges = class_edges(products, attr, rng);
    // a few duplicate rows, again for the dedupe path
    for (size_t k = 0; k < std::min<size_t>(5, edges.size()); ++k)
      edges.push_back(edges[k]);
    fx.raw_edges[types[ti]] = std::move(edges);
  }

  DirectedGraph full =
      dedupe(products, fx.raw_edges[EdgeType::plant], EdgeType::plant);
  DirectedGraph active_graph = induce(full, active);

  // Mostly-zero columns must stay above a 0.9 zero fraction by a margin.
  int sparse_cells = std::max(1, static_cast<int>(spec.t_len * 0.03));

  const FeatureName features[4] = {FeatureName::production,
                                   FeatureName::sales_order,
                                   FeatureName::delivery,
                                   FeatureName::factory_issue};
  for (int fi = 0; fi < 4; ++fi) {
    TemporalFeatureTable sub =
        synth_generate(active_graph, spec.t_len, spec.coupling, spec.noise_std,
                       derive_seed(spec.seed, streams::fixture, 2, fi));
    // Affine map to quantity-like nonnegative values. Z-scoring later undoes
    // the map exactly, so the learning problem is untouched.
    double lo = sub.values.data[0], hi = sub.values.data[0];
    for (double v : sub.values.data) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    for (double& v : sub.values.data)
      v = (hi > lo) ? (v - lo) / (hi - lo) * 100.0 : 50.0;

    TemporalFeatureTable table;
    table.feature = features[fi];
    table.timestamps = make_dates(spec.t_len);
    table.values = DenseMatrix(spec.t_len, n);
    for (int j = 0; j < n; ++j)
      table.product_codes.push_back(products[j].code);

    int sub_col = 0;
    Rng cell_rng(derive_seed(spec.seed, streams::fixture, 3, fi));
    for (int j = 0; j < n; ++j) {
      if (active[j]) {
        for (int t = 0; t < spec.t_len; ++t)
          table.values(t, j) = sub.values(t, sub_col);
        ++sub_col;
      } else {
        for (int c = 0; c < sparse_cells; ++c) {
          int t = std::min(spec.t_len - 1,
                           static_cast<int>(cell_rng.uniform() * spec.t_len));
          table.values(t, j) = cell_rng.uniform(10.0, 90.0);
        }
      }
    }
    fx.features.push_back(std::move(table));
  }
  return fx;
}

void write_fixture(const Fixture& fixture, const std::string& dir) {
  std::filesystem::create_directories(dir);
  auto at = [&dir](const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
  };
  write_nodes_csv(at("nodes.csv"), fixture.raw_nodes);
  for (const auto& [type, edges] : fixture.raw_edges)
    write_edges_csv(at(std::string("edges_") + to_string(type) + ".csv"),
                    edges);
  for (const TemporalFeatureTable& table : fixture.features)
    write_feature_csv(at(std::string(to_string(table.feature)) + ".csv"),
                      table);
}

}  // namespace sgbench
