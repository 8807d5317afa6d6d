#include "sgbench/graph.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "sgbench/dataset.hpp"

namespace sgbench {

const char* to_string(EdgeType t) {
  switch (t) {
    case EdgeType::plant: return "plant";
    case EdgeType::storage: return "storage";
    case EdgeType::group: return "group";
    case EdgeType::subgroup: return "subgroup";
  }
  throw std::logic_error("unhandled edge type");
}

EdgeType edge_type_from_string(const std::string& s) {
  if (s == "plant") return EdgeType::plant;
  if (s == "storage") return EdgeType::storage;
  if (s == "group") return EdgeType::group;
  if (s == "subgroup") return EdgeType::subgroup;
  throw std::invalid_argument("unknown edge type '" + s +
                              "' (expected plant, storage, group, subgroup)");
}

int DirectedGraph::index_of(const std::string& code) const {
  for (int i = 0; i < node_count(); ++i) {
    if (nodes[i].code == code) return i;
  }
  return -1;
}

DirectedGraph dedupe(
    const std::vector<ProductNode>& raw_nodes,
    const std::vector<std::pair<std::string, std::string>>& raw_edges,
    EdgeType edge_type) {
  if (raw_nodes.empty()) throw std::invalid_argument("no product rows");

  DirectedGraph g;
  g.edge_type = edge_type;
  std::unordered_map<std::string, int> index;
  for (const ProductNode& node : raw_nodes) {
    if (node.code.empty()) throw std::invalid_argument("product with empty code");
    if (index.count(node.code)) continue;  // first occurrence wins
    index.emplace(node.code, g.node_count());
    g.nodes.push_back(node);
  }

  std::set<std::pair<int, int>> seen;
  for (const auto& [src, dst] : raw_edges) {
    auto si = index.find(src);
    auto di = index.find(dst);
    if (si == index.end())
      throw std::invalid_argument("edge references unknown product '" + src + "'");
    if (di == index.end())
      throw std::invalid_argument("edge references unknown product '" + dst + "'");
    std::pair<int, int> e{si->second, di->second};
    if (!seen.insert(e).second) continue;
    g.edges.push_back(e);
  }
  return g;
}

MaskResult mask_inactive_nodes(const DirectedGraph& graph,
                               const TemporalFeatureTable& features,
                               double zero_fraction_threshold) {
  if (zero_fraction_threshold <= 0.0 || zero_fraction_threshold > 1.0)
    throw std::invalid_argument("zero_fraction_threshold must be in (0, 1]");
  if (features.t_len() <= 0) throw std::invalid_argument("feature table is empty");

  MaskResult res;
  res.graph.edge_type = graph.edge_type;
  std::vector<int> new_index(graph.node_count(), -1);
  for (int i = 0; i < graph.node_count(); ++i) {
    const std::string& code = graph.nodes[i].code;
    int col = features.column_of(code);
    if (col < 0)
      throw std::invalid_argument("no feature column for product '" + code + "'");
    int zeros = 0;
    for (int t = 0; t < features.t_len(); ++t) {
      if (features.values(t, col) == 0.0) ++zeros;
    }
    double frac = static_cast<double>(zeros) / features.t_len();
    if (frac >= zero_fraction_threshold) {
      res.removed_codes.push_back(code);
    } else {
      new_index[i] = res.graph.node_count();
      res.graph.nodes.push_back(graph.nodes[i]);
    }
  }
  for (const auto& [src, dst] : graph.edges) {
    if (new_index[src] < 0 || new_index[dst] < 0) continue;
    res.graph.edges.emplace_back(new_index[src], new_index[dst]);
  }
  return res;
}

DenseMatrix adjacency_matrix(const DirectedGraph& graph) {
  int n = graph.node_count();
  DenseMatrix a(n, n);
  for (const auto& [src, dst] : graph.edges) {
    if (src < 0 || src >= n || dst < 0 || dst >= n)
      throw std::invalid_argument("edge endpoint out of range");
    a(src, dst) = 1.0;
  }
  return a;
}

const char* to_string(AdjacencyMode m) {
  switch (m) {
    case AdjacencyMode::symmetrized: return "symmetrized";
    case AdjacencyMode::directed_in: return "directed_in";
  }
  throw std::logic_error("unhandled adjacency mode");
}

AdjacencyMode adjacency_mode_from_string(const std::string& s) {
  if (s == "symmetrized") return AdjacencyMode::symmetrized;
  if (s == "directed_in") return AdjacencyMode::directed_in;
  throw std::invalid_argument("unknown adjacency mode '" + s +
                              "' (expected symmetrized, directed_in)");
}

namespace {

void check_square_binary(const DenseMatrix& a) {
  if (a.rows != a.cols)
    throw std::invalid_argument("adjacency must be square, got " + a.shape());
  for (double v : a.data) {
    if (v != 0.0 && v != 1.0)
      throw std::invalid_argument("adjacency entries must be 0 or 1");
  }
}

// A~ = with-self-loop neighborhood matrix for the given mode: symmetrized
// takes max(A, A^T) + I, directed_in takes A + I (entry (i, j) = edge i->j).
DenseMatrix with_self_loops(const DenseMatrix& a, AdjacencyMode mode) {
  int n = a.rows;
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double v = a(i, j);
      if (mode == AdjacencyMode::symmetrized) v = std::max(v, a(j, i));
      m(i, j) = v;
    }
    m(i, i) = 1.0;
  }
  return m;
}

}  // namespace

NormalizedAdjacency normalize_adjacency(const DenseMatrix& a,
                                        AdjacencyMode mode) {
  check_square_binary(a);
  int n = a.rows;
  DenseMatrix tilde = with_self_loops(a, mode);

  NormalizedAdjacency result;
  result.n = n;
  result.mode = mode;
  result.weights = DenseMatrix(n, n);

  if (mode == AdjacencyMode::symmetrized) {
    // D~^{-1/2} A~ D~^{-1/2}; self-loops keep every degree >= 1.
    std::vector<double> inv_sqrt(n);
    for (int i = 0; i < n; ++i) {
      double d = 0.0;
      for (int j = 0; j < n; ++j) d += tilde(i, j);
      inv_sqrt[i] = 1.0 / std::sqrt(d);
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        result.weights(i, j) = inv_sqrt[i] * tilde(i, j) * inv_sqrt[j];
  } else {
    // Row r aggregates its in-neighbors: weight (r, c) for edge c -> r is
    // 1/sqrt(d_c d_r) with d = in-degree of A + I.
    std::vector<double> inv_sqrt(n);
    for (int j = 0; j < n; ++j) {
      double d = 0.0;
      for (int i = 0; i < n; ++i) d += tilde(i, j);
      inv_sqrt[j] = 1.0 / std::sqrt(d);
    }
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (tilde(c, r) != 0.0)
          result.weights(r, c) = inv_sqrt[c] * inv_sqrt[r];
  }
  return result;
}

DenseMatrix attention_mask(const DenseMatrix& a, AdjacencyMode mode) {
  check_square_binary(a);
  int n = a.rows;
  DenseMatrix tilde = with_self_loops(a, mode);
  DenseMatrix mask(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // Node i attends over its in-neighborhood in directed mode.
      double v = (mode == AdjacencyMode::symmetrized) ? tilde(i, j) : tilde(j, i);
      mask(i, j) = (v != 0.0) ? 1.0 : 0.0;
    }
  return mask;
}

}  // namespace sgbench
