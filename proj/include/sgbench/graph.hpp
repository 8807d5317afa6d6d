#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sgbench/matrix.hpp"

namespace sgbench {

struct TemporalFeatureTable;  // dataset.hpp

enum class EdgeType { plant, storage, group, subgroup };
const char* to_string(EdgeType t);
EdgeType edge_type_from_string(const std::string& s);

// One product with its typed metadata.
struct ProductNode {
  std::string code;  // unique, non-empty
  std::string group;
  std::string subgroup;
  std::string plant;
  std::string storage;
};

// Homogeneous, directed, binary product graph. Nodes keep ingestion order;
// edges are index pairs (src, dst), unique, endpoints in range.
struct DirectedGraph {
  std::vector<ProductNode> nodes;
  std::vector<std::pair<int, int>> edges;
  EdgeType edge_type = EdgeType::plant;

  int node_count() const { return static_cast<int>(nodes.size()); }
  // Index of a product code, -1 if absent.
  int index_of(const std::string& code) const;
};

// Collapse duplicate nodes (first occurrence wins, input order kept) and
// exact-duplicate directed edges. Edges reference products by code; an
// unknown code is rejected with a diagnostic naming it.
DirectedGraph dedupe(
    const std::vector<ProductNode>& raw_nodes,
    const std::vector<std::pair<std::string, std::string>>& raw_edges,
    EdgeType edge_type);

// Drop every node whose feature column is zero in at least
// zero_fraction_threshold of its time points, together with all touching
// edges. Survivor order is preserved.
struct MaskResult {
  DirectedGraph graph;
  std::vector<std::string> removed_codes;
};
MaskResult mask_inactive_nodes(const DirectedGraph& graph,
                               const TemporalFeatureTable& features,
                               double zero_fraction_threshold);

// Dense n x n binary matrix; entry (i, j) = 1 iff edge i -> j exists.
DenseMatrix adjacency_matrix(const DirectedGraph& graph);

enum class AdjacencyMode { symmetrized, directed_in };
const char* to_string(AdjacencyMode m);
AdjacencyMode adjacency_mode_from_string(const std::string& s);

// Degree-normalized convolution operator with self-loops.
//   symmetrized: S = max(A, A^T), A~ = S + I (binary),
//                result = D~^{-1/2} A~ D~^{-1/2} with D~ = diag(row sums).
//   directed_in: self-loops added; entry (j, i) for edge i -> j is
//                1/sqrt(d_i d_j) with d = in-degree of A + I, so the
//                operator aggregates each node's in-neighbors.
struct NormalizedAdjacency {
  int n = 0;
  DenseMatrix weights;
  AdjacencyMode mode = AdjacencyMode::symmetrized;
};
NormalizedAdjacency normalize_adjacency(const DenseMatrix& a,
                                        AdjacencyMode mode);

// Binary neighborhood mask with self-loops for attention layers; entry
// (i, j) = 1 iff j is in node i's neighborhood under the given mode.
DenseMatrix attention_mask(const DenseMatrix& a, AdjacencyMode mode);

}  // namespace sgbench
