#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "sgbench/dataset.hpp"
#include "sgbench/graph.hpp"

using namespace sgbench;

namespace {

ProductNode node(const std::string& code) {
  return {code, "G1", "SG1", "P1", "S1"};
}

}  // namespace

TEST_CASE("dedupe collapses duplicate nodes and edges, keeping order") {
  std::vector<ProductNode> raw = {node("A"), node("B"), node("A"), node("C")};
  std::vector<std::pair<std::string, std::string>> edges = {
      {"A", "B"}, {"B", "C"}, {"A", "B"}};
  DirectedGraph g = dedupe(raw, edges, EdgeType::plant);
  CHECK(g.node_count() == 3);
  CHECK(g.nodes[0].code == "A");
  CHECK(g.nodes[1].code == "B");
  CHECK(g.nodes[2].code == "C");
  CHECK(g.edges.size() == 2);
  CHECK(g.index_of("C") == 2);
  CHECK(g.index_of("missing") == -1);

  edges.push_back({"A", "nope"});
  CHECK_THROWS_WITH_AS((void)dedupe(raw, edges, EdgeType::plant),
                       doctest::Contains("nope"), std::invalid_argument);
}

TEST_CASE("mask_inactive_nodes drops mostly-zero columns and their edges") {
  std::vector<ProductNode> raw = {node("A"), node("B"), node("C")};
  DirectedGraph g = dedupe(raw, {{"A", "B"}, {"B", "C"}, {"C", "A"}},
                           EdgeType::plant);

  TemporalFeatureTable t;
  t.product_codes = {"A", "B", "C"};
  t.values = DenseMatrix(10, 3, 1.0);
  t.timestamps.resize(10, "2024-01-01");
  for (int i = 0; i < 10; ++i) t.values(i, 1) = (i == 0) ? 5.0 : 0.0;  // 90% zero

  MaskResult r = mask_inactive_nodes(g, t, 0.9);
  CHECK(r.removed_codes == std::vector<std::string>{"B"});
  CHECK(r.graph.node_count() == 2);
  CHECK(r.graph.edges.size() == 1);  // only C->A survives
  CHECK(r.graph.nodes[0].code == "A");
  CHECK(r.graph.nodes[1].code == "C");
}

TEST_CASE("adjacency_matrix marks directed edges") {
  std::vector<ProductNode> raw = {node("A"), node("B")};
  DirectedGraph g = dedupe(raw, {{"A", "B"}}, EdgeType::plant);
  DenseMatrix a = adjacency_matrix(g);
  CHECK(a(0, 1) == 1.0);
  CHECK(a(1, 0) == 0.0);
  CHECK(a(0, 0) == 0.0);
}

TEST_CASE("symmetrized normalization of a single edge gives the half matrix") {
  DenseMatrix a(2, 2, 0.0);
  a(0, 1) = 1.0;  // one direction; symmetrization adds the other
  NormalizedAdjacency n = normalize_adjacency(a, AdjacencyMode::symmetrized);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(n.weights(i, j) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("symmetrized normalization of an empty graph is the identity") {
  DenseMatrix a(3, 3, 0.0);
  NormalizedAdjacency n = normalize_adjacency(a, AdjacencyMode::symmetrized);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(n.weights(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));
}

TEST_CASE("directed_in normalization keeps direction and in-degrees") {
  DenseMatrix a(2, 2, 0.0);
  a(0, 1) = 1.0;  // edge 0 -> 1; in-degrees with self-loops: d0=1, d1=2
  NormalizedAdjacency n = normalize_adjacency(a, AdjacencyMode::directed_in);
  CHECK(n.weights(0, 0) == doctest::Approx(1.0));
  CHECK(n.weights(0, 1) == doctest::Approx(0.0));
  CHECK(n.weights(1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(n.weights(1, 1) == doctest::Approx(0.5));
}

TEST_CASE("normalized adjacency rows react to degree, not edge count alone") {
  // path 0-1-2 symmetrized: center self-weight 1/3, leaf self-weight 1/2
  DenseMatrix a(3, 3, 0.0);
  a(0, 1) = a(1, 2) = 1.0;
  NormalizedAdjacency n = normalize_adjacency(a, AdjacencyMode::symmetrized);
  CHECK(n.weights(1, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(n.weights(0, 0) == doctest::Approx(0.5));
  CHECK(n.weights(0, 1) == doctest::Approx(1.0 / std::sqrt(6.0)));
  CHECK(n.weights(0, 2) == doctest::Approx(0.0));
}

TEST_CASE("attention_mask includes self-loops and respects mode") {
  DenseMatrix a(2, 2, 0.0);
  a(0, 1) = 1.0;
  DenseMatrix sym = attention_mask(a, AdjacencyMode::symmetrized);
  CHECK(sym(0, 0) == 1.0);
  CHECK(sym(0, 1) == 1.0);
  CHECK(sym(1, 0) == 1.0);
  CHECK(sym(1, 1) == 1.0);

  DenseMatrix din = attention_mask(a, AdjacencyMode::directed_in);
  CHECK(din(0, 0) == 1.0);
  CHECK(din(0, 1) == 0.0);  // 0 has no in-edge from 1
  CHECK(din(1, 0) == 1.0);
}

TEST_CASE("edge type names round-trip") {
  for (EdgeType t : {EdgeType::plant, EdgeType::storage, EdgeType::group,
                     EdgeType::subgroup})
    CHECK(edge_type_from_string(to_string(t)) == t);
  CHECK_THROWS_AS((void)edge_type_from_string("bogus"), std::invalid_argument);
}
