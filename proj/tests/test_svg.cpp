#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "sgbench/graph.hpp"
#include "sgbench/stats.hpp"
#include "sgbench/svg.hpp"
#include "sgbench/trainer.hpp"

using namespace sgbench;

namespace {

int count_of(const std::string& hay, const std::string& needle) {
  int n = 0;
  for (size_t pos = hay.find(needle); pos != std::string::npos;
       pos = hay.find(needle, pos + needle.size()))
    ++n;
  return n;
}

// comma count inside the first points="..." attribute = vertex count
int first_polyline_points(const std::string& svg) {
  size_t p = svg.find("points=\"");
  REQUIRE(p != std::string::npos);
  size_t end = svg.find('"', p + 8);
  std::string pts = svg.substr(p + 8, end - p - 8);
  return count_of(pts, ",");
}

DirectedGraph two_pair_graph() {
  DirectedGraph g;
  for (int i = 0; i < 4; ++i)
    g.nodes.push_back({"N" + std::to_string(i), "G1", "SG1",
                       "P" + std::to_string(1 + i / 2), "S1"});
  g.edges = {{0, 1}, {1, 0}, {2, 3}};
  return g;
}

}  // namespace

TEST_CASE("linear scale maps endpoints and centers degenerate domains") {
  LinearScale s{0.0, 10.0, 100.0, 200.0};
  CHECK(s(0.0) == doctest::Approx(100.0));
  CHECK(s(10.0) == doctest::Approx(200.0));
  CHECK(s(5.0) == doctest::Approx(150.0));

  LinearScale d{3.0, 3.0, 0.0, 50.0};
  CHECK(d(3.0) == doctest::Approx(25.0));
}

TEST_CASE("curves figure has one vertex per epoch on both polylines") {
  std::vector<EpochRecord> curve;
  for (int e = 1; e <= 200; ++e)
    curve.push_back({e, 1.0 / e, 1.2 / e});
  std::string svg = render_curves_figure("mlp", curve);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(count_of(svg, "<polyline") == 2);
  CHECK(first_polyline_points(svg) == 200);
  CHECK(svg.find("mlp") != std::string::npos);

  CHECK(render_curves_figure("mlp", curve) == svg);  // byte-stable
  CHECK_THROWS_AS((void)render_curves_figure("mlp", {}), std::invalid_argument);
}

TEST_CASE("series figure draws capped panels with a boundary marker") {
  std::vector<std::string> codes = {"A", "B", "C"};
  std::vector<int> times = {5, 6, 7, 8};
  DenseMatrix actual(4, 3), predicted(4, 3);
  for (int i = 0; i < actual.size(); ++i) {
    actual.data[i] = i * 0.1;
    predicted.data[i] = i * 0.1 + 0.05;
  }
  std::string svg =
      render_series_figure("gcn", codes, times, actual, predicted, 7, 2);
  CHECK(count_of(svg, "<polyline") == 4);  // 2 panels x (actual, predicted)
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
  CHECK(svg.find("A") != std::string::npos);

  DenseMatrix wrong(3, 3);
  CHECK_THROWS_AS((void)render_series_figure("gcn", codes, times, actual,
                                             wrong, 7, 2),
                  std::invalid_argument);
}

TEST_CASE("box figure shows one box per group and flags outliers") {
  BoxStats plain{0.5, 0.3, 0.8, 0.1, 1.2, 0};
  BoxStats with_outliers{0.5, 0.3, 0.8, 0.1, 1.2, 3};
  std::string svg = render_box_figure(
      "test squared error by model",
      {{"mlp", plain}, {"gcn", with_outliers}});
  CHECK(svg.find("mlp") != std::string::npos);
  CHECK(svg.find("gcn") != std::string::npos);
  CHECK(svg.find("outlier") != std::string::npos);
  CHECK(svg.find("test squared error by model") != std::string::npos);
  CHECK_THROWS_AS((void)render_box_figure("t", {}), std::invalid_argument);
}

TEST_CASE("adjacency figure fills one grid cell per directed edge") {
  DirectedGraph g = two_pair_graph();
  std::string svg = render_adjacency_figure(g, 42);
  // rects: white background + grid frame + one per edge
  CHECK(count_of(svg, "<rect") == 2 + static_cast<int>(g.edges.size()));
  CHECK(count_of(svg, "<circle") == g.node_count());
  for (const auto& n : g.nodes)
    CHECK(svg.find(">" + n.code + "<") != std::string::npos);

  CHECK(render_adjacency_figure(g, 42) == svg);   // same seed, same bytes
  CHECK(render_adjacency_figure(g, 43) != svg);   // layout moves with the seed

  DirectedGraph empty;
  CHECK_THROWS_AS((void)render_adjacency_figure(empty, 1),
                  std::invalid_argument);
}
