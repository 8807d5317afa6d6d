#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sgbench/graph.hpp"
#include "sgbench/matrix.hpp"
#include "sgbench/stats.hpp"
#include "sgbench/trainer.hpp"

namespace sgbench {

// Affine map from a data domain onto pixel coordinates; a degenerate
// domain lands mid-range.
struct LinearScale {
  double d0 = 0.0, d1 = 1.0, r0 = 0.0, r1 = 1.0;
  double operator()(double v) const;
};

// Every renderer returns a complete standalone SVG 1.1 document with no
// timestamps or external references, so output bytes are stable for fixed
// input. All throw std::invalid_argument on empty input.

// Two panels: seeded force-directed node layout (colored by plant) and the
// directed adjacency grid, one filled cell per edge.
std::string render_adjacency_figure(const DirectedGraph& graph,
                                    std::uint64_t layout_seed);

// Train/test loss polylines over epochs, one point per epoch.
std::string render_curves_figure(const std::string& model_label,
                                 const std::vector<EpochRecord>& records);

// Per-product panels of actual (blue) vs predicted (orange) values over
// label times, with a dashed marker at the train/test boundary.
std::string render_series_figure(const std::string& model_label,
                                 const std::vector<std::string>& product_codes,
                                 const std::vector<int>& label_times,
                                 const DenseMatrix& actual,
                                 const DenseMatrix& predicted, int boundary_t,
                                 int max_products = 6);

// Grouped Tukey box plots, one per labeled BoxStats.
std::string render_box_figure(
    const std::string& title,
    const std::vector<std::pair<std::string, BoxStats>>& boxes);

}  // namespace sgbench
