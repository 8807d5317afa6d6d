#include "sgbench/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "sgbench/fmt.hpp"
#include "sgbench/rng.hpp"

namespace sgbench {

double LinearScale::operator()(double v) const {
  if (d1 == d0) return (r0 + r1) / 2.0;
  return r0 + (v - d0) / (d1 - d0) * (r1 - r0);
}

namespace {

const char* kBlue = "#1f77b4";    // actual values / train curves
const char* kOrange = "#ff7f0e";  // predictions / test curves
const char* kGrid = "#dddddd";
const char* kText = "#333333";

std::string num(double v) { return format_fixed(v, 2); }

// Short tick label, e.g. 0.4273 or 1.2e+05.
std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

void open_svg(std::ostringstream& s, int w, int h) {
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
    << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h
    << "\" font-family=\"Helvetica,Arial,sans-serif\">\n"
    << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
}

void line(std::ostringstream& s, double x1, double y1, double x2, double y2,
          const char* stroke, double width = 1.0, const char* extra = "") {
  s << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\""
    << num(x2) << "\" y2=\"" << num(y2) << "\" stroke=\"" << stroke
    << "\" stroke-width=\"" << num(width) << "\"" << extra << "/>\n";
}

void text(std::ostringstream& s, double x, double y, const std::string& t,
          int size = 12, const char* anchor = "start",
          const char* extra = "") {
  s << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\""
    << size << "\" fill=\"" << kText << "\" text-anchor=\"" << anchor << "\""
    << extra << ">" << t << "</text>\n";
}

void polyline(std::ostringstream& s, const std::vector<double>& xs,
              const std::vector<double>& ys, const char* stroke,
              double width = 1.5) {
  s << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\""
    << num(width) << "\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s << ' ';
    s << num(xs[i]) << ',' << num(ys[i]);
  }
  s << "\"/>\n";
}

// Frame, horizontal gridlines, and y tick labels for one plot area.
void y_axis(std::ostringstream& s, const LinearScale& sy, double x0, double x1,
            int ticks = 5) {
  for (int i = 0; i < ticks; ++i) {
    double v = sy.d0 + (sy.d1 - sy.d0) * i / (ticks - 1);
    double y = sy(v);
    line(s, x0, y, x1, y, kGrid);
    text(s, x0 - 6, y + 4, tick(v), 10, "end");
  }
}

void pad_domain(double& lo, double& hi) {
  if (hi <= lo) {
    lo -= 1.0;
    hi += 1.0;
    return;
  }
  double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
}

}  // namespace

std::string render_curves_figure(const std::string& model_label,
                                 const std::vector<EpochRecord>& records) {
  if (records.empty()) throw std::invalid_argument("no epochs to plot");
  const int w = 640, h = 400, left = 70, right = 620, top = 50, bottom = 350;

  double lo = records[0].train_loss, hi = lo;
  for (const EpochRecord& r : records) {
    lo = std::min({lo, r.train_loss, r.test_loss});
    hi = std::max({hi, r.train_loss, r.test_loss});
  }
  pad_domain(lo, hi);
  LinearScale sx{static_cast<double>(records.front().epoch),
                 static_cast<double>(records.back().epoch), left, right};
  if (records.size() == 1) sx.d1 = sx.d0 + 1;
  LinearScale sy{lo, hi, bottom, top};

  std::ostringstream s;
  open_svg(s, w, h);
  text(s, w / 2.0, 24, model_label + " loss by epoch", 14, "middle");
  y_axis(s, sy, left, right);
  line(s, left, top, left, bottom, kText);
  line(s, left, bottom, right, bottom, kText);
  text(s, left, bottom + 16, tick(sx.d0), 10, "middle");
  text(s, right, bottom + 16, tick(sx.d1), 10, "middle");
  text(s, (left + right) / 2.0, bottom + 32, "epoch", 12, "middle");
  text(s, 16, (top + bottom) / 2.0, "mse loss", 12, "middle",
       " transform=\"rotate(-90 16 200)\"");

  std::vector<double> xs, train_ys, test_ys;
  for (const EpochRecord& r : records) {
    xs.push_back(sx(r.epoch));
    train_ys.push_back(sy(r.train_loss));
    test_ys.push_back(sy(r.test_loss));
  }
  polyline(s, xs, train_ys, kBlue);
  polyline(s, xs, test_ys, kOrange);

  line(s, right - 120, 40, right - 96, 40, kBlue, 2.0);
  text(s, right - 90, 44, "train", 11);
  line(s, right - 120, 56, right - 96, 56, kOrange, 2.0);
  text(s, right - 90, 60, "test", 11);
  s << "</svg>\n";
  return s.str();
}

std::string render_series_figure(const std::string& model_label,
                                 const std::vector<std::string>& product_codes,
                                 const std::vector<int>& label_times,
                                 const DenseMatrix& actual,
                                 const DenseMatrix& predicted, int boundary_t,
                                 int max_products) {
  if (label_times.empty()) throw std::invalid_argument("no series to plot");
  if (actual.rows != static_cast<int>(label_times.size()) ||
      !actual.same_shape(predicted))
    throw std::invalid_argument("series shapes disagree");
  int panels = std::min(max_products, actual.cols);
  if (panels < 1) throw std::invalid_argument("no products to plot");

  const int w = 640, left = 60, right = 625;
  const int top = 40, panel_h = 86, gap = 16;
  const int h = top + panels * (panel_h + gap) + 30;
  LinearScale sx{static_cast<double>(label_times.front()),
                 static_cast<double>(label_times.back()), left, right};

  std::ostringstream s;
  open_svg(s, w, h);
  text(s, w / 2.0, 22, model_label + " predicted vs actual", 14, "middle");
  line(s, right - 150, 30, right - 126, 30, kBlue, 2.0);
  text(s, right - 120, 34, "actual", 11);
  line(s, right - 70, 30, right - 46, 30, kOrange, 2.0);
  text(s, right - 40, 34, "predicted", 11);

  for (int p = 0; p < panels; ++p) {
    double py0 = top + p * (panel_h + gap);
    double py1 = py0 + panel_h;
    double lo = actual(0, p), hi = lo;
    for (int k = 0; k < actual.rows; ++k) {
      lo = std::min({lo, actual(k, p), predicted(k, p)});
      hi = std::max({hi, actual(k, p), predicted(k, p)});
    }
    pad_domain(lo, hi);
    LinearScale sy{lo, hi, py1, py0};

    s << "<rect x=\"" << left << "\" y=\"" << num(py0) << "\" width=\""
      << (right - left) << "\" height=\"" << panel_h
      << "\" fill=\"none\" stroke=\"" << kGrid << "\"/>\n";
    text(s, left + 4, py0 + 12, product_codes[p], 10);
    text(s, left - 6, py1 + 3, tick(sy.d0), 9, "end");
    text(s, left - 6, py0 + 9, tick(sy.d1), 9, "end");

    if (boundary_t >= label_times.front() && boundary_t <= label_times.back())
      line(s, sx(boundary_t), py0, sx(boundary_t), py1, "#888888", 1.0,
           " stroke-dasharray=\"4 3\"");

    std::vector<double> xs, act_ys, pred_ys;
    for (int k = 0; k < actual.rows; ++k) {
      xs.push_back(sx(label_times[k]));
      act_ys.push_back(sy(actual(k, p)));
      pred_ys.push_back(sy(predicted(k, p)));
    }
    polyline(s, xs, act_ys, kBlue, 1.2);
    polyline(s, xs, pred_ys, kOrange, 1.2);
  }
  double axis_y = top + panels * (panel_h + gap) - gap;
  text(s, left, axis_y + 16, tick(sx.d0), 10, "middle");
  text(s, right, axis_y + 16, tick(sx.d1), 10, "middle");
  text(s, (left + right) / 2.0, axis_y + 16, "time index", 10, "middle");
  s << "</svg>\n";
  return s.str();
}

std::string render_box_figure(
    const std::string& title,
    const std::vector<std::pair<std::string, BoxStats>>& boxes) {
  if (boxes.empty()) throw std::invalid_argument("no boxes to plot");
  const int slot = 110, left = 70;
  const int w = left + slot * static_cast<int>(boxes.size()) + 20;
  const int h = 400, top = 50, bottom = 340;

  double lo = boxes[0].second.whisker_low, hi = boxes[0].second.whisker_high;
  for (const auto& [label, b] : boxes) {
    lo = std::min(lo, b.whisker_low);
    hi = std::max(hi, b.whisker_high);
  }
  pad_domain(lo, hi);
  LinearScale sy{lo, hi, bottom, top};

  std::ostringstream s;
  open_svg(s, w, h);
  text(s, w / 2.0, 24, title, 14, "middle");
  y_axis(s, sy, left, w - 20);
  line(s, left, top, left, bottom, kText);
  line(s, left, bottom, w - 20, bottom, kText);

  const double box_w = 48;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const BoxStats& b = boxes[i].second;
    double cx = left + slot * (i + 0.5);
    double q1 = sy(b.q1), q3 = sy(b.q3), med = sy(b.median);
    double wl = sy(b.whisker_low), wh = sy(b.whisker_high);

    line(s, cx, wl, cx, q1, kText);
    line(s, cx, q3, cx, wh, kText);
    line(s, cx - 14, wl, cx + 14, wl, kText);
    line(s, cx - 14, wh, cx + 14, wh, kText);
    s << "<rect x=\"" << num(cx - box_w / 2) << "\" y=\"" << num(q3)
      << "\" width=\"" << num(box_w) << "\" height=\"" << num(q1 - q3)
      << "\" fill=\"#aec7e8\" stroke=\"" << kBlue << "\"/>\n";
    line(s, cx - box_w / 2, med, cx + box_w / 2, med, kBlue, 2.0);

    text(s, cx, bottom + 18, boxes[i].first, 12, "middle");
    if (b.outlier_count > 0)
      text(s, cx, bottom + 34,
           "(" + std::to_string(b.outlier_count) + " outliers not drawn)", 9,
           "middle");
  }
  s << "</svg>\n";
  return s.str();
}

namespace {

struct Point {
  double x = 0.0, y = 0.0;
};

// Fruchterman-Reingold with a light center pull so disconnected plant
// components stay in frame. Fixed iteration count keeps bytes stable.
std::vector<Point> force_layout(const DirectedGraph& graph,
                                std::uint64_t seed) {
  int n = graph.node_count();
  std::vector<Point> pos(n);
  Rng rng = Rng::keyed(seed, streams::layout);
  for (Point& p : pos) {
    p.x = rng.uniform();
    p.y = rng.uniform();
  }
  if (n == 1) return pos;

  const double k = std::sqrt(1.0 / n);
  const int iterations = 150;
  for (int it = 0; it < iterations; ++it) {
    double temp = 0.1 * (1.0 - static_cast<double>(it) / iterations) + 0.002;
    std::vector<Point> disp(n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        double dx = pos[i].x - pos[j].x;
        double dy = pos[i].y - pos[j].y;
        double d = std::max(std::sqrt(dx * dx + dy * dy), 1e-9);
        double f = k * k / d / d;
        disp[i].x += dx * f;
        disp[i].y += dy * f;
        disp[j].x -= dx * f;
        disp[j].y -= dy * f;
      }
      disp[i].x += (0.5 - pos[i].x) * 0.05;
      disp[i].y += (0.5 - pos[i].y) * 0.05;
    }
    for (const auto& [src, dst] : graph.edges) {
      if (src == dst) continue;
      double dx = pos[src].x - pos[dst].x;
      double dy = pos[src].y - pos[dst].y;
      double d = std::max(std::sqrt(dx * dx + dy * dy), 1e-9);
      double f = d / k;  // attraction d^2/k along the unit vector
      disp[src].x -= dx * f;
      disp[src].y -= dy * f;
      disp[dst].x += dx * f;
      disp[dst].y += dy * f;
    }
    for (int i = 0; i < n; ++i) {
      double len =
          std::sqrt(disp[i].x * disp[i].x + disp[i].y * disp[i].y);
      if (len < 1e-12) continue;
      double step = std::min(len, temp);
      pos[i].x += disp[i].x / len * step;
      pos[i].y += disp[i].y / len * step;
    }
  }
  return pos;
}

}  // namespace

std::string render_adjacency_figure(const DirectedGraph& graph,
                                    std::uint64_t layout_seed) {
  int n = graph.node_count();
  if (n < 1) throw std::invalid_argument("empty graph");

  const int w = 720, h = 420;
  const double lx0 = 30, ly0 = 70, lsize = 310;  // layout panel
  const double gx0 = 390, gy0 = 70, gsize = 310; // grid panel

  std::vector<Point> pos = force_layout(graph, layout_seed);
  double bx0 = pos[0].x, bx1 = pos[0].x, by0 = pos[0].y, by1 = pos[0].y;
  for (const Point& p : pos) {
    bx0 = std::min(bx0, p.x);
    bx1 = std::max(bx1, p.x);
    by0 = std::min(by0, p.y);
    by1 = std::max(by1, p.y);
  }
  LinearScale sx{bx0, bx1, lx0 + 16, lx0 + lsize - 16};
  LinearScale sy{by0, by1, ly0 + 16, ly0 + lsize - 16};

  // nodes colored by plant, palette in first-appearance order
  const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                           "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  std::vector<std::string> plants;
  auto plant_color = [&](const std::string& plant) {
    for (std::size_t i = 0; i < plants.size(); ++i)
      if (plants[i] == plant) return palette[i % 8];
    plants.push_back(plant);
    return palette[(plants.size() - 1) % 8];
  };

  std::ostringstream s;
  open_svg(s, w, h);
  s << "<defs><marker id=\"arrow\" markerWidth=\"7\" markerHeight=\"7\" "
       "refX=\"6\" refY=\"2.5\" orient=\"auto\"><path d=\"M0,0 L6,2.5 L0,5 "
       "z\" fill=\"#999999\"/></marker></defs>\n";
  text(s, w / 2.0, 26, std::string(to_string(graph.edge_type)) +
                           " graph layout and adjacency matrix",
       14, "middle");

  for (const auto& [src, dst] : graph.edges) {
    if (src == dst) continue;
    double x1 = sx(pos[src].x), y1 = sy(pos[src].y);
    double x2 = sx(pos[dst].x), y2 = sy(pos[dst].y);
    double dx = x2 - x1, dy = y2 - y1;
    double d = std::max(std::sqrt(dx * dx + dy * dy), 1e-9);
    // stop short of the target circle so the arrowhead stays visible
    x2 -= dx / d * 9.0;
    y2 -= dy / d * 9.0;
    line(s, x1, y1, x2, y2, "#999999", 1.0, " marker-end=\"url(#arrow)\"");
  }
  for (int i = 0; i < n; ++i) {
    s << "<circle cx=\"" << num(sx(pos[i].x)) << "\" cy=\""
      << num(sy(pos[i].y)) << "\" r=\"6\" fill=\""
      << plant_color(graph.nodes[i].plant)
      << "\" stroke=\"white\" stroke-width=\"1\"><title>"
      << graph.nodes[i].code << "</title></circle>\n";
  }
  text(s, lx0 + lsize / 2, ly0 + lsize + 24, "nodes colored by plant", 11,
       "middle");

  double cell = gsize / n;
  s << "<rect x=\"" << num(gx0) << "\" y=\"" << num(gy0) << "\" width=\""
    << num(gsize) << "\" height=\"" << num(gsize)
    << "\" fill=\"#f5f5f5\" stroke=\"" << kGrid << "\"/>\n";
  for (const auto& [src, dst] : graph.edges) {
    s << "<rect x=\"" << num(gx0 + dst * cell) << "\" y=\""
      << num(gy0 + src * cell) << "\" width=\"" << num(cell) << "\" height=\""
      << num(cell) << "\" fill=\"" << kBlue << "\"/>\n";
  }
  text(s, gx0 + gsize / 2, gy0 + gsize + 24,
       "adjacency (row = source, column = target)", 11, "middle");
  s << "</svg>\n";
  return s.str();
}

}  // namespace sgbench
