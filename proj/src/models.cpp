#include "sgbench/models.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sgbench/fmt.hpp"

namespace sgbench {

const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::mlp: return "mlp";
    case ModelKind::gcn: return "gcn";
    case ModelKind::gat: return "gat";
  }
  throw std::logic_error("unhandled model kind");
}

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "mlp") return ModelKind::mlp;
  if (s == "gcn") return ModelKind::gcn;
  if (s == "gat") return ModelKind::gat;
  throw std::invalid_argument("unknown model '" + s +
                              "' (expected mlp, gcn, gat)");
}

ModelConfig default_config(ModelKind kind) {
  ModelConfig cfg;
  cfg.kind = kind;
  if (kind == ModelKind::gat) {
    cfg.hidden_dim = 4;
    cfg.heads = 6;
  }
  return cfg;
}

namespace {

void validate(const ModelConfig& cfg) {
  if (cfg.input_dim < 1 || cfg.hidden_dim < 1 || cfg.output_dim < 1)
    throw std::invalid_argument("model dimensions must be positive");
  if (cfg.kind == ModelKind::gat ? cfg.heads < 1 : cfg.heads != 1)
    throw std::invalid_argument("bad head count for model kind");
  if (cfg.dropout_p < 0.0 || cfg.dropout_p >= 1.0)
    throw std::invalid_argument("dropout_p must be in [0, 1)");
  if (cfg.leaky_relu_slope < 0.0)
    throw std::invalid_argument("leaky_relu_slope must be nonnegative");
}

ModelParams make_zero_params(const ModelConfig& cfg) {
  validate(cfg);
  ModelParams p;
  p.config = cfg;
  if (cfg.kind == ModelKind::gat) {
    for (int h = 0; h < cfg.heads; ++h) {
      p.head_weights.emplace_back(cfg.input_dim, cfg.hidden_dim);
      p.head_attention.emplace_back(2 * cfg.hidden_dim, 1);
    }
    int width = cfg.hidden_dim * cfg.heads;
    p.bias1 = Parameter(1, width);
    p.weight2 = Parameter(width, cfg.output_dim);
    p.out_attention = Parameter(2 * cfg.output_dim, 1);
  } else {
    p.weight1 = Parameter(cfg.input_dim, cfg.hidden_dim);
    p.bias1 = Parameter(1, cfg.hidden_dim);
    p.weight2 = Parameter(cfg.hidden_dim, cfg.output_dim);
  }
  p.bias2 = Parameter(1, cfg.output_dim);
  return p;
}

}  // namespace

int parameter_count(const ModelConfig& cfg) {
  validate(cfg);
  int in = cfg.input_dim, h = cfg.hidden_dim, out = cfg.output_dim;
  if (cfg.kind == ModelKind::gat) {
    int heads = cfg.heads;
    return heads * (in * h) + heads * (2 * h) + heads * h +
           (heads * h) * out + 2 * out + out;
  }
  return in * h + h + h * out + out;
}

std::vector<Parameter*> ModelParams::all() {
  std::vector<Parameter*> list;
  if (config.kind == ModelKind::gat) {
    for (Parameter& w : head_weights) list.push_back(&w);
    for (Parameter& a : head_attention) list.push_back(&a);
    list.push_back(&bias1);
    list.push_back(&weight2);
    list.push_back(&out_attention);
  } else {
    list.push_back(&weight1);
    list.push_back(&bias1);
    list.push_back(&weight2);
  }
  list.push_back(&bias2);
  return list;
}

std::vector<std::pair<std::string, Parameter*>> ModelParams::named() {
  std::vector<std::pair<std::string, Parameter*>> list;
  if (config.kind == ModelKind::gat) {
    for (size_t h = 0; h < head_weights.size(); ++h)
      list.emplace_back("head_weight_" + std::to_string(h), &head_weights[h]);
    for (size_t h = 0; h < head_attention.size(); ++h)
      list.emplace_back("head_attention_" + std::to_string(h),
                        &head_attention[h]);
    list.emplace_back("bias1", &bias1);
    list.emplace_back("weight2", &weight2);
    list.emplace_back("out_attention", &out_attention);
  } else {
    list.emplace_back("weight1", &weight1);
    list.emplace_back("bias1", &bias1);
    list.emplace_back("weight2", &weight2);
  }
  list.emplace_back("bias2", &bias2);
  return list;
}

void ModelParams::zero_grads() {
  for (Parameter* p : all()) p->zero_grad();
}

ModelParams init_params(const ModelConfig& cfg, std::uint64_t seed) {
  ModelParams p = make_zero_params(cfg);
  Rng rng(derive_seed(seed, streams::init));
  auto glorot = [&rng](DenseMatrix& m, int fan_in, int fan_out) {
    double bound = std::sqrt(6.0 / (fan_in + fan_out));
    for (double& v : m.data) v = rng.uniform(-bound, bound);
  };
  // Draws follow the tensor order of all(); biases stay zero.
  if (cfg.kind == ModelKind::gat) {
    for (Parameter& w : p.head_weights)
      glorot(w.value, cfg.input_dim, cfg.hidden_dim);
    for (Parameter& a : p.head_attention)
      glorot(a.value, 2 * cfg.hidden_dim, 1);
    glorot(p.weight2.value, cfg.hidden_dim * cfg.heads, cfg.output_dim);
    glorot(p.out_attention.value, 2 * cfg.output_dim, 1);
  } else {
    glorot(p.weight1.value, cfg.input_dim, cfg.hidden_dim);
    glorot(p.weight2.value, cfg.hidden_dim, cfg.output_dim);
  }
  return p;
}

GraphOperators build_graph_operators(const DirectedGraph& graph,
                                     AdjacencyMode mode) {
  DenseMatrix a = adjacency_matrix(graph);
  GraphOperators ops;
  ops.normalized = normalize_adjacency(a, mode);
  ops.mask = attention_mask(a, mode);
  return ops;
}

namespace {

void check_input(const DenseMatrix& x, const ModelConfig& cfg) {
  if (x.cols != cfg.input_dim)
    throw std::invalid_argument("input has " + std::to_string(x.cols) +
                                " columns, model expects " +
                                std::to_string(cfg.input_dim));
  if (x.rows < 1) throw std::invalid_argument("input has no rows");
}

// Shared dense tail of mlp/gcn: hidden bias + relu + dropout.
void dense_hidden(const DenseMatrix& u, ModelParams& p, bool training,
                  Rng& rng, ForwardCache& c) {
  c.pre1 = add_row_bias(u, p.bias1.value);
  DropoutResult drop =
      dropout(relu(c.pre1), p.config.dropout_p, training, rng);
  c.keep = std::move(drop.keep_scale);
  c.dropped = std::move(drop.out);
}

// Raw attention logits s(i, j) = zl(i) + zr(j) on masked pairs, where
// zl = z * a[:d] and zr = z * a[d:] for the split attention vector a.
DenseMatrix attention_logits(const DenseMatrix& z, const DenseMatrix& a,
                             const DenseMatrix& mask) {
  int n = z.rows, d = z.cols;
  DenseMatrix s(n, n);
  std::vector<double> zl(n), zr(n);
  for (int i = 0; i < n; ++i) {
    double l = 0.0, r = 0.0;
    for (int k = 0; k < d; ++k) {
      l += z(i, k) * a(k, 0);
      r += z(i, k) * a(d + k, 0);
    }
    zl[i] = l;
    zr[i] = r;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (mask(i, j) != 0.0) s(i, j) = zl[i] + zr[j];
  return s;
}

// Backward of attention_logits + the z-aggregation term: given d(loss)/ds,
// accumulate into the attention vector's grad and into grad_z.
void attention_logits_backward(const DenseMatrix& z, const DenseMatrix& a,
                               const DenseMatrix& grad_s, Parameter& a_param,
                               DenseMatrix& grad_z) {
  int n = z.rows, d = z.cols;
  // Unmasked grad_s entries are exactly 0, so plain row/column sums work.
  std::vector<double> grad_zl(n, 0.0), grad_zr(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      grad_zl[i] += grad_s(i, j);
      grad_zr[j] += grad_s(i, j);
    }
  for (int k = 0; k < d; ++k) {
    double ga_l = 0.0, ga_r = 0.0;
    for (int i = 0; i < n; ++i) {
      ga_l += z(i, k) * grad_zl[i];
      ga_r += z(i, k) * grad_zr[i];
      grad_z(i, k) += grad_zl[i] * a(k, 0) + grad_zr[i] * a(d + k, 0);
    }
    a_param.grad(k, 0) += ga_l;
    a_param.grad(d + k, 0) += ga_r;
  }
}

}  // namespace

DenseMatrix mlp_forward(const DenseMatrix& x, ModelParams& p, bool training,
                        Rng& rng, ForwardCache* cache) {
  if (p.config.kind != ModelKind::mlp)
    throw std::invalid_argument("params are not an mlp");
  check_input(x, p.config);
  ForwardCache local;
  ForwardCache& c = cache ? *cache : local;
  c.kind = ModelKind::mlp;
  c.x = x;
  c.m1 = x;
  dense_hidden(matmul(c.m1, p.weight1.value), p, training, rng, c);
  return add_row_bias(matmul(c.dropped, p.weight2.value), p.bias2.value);
}

DenseMatrix gcn_forward(const DenseMatrix& x, const NormalizedAdjacency& a_hat,
                        ModelParams& p, bool training, Rng& rng,
                        ForwardCache* cache) {
  if (p.config.kind != ModelKind::gcn)
    throw std::invalid_argument("params are not a gcn");
  check_input(x, p.config);
  if (a_hat.n != x.rows)
    throw std::invalid_argument("adjacency is for " + std::to_string(a_hat.n) +
                                " nodes, input has " + std::to_string(x.rows));
  ForwardCache local;
  ForwardCache& c = cache ? *cache : local;
  c.kind = ModelKind::gcn;
  c.x = x;
  c.a_hat = a_hat.weights;
  c.m1 = matmul(c.a_hat, x);
  dense_hidden(matmul(c.m1, p.weight1.value), p, training, rng, c);
  c.n2 = matmul(c.a_hat, c.dropped);
  return add_row_bias(matmul(c.n2, p.weight2.value), p.bias2.value);
}

DenseMatrix gat_forward(const DenseMatrix& x, const DenseMatrix& mask,
                        ModelParams& p, bool training, Rng& rng,
                        ForwardCache* cache) {
  const ModelConfig& cfg = p.config;
  if (cfg.kind != ModelKind::gat)
    throw std::invalid_argument("params are not a gat");
  check_input(x, cfg);
  if (mask.rows != x.rows || mask.cols != x.rows)
    throw std::invalid_argument("attention mask " + mask.shape() +
                                " does not fit " + std::to_string(x.rows) +
                                " nodes");
  ForwardCache local;
  ForwardCache& c = cache ? *cache : local;
  c.kind = ModelKind::gat;
  c.x = x;
  c.mask = mask;
  c.head_z.clear();
  c.head_s.clear();
  c.head_att.clear();

  int n = x.rows, h = cfg.hidden_dim;
  DenseMatrix concat(n, h * cfg.heads);
  for (int hd = 0; hd < cfg.heads; ++hd) {
    DenseMatrix z = matmul(x, p.head_weights[hd].value);
    DenseMatrix s = attention_logits(z, p.head_attention[hd].value, mask);
    DenseMatrix att =
        masked_row_softmax(leaky_relu(s, cfg.leaky_relu_slope), mask);
    DenseMatrix agg = matmul(att, z);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < h; ++k) concat(i, hd * h + k) = agg(i, k);
    c.head_z.push_back(std::move(z));
    c.head_s.push_back(std::move(s));
    c.head_att.push_back(std::move(att));
  }
  dense_hidden(concat, p, training, rng, c);

  // Single-head output layer over the same neighborhoods, no activation.
  c.z2 = matmul(c.dropped, p.weight2.value);
  c.s2 = attention_logits(c.z2, p.out_attention.value, mask);
  c.att2 = masked_row_softmax(leaky_relu(c.s2, cfg.leaky_relu_slope), mask);
  return add_row_bias(matmul(c.att2, c.z2), p.bias2.value);
}

DenseMatrix model_forward(const DenseMatrix& x, const GraphOperators& ops,
                          ModelParams& p, bool training, Rng& rng,
                          ForwardCache* cache) {
  switch (p.config.kind) {
    case ModelKind::mlp: return mlp_forward(x, p, training, rng, cache);
    case ModelKind::gcn:
      return gcn_forward(x, ops.normalized, p, training, rng, cache);
    case ModelKind::gat: return gat_forward(x, ops.mask, p, training, rng, cache);
  }
  throw std::logic_error("unhandled model kind");
}

namespace {

// Backward through one attention block: aggregation agg = att * z with
// att = softmax(leaky_relu(logits(z, a))). Accumulates into a_param's grad
// and returns d(loss)/dz.
DenseMatrix attention_backward(const DenseMatrix& z, const DenseMatrix& s,
                               const DenseMatrix& att, const DenseMatrix& mask,
                               double slope, Parameter& a_param,
                               const DenseMatrix& a_value,
                               const DenseMatrix& grad_agg) {
  int n = z.rows, d = z.cols;
  DenseMatrix grad_att(n, n), grad_z(n, d);
  matmul_backward(att, z, grad_agg, &grad_att, &grad_z);
  DenseMatrix grad_e(n, n);
  masked_row_softmax_backward(att, mask, grad_att, &grad_e);
  DenseMatrix grad_s(n, n);
  leaky_relu_backward(s, slope, grad_e, &grad_s);
  attention_logits_backward(z, a_value, grad_s, a_param, grad_z);
  return grad_z;
}

// Shared dense tail backward: from d(loss)/d(dropped) back to the
// pre-hidden activation input, accumulating bias1's grad.
DenseMatrix dense_hidden_backward(const ForwardCache& c, ModelParams& p,
                                  const DenseMatrix& grad_dropped) {
  DenseMatrix grad_r(grad_dropped.rows, grad_dropped.cols);
  dropout_backward(c.keep, grad_dropped, &grad_r);
  DenseMatrix grad_pre(grad_dropped.rows, grad_dropped.cols);
  relu_backward(c.pre1, grad_r, &grad_pre);
  DenseMatrix grad_in(grad_dropped.rows, grad_dropped.cols);
  add_row_bias_backward(grad_pre, &grad_in, &p.bias1.grad);
  return grad_in;
}

}  // namespace

void model_backward(ModelParams& p, const ForwardCache& c,
                    const DenseMatrix& grad_out) {
  const ModelConfig& cfg = p.config;
  int n = c.x.rows;
  if (grad_out.rows != n || grad_out.cols != cfg.output_dim)
    throw std::invalid_argument("gradient shape " + grad_out.shape() +
                                " does not match model output");
  if (c.kind != cfg.kind)
    throw std::invalid_argument("cache was built by a different model kind");

  DenseMatrix grad_v(n, cfg.output_dim);
  add_row_bias_backward(grad_out, &grad_v, &p.bias2.grad);

  if (cfg.kind == ModelKind::gat) {
    DenseMatrix grad_z2 = attention_backward(
        c.z2, c.s2, c.att2, c.mask, cfg.leaky_relu_slope, p.out_attention,
        p.out_attention.value, grad_v);
    int width = cfg.hidden_dim * cfg.heads;
    DenseMatrix grad_dropped(n, width);
    matmul_backward(c.dropped, p.weight2.value, grad_z2, &grad_dropped,
                    &p.weight2.grad);
    DenseMatrix grad_concat = dense_hidden_backward(c, p, grad_dropped);
    int h = cfg.hidden_dim;
    for (int hd = 0; hd < cfg.heads; ++hd) {
      DenseMatrix grad_agg(n, h);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < h; ++k) grad_agg(i, k) = grad_concat(i, hd * h + k);
      DenseMatrix grad_z = attention_backward(
          c.head_z[hd], c.head_s[hd], c.head_att[hd], c.mask,
          cfg.leaky_relu_slope, p.head_attention[hd],
          p.head_attention[hd].value, grad_agg);
      matmul_backward(c.x, p.head_weights[hd].value, grad_z, nullptr,
                      &p.head_weights[hd].grad);
    }
    return;
  }

  // mlp/gcn share the dense chain; gcn inserts the convolution operator
  // around the hidden block.
  const DenseMatrix& layer2_in = (cfg.kind == ModelKind::gcn) ? c.n2 : c.dropped;
  DenseMatrix grad_l2in(n, cfg.hidden_dim);
  matmul_backward(layer2_in, p.weight2.value, grad_v, &grad_l2in,
                  &p.weight2.grad);
  DenseMatrix grad_dropped = (cfg.kind == ModelKind::gcn)
                                 ? matmul(transpose(c.a_hat), grad_l2in)
                                 : std::move(grad_l2in);
  DenseMatrix grad_u = dense_hidden_backward(c, p, grad_dropped);
  matmul_backward(c.m1, p.weight1.value, grad_u, nullptr, &p.weight1.grad);
}

// ---- Checkpoints ------------------------------------------------------------

namespace {

double parse_value(const std::string& token, const std::string& path) {
  double v = 0.0;
  const char* first = token.data();
  auto [ptr, ec] = std::from_chars(first, first + token.size(), v);
  if (ec != std::errc() || ptr != first + token.size())
    throw std::runtime_error("'" + path + "': bad numeric token '" + token +
                             "'");
  return v;
}

std::string expect_token(std::istream& in, const std::string& path) {
  std::string token;
  if (!(in >> token))
    throw std::runtime_error("'" + path + "': truncated checkpoint");
  return token;
}

void expect_literal(std::istream& in, const std::string& want,
                    const std::string& path) {
  std::string got = expect_token(in, path);
  if (got != want)
    throw std::runtime_error("'" + path + "': expected '" + want + "', got '" +
                             got + "'");
}

}  // namespace

void save_params(const ModelParams& params, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  const ModelConfig& cfg = params.config;
  out << "model-checkpoint v1\n";
  out << "kind " << to_string(cfg.kind) << '\n';
  out << "input_dim " << cfg.input_dim << '\n';
  out << "hidden_dim " << cfg.hidden_dim << '\n';
  out << "heads " << cfg.heads << '\n';
  out << "output_dim " << cfg.output_dim << '\n';
  out << "dropout_p " << format_double(cfg.dropout_p) << '\n';
  out << "leaky_relu_slope " << format_double(cfg.leaky_relu_slope) << '\n';
  ModelParams copy = params;  // named() is non-const; a copy is a few KB
  for (auto& [name, param] : copy.named()) {
    const DenseMatrix& m = param->value;
    out << "tensor " << name << ' ' << m.rows << ' ' << m.cols << '\n';
    for (int i = 0; i < m.rows; ++i) {
      for (int j = 0; j < m.cols; ++j) {
        if (j) out << ' ';
        out << format_double(m(i, j));
      }
      out << '\n';
    }
  }
  out << "end\n";
}

ModelParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  expect_literal(in, "model-checkpoint", path);
  expect_literal(in, "v1", path);

  ModelConfig cfg;
  expect_literal(in, "kind", path);
  cfg.kind = model_kind_from_string(expect_token(in, path));
  auto read_int = [&](const std::string& key) {
    expect_literal(in, key, path);
    return static_cast<int>(parse_value(expect_token(in, path), path));
  };
  cfg.input_dim = read_int("input_dim");
  cfg.hidden_dim = read_int("hidden_dim");
  cfg.heads = read_int("heads");
  cfg.output_dim = read_int("output_dim");
  expect_literal(in, "dropout_p", path);
  cfg.dropout_p = parse_value(expect_token(in, path), path);
  expect_literal(in, "leaky_relu_slope", path);
  cfg.leaky_relu_slope = parse_value(expect_token(in, path), path);

  ModelParams params = make_zero_params(cfg);
  for (auto& [name, param] : params.named()) {
    expect_literal(in, "tensor", path);
    expect_literal(in, name, path);
    int rows = static_cast<int>(parse_value(expect_token(in, path), path));
    int cols = static_cast<int>(parse_value(expect_token(in, path), path));
    DenseMatrix& m = param->value;
    if (rows != m.rows || cols != m.cols)
      throw std::runtime_error("'" + path + "': tensor " + name + " is " +
                               std::to_string(rows) + "x" +
                               std::to_string(cols) + ", expected " +
                               m.shape());
    for (int i = 0; i < m.rows; ++i)
      for (int j = 0; j < m.cols; ++j)
        m(i, j) = parse_value(expect_token(in, path), path);
  }
  expect_literal(in, "end", path);
  return params;
}

}  // namespace sgbench
