#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sgbench/graph.hpp"
#include "sgbench/matrix.hpp"
#include "sgbench/ops.hpp"
#include "sgbench/rng.hpp"

namespace sgbench {

enum class ModelKind { mlp, gcn, gat };
const char* to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string& s);

struct ModelConfig {
  ModelKind kind = ModelKind::mlp;
  int input_dim = 5;   // window size
  int hidden_dim = 8;  // gat: per-head width
  int heads = 1;       // gat: 6
  int output_dim = 1;
  double dropout_p = 0.5;
  double leaky_relu_slope = 0.2;  // gat attention only
};

// Architecture presets: mlp/gcn hidden 8, gat hidden 4 with 6 heads.
ModelConfig default_config(ModelKind kind);

// Closed-form scalar parameter count for a config; tests assert the
// allocated parameters sum to this so architecture drift fails fast.
int parameter_count(const ModelConfig& config);

// All learnable tensors of one model. mlp/gcn use weight1..bias2; gat
// replaces weight1 with per-head weights + attention vectors and adds the
// single-head output attention vector. bias1 spans the full hidden width
// (gat: hidden_dim * heads).
struct ModelParams {
  ModelConfig config;
  Parameter weight1, bias1, weight2, bias2;
  std::vector<Parameter> head_weights;    // gat layer 1, input_dim x hidden_dim
  std::vector<Parameter> head_attention;  // gat layer 1, 2*hidden_dim x 1
  Parameter out_attention;                // gat layer 2, 2*output_dim x 1

  // Fixed tensor order (also the init draw order and checkpoint layout):
  // mlp/gcn: weight1, bias1, weight2, bias2
  // gat:     head_weights 0..H-1, head_attention 0..H-1, bias1, weight2,
  //          out_attention, bias2
  std::vector<Parameter*> all();
  std::vector<std::pair<std::string, Parameter*>> named();
  void zero_grads();
};

// Glorot-uniform weights (bound sqrt(6/(fan_in+fan_out))), zero biases,
// attention vectors drawn over fan (2*hidden, 1). Deterministic per seed;
// matrices are drawn row-major in the tensor order above, biases skipped.
ModelParams init_params(const ModelConfig& config, std::uint64_t seed);

// Both graph-side operators the models consume, derived from one adjacency.
struct GraphOperators {
  NormalizedAdjacency normalized;  // gcn convolution
  DenseMatrix mask;                // gat attention neighborhoods
};
GraphOperators build_graph_operators(const DirectedGraph& graph,
                                     AdjacencyMode mode);

// Intermediates one forward pass records for the matching backward call.
// Everything is copied in, so the cache stays valid on its own.
struct ForwardCache {
  ModelKind kind = ModelKind::mlp;
  DenseMatrix x;
  DenseMatrix a_hat;    // gcn operator
  DenseMatrix m1;       // layer-1 matmul input (gcn: A_hat X, else X)
  DenseMatrix pre1;     // hidden pre-activation
  DenseMatrix keep;     // dropout keep/scale factors
  DenseMatrix dropped;  // layer-2 input
  DenseMatrix n2;       // gcn: A_hat * dropped
  DenseMatrix mask;     // gat neighborhoods
  std::vector<DenseMatrix> head_z;    // gat per head: X W_h
  std::vector<DenseMatrix> head_s;    // gat per head: raw attention logits
  std::vector<DenseMatrix> head_att;  // gat per head: softmax coefficients
  DenseMatrix z2, s2, att2;           // gat output layer
};

// out = dropout(relu(X W1 + b1)) W2 + b2, every node row independent.
DenseMatrix mlp_forward(const DenseMatrix& x, ModelParams& params,
                        bool training, Rng& rng,
                        ForwardCache* cache = nullptr);

// H1 = relu(A_hat X W1 + b1); out = A_hat dropout(H1) W2 + b2.
DenseMatrix gcn_forward(const DenseMatrix& x, const NormalizedAdjacency& a_hat,
                        ModelParams& params, bool training, Rng& rng,
                        ForwardCache* cache = nullptr);

// Two GAT layers: 6 concatenated attention heads (relu + dropout after the
// concat), then a single-head attention layer to 1 output, no activation.
DenseMatrix gat_forward(const DenseMatrix& x, const DenseMatrix& mask,
                        ModelParams& params, bool training, Rng& rng,
                        ForwardCache* cache = nullptr);

// Dispatch on params.config.kind.
DenseMatrix model_forward(const DenseMatrix& x, const GraphOperators& ops,
                          ModelParams& params, bool training, Rng& rng,
                          ForwardCache* cache = nullptr);

// Accumulate d(loss)/d(tensor) into every parameter's grad buffer given
// d(loss)/d(out).
void model_backward(ModelParams& params, const ForwardCache& cache,
                    const DenseMatrix& grad_out);

// Versioned text checkpoint; decimal round-trip is exact.
void save_params(const ModelParams& params, const std::string& path);
ModelParams load_params(const std::string& path);

}  // namespace sgbench
