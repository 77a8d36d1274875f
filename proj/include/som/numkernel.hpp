#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "som/errors.hpp"
#include "som/rng.hpp"

namespace som {

using Scalar = double;
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

class Graph;

// Lightweight handle to a node in a Graph.  Values are dense row-major
// conceptually; we use Eigen's default storage and treat vectors as d x 1.
class Tensor {
 public:
  Tensor() = default;
  Tensor(Graph* g, int id) : graph_(g), id_(id) {}

  const Mat& value() const;
  const Mat& grad() const;
  Graph* graph() const { return graph_; }
  int id() const { return id_; }
  bool valid() const { return graph_ != nullptr; }
  int rows() const { return static_cast<int>(value().rows()); }
  int cols() const { return static_cast<int>(value().cols()); }
  Scalar scalar() const;

 private:
  Graph* graph_ = nullptr;
  int id_ = -1;
};

// Tape of primitive applications in topological (construction) order.
// One Graph instance is confined to a single worker at a time.
class Graph {
 public:
  Tensor leaf(Mat v, bool requires_grad = true);
  Tensor constant(Mat v);

  // Reverse-mode gradients for every node reachable from `loss`, which must
  // be scalar (1x1).  Gradients accumulate into node storage; leaves keep
  // theirs until clear_grads().
  void backward(Tensor loss);
  void clear_grads();

  std::size_t size() const { return nodes_.size(); }

  // internal, used by op implementations
  struct Node {
    Mat value;
    Mat grad;
    std::vector<int> inputs;
    std::function<void(Graph&, int)> back;
    bool requires_grad = false;
  };
  Node& node(int id) { return nodes_[id]; }
  const Node& node(int id) const { return nodes_[id]; }
  Tensor emit(Mat value, std::vector<int> inputs,
              std::function<void(Graph&, int)> back, const char* opname);
  Mat& grad_buffer(int id);

 private:
  std::vector<Node> nodes_;
};

// ---- primitives ----
Tensor matmul(Tensor a, Tensor b);
Tensor add(Tensor a, Tensor b);
Tensor sub(Tensor a, Tensor b);
Tensor cmul(Tensor a, Tensor b);
Tensor scale(Tensor a, Scalar s);
Tensor neg(Tensor a);
Tensor relu(Tensor a);
Tensor sigmoid(Tensor a);
Tensor log_elem(Tensor a);
// b is m x 1, added to every column of a
Tensor add_bias_cols(Tensor a, Tensor b);
Tensor concat_rows(const std::vector<Tensor>& parts);
Tensor concat_cols(const std::vector<Tensor>& parts);
Tensor rows(Tensor a, int start, int count);
Tensor transpose(Tensor a);
Tensor pick(Tensor a, int r, int c = 0);
Tensor sum_all(Tensor a);
Tensor add_n(const std::vector<Tensor>& terms);
// Gather row r of a V x D table as a D x 1 column; backward scatter-adds.
Tensor embedding_row(Tensor table, int row);
// Identity forward; blocks gradient flow through this edge.
Tensor detach(Tensor a);

// x, gain, offset are d x 1 with d >= 2.  Population variance, eps added to
// the variance before the square root.
Tensor layer_norm(Tensor x, Tensor gain, Tensor offset, Scalar eps = 1e-5);

// logits n x 1, mask n entries (0/1).  Output is exactly 0 where mask is 0,
// positive elsewhere, sums to 1.  Stabilized by max-subtraction over the
// unmasked entries.  All-zero mask raises DataError.
Tensor masked_softmax(Tensor logits, const std::vector<int>& mask);
Tensor log_softmax(Tensor logits);

// Inverted-scaling dropout; disabled (identity) when !enabled or rate == 0.
Tensor dropout(Tensor a, Scalar rate, RngStream& rng, bool enabled);
// Zeroes whole rows (used for embedding dropout).
Tensor dropout_rows(Tensor a, Scalar rate, RngStream& rng, bool enabled);

// ---- value-level helpers ----
int argmax_col(const Mat& v);
// p is an n x 1 probability vector (nonnegative, sums to 1 within 1e-9).
// Deterministic given the stream state; never returns an index with p_i = 0.
int sample_categorical(const Mat& p, RngStream& rng);

}  // namespace som
