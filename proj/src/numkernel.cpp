#include "som/numkernel.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace som {

const Mat& Tensor::value() const { return graph_->node(id_).value; }
const Mat& Tensor::grad() const { return graph_->node(id_).grad; }
Scalar Tensor::scalar() const {
  const Mat& v = value();
  if (v.rows() != 1 || v.cols() != 1)
    throw ContractError("Tensor::scalar: node is not 1x1");
  return v(0, 0);
}

Tensor Graph::leaf(Mat v, bool requires_grad) {
  Node n;
  n.value = std::move(v);
  n.requires_grad = requires_grad;
  nodes_.push_back(std::move(n));
  return Tensor(this, static_cast<int>(nodes_.size()) - 1);
}

Tensor Graph::constant(Mat v) { return leaf(std::move(v), false); }

Tensor Graph::emit(Mat value, std::vector<int> inputs,
                   std::function<void(Graph&, int)> back, const char* opname) {
  if (!value.allFinite())
    throw NumericError(std::string("non-finite value produced by ") + opname);
  Node n;
  n.value = std::move(value);
  n.inputs = std::move(inputs);
  for (int i : n.inputs)
    if (nodes_[i].requires_grad) n.requires_grad = true;
  if (n.requires_grad) n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return Tensor(this, static_cast<int>(nodes_.size()) - 1);
}

Mat& Graph::grad_buffer(int id) {
  Node& n = nodes_[id];
  if (n.grad.size() == 0) n.grad = Mat::Zero(n.value.rows(), n.value.cols());
  return n.grad;
}

void Graph::backward(Tensor loss) {
  if (loss.graph() != this) throw ContractError("backward: loss from another graph");
  const Node& ln = nodes_[loss.id()];
  if (ln.value.rows() != 1 || ln.value.cols() != 1)
    throw ContractError("backward: loss node is not scalar");
  grad_buffer(loss.id())(0, 0) += 1.0;
  for (int id = loss.id(); id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.requires_grad || n.grad.size() == 0 || !n.back) continue;
    n.back(*this, id);
  }
}

void Graph::clear_grads() {
  for (Node& n : nodes_) n.grad.resize(0, 0);
}

namespace {

Graph* common_graph(Tensor a, Tensor b) {
  if (a.graph() != b.graph())
    throw ContractError("operands belong to different graphs");
  return a.graph();
}

bool wants(Graph& g, int id) { return g.node(id).requires_grad; }

}  // namespace

Tensor matmul(Tensor a, Tensor b) {
  Graph* g = common_graph(a, b);
  if (a.cols() != b.rows()) throw ContractError("matmul: inner dimensions differ");
  int ia = a.id(), ib = b.id();
  return g->emit(
      a.value() * b.value(), {ia, ib},
      [ia, ib](Graph& g, int self) {
        const Mat& go = g.node(self).grad;
        if (wants(g, ia)) g.grad_buffer(ia).noalias() += go * g.node(ib).value.transpose();
        if (wants(g, ib)) g.grad_buffer(ib).noalias() += g.node(ia).value.transpose() * go;
      },
      "matmul");
}

Tensor add(Tensor a, Tensor b) {
  Graph* g = common_graph(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ContractError("add: shapes differ");
  int ia = a.id(), ib = b.id();
  return g->emit(
      a.value() + b.value(), {ia, ib},
      [ia, ib](Graph& g, int self) {
        const Mat& go = g.node(self).grad;
        if (wants(g, ia)) g.grad_buffer(ia) += go;
        if (wants(g, ib)) g.grad_buffer(ib) += go;
      },
      "add");
}

Tensor sub(Tensor a, Tensor b) {
  Graph* g = common_graph(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ContractError("sub: shapes differ");
  int ia = a.id(), ib = b.id();
  return g->emit(
      a.value() - b.value(), {ia, ib},
      [ia, ib](Graph& g, int self) {
        const Mat& go = g.node(self).grad;
        if (wants(g, ia)) g.grad_buffer(ia) += go;
        if (wants(g, ib)) g.grad_buffer(ib) -= go;
      },
      "sub");
}

Tensor cmul(Tensor a, Tensor b) {
  Graph* g = common_graph(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ContractError("cmul: shapes differ");
  int ia = a.id(), ib = b.id();
  return g->emit(
      a.value().cwiseProduct(b.value()), {ia, ib},
      [ia, ib](Graph& g, int self) {
        const Mat& go = g.node(self).grad;
        if (wants(g, ia)) g.grad_buffer(ia) += go.cwiseProduct(g.node(ib).value);
        if (wants(g, ib)) g.grad_buffer(ib) += go.cwiseProduct(g.node(ia).value);
      },
      "cmul");
}

Tensor scale(Tensor a, Scalar s) {
  Graph* g = a.graph();
  int ia = a.id();
  return g->emit(
      a.value() * s, {ia},
      [ia, s](Graph& g, int self) {
        if (wants(g, ia)) g.grad_buffer(ia) += g.node(self).grad * s;
      },
      "scale");
}

Tensor neg(Tensor a) { return scale(a, -1.0); }

Tensor relu(Tensor a) {
  Graph* g = a.graph();
  int ia = a.id();
  return g->emit(
      a.value().cwiseMax(0.0), {ia},
      [ia](Graph& g, int self) {
        if (!wants(g, ia)) return;
        const Mat& v = g.node(self).value;
        const Mat& go = g.node(self).grad;
        g.grad_buffer(ia) += (v.array() > 0.0).select(go, Mat::Zero(go.rows(), go.cols()));
      },
      "relu");
}

Tensor sigmoid(Tensor a) {
  Graph* g = a.graph();
  int ia = a.id();
  Mat y = (1.0 / (1.0 + (-a.value().array()).exp())).matrix();
  return g->emit(
      std::move(y), {ia},
      [ia](Graph& g, int self) {
        if (!wants(g, ia)) return;
        const Mat& y = g.node(self).value;
        const Mat& go = g.node(self).grad;
        g.grad_buffer(ia).array() += go.array() * y.array() * (1.0 - y.array());
      },
      "sigmoid");
}

Tensor log_elem(Tensor a) {
  Graph* g = a.graph();
  int ia = a.id();
  return g->emit(
      a.value().array().log().matrix(), {ia},
      [ia](Graph& g, int self) {
        if (!wants(g, ia)) return;
        const Mat& go = g.node(self).grad;
        g.grad_buffer(ia).array() += go.array() / g.node(ia).value.array();
      },
      "log_elem");
}

Tensor add_bias_cols(Tensor a, Tensor b) {
  Graph* g = common_graph(a, b);
  if (b.cols() != 1 || a.rows() != b.rows())
    throw ContractError("add_bias_cols: bias must be m x 1 matching rows");
  int ia = a.id(), ib = b.id();
  return g->emit(
      a.value().colwise() + Eigen::VectorXd(b.value().col(0)), {ia, ib},
      [ia, ib](Graph& g, int self) {
        const Mat& go = g.node(self).grad;
        if (wants(g, ia)) g.grad_buffer(ia) += go;
        if (wants(g, ib)) g.grad_buffer(ib) += go.rowwise().sum();
      },
      "add_bias_cols");
}

Tensor concat_rows(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw ContractError("concat_rows: no operands");
  Graph* g = parts[0].graph();
  int cols = parts[0].cols();
  int total = 0;
  std::vector<int> ids, offs;
  for (const Tensor& t : parts) {
    if (t.graph() != g) throw ContractError("concat_rows: mixed graphs");
    if (t.cols() != cols) throw ContractError("concat_rows: column mismatch");
    ids.push_back(t.id());
    offs.push_back(total);
    total += t.rows();
  }
  Mat out(total, cols);
  for (std::size_t k = 0; k < parts.size(); ++k)
    out.middleRows(offs[k], parts[k].rows()) = parts[k].value();
  return g->emit(
      std::move(out), ids,
      [ids, offs](Graph& g, int self) {
        const Mat& go = g.node(self).grad;
        for (std::size_t k = 0; k < ids.size(); ++k) {
          if (!wants(g, ids[k])) continue;
          int r = static_cast<int>(g.node(ids[k]).value.rows());
          g.grad_buffer(ids[k]) += go.middleRows(offs[k], r);
        }
      },
      "concat_rows");
}

Tensor concat_cols(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw ContractError("concat_cols: no operands");
  Graph* g = parts[0].graph();
  int rows_n = parts[0].rows();
  int total = 0;
  std::vector<int> ids, offs;
  for (const Tensor& t : parts) {
    if (t.graph() != g) throw ContractError("concat_cols: mixed graphs");
    if (t.rows() != rows_n) throw ContractError("concat_cols: row mismatch");
    ids.push_back(t.id());
    offs.push_back(total);
    total += t.cols();
  }
  Mat out(rows_n, total);
  for (std::size_t k = 0; k < parts.size(); ++k)
    out.middleCols(offs[k], parts[k].cols()) = parts[k].value();
  return g->emit(
      std::move(out), ids,
      [ids, offs](Graph& g, int self) {
        const Mat& go = g.node(self).grad;
        for (std::size_t k = 0; k < ids.size(); ++k) {
          if (!wants(g, ids[k])) continue;
          int c = static_cast<int>(g.node(ids[k]).value.cols());
          g.grad_buffer(ids[k]) += go.middleCols(offs[k], c);
        }
      },
      "concat_cols");
}

Tensor rows(Tensor a, int start, int count) {
  Graph* g = a.graph();
  if (start < 0 || count < 0 || start + count > a.rows())
    throw ContractError("rows: slice out of range");
  int ia = a.id();
  return g->emit(
      a.value().middleRows(start, count), {ia},
      [ia, start, count](Graph& g, int self) {
        if (!wants(g, ia)) return;
        g.grad_buffer(ia).middleRows(start, count) += g.node(self).grad;
      },
      "rows");
}

Tensor transpose(Tensor a) {
  Graph* g = a.graph();
  int ia = a.id();
  return g->emit(
      a.value().transpose(), {ia},
      [ia](Graph& g, int self) {
        if (wants(g, ia)) g.grad_buffer(ia) += g.node(self).grad.transpose();
      },
      "transpose");
}

Tensor pick(Tensor a, int r, int c) {
  Graph* g = a.graph();
  if (r < 0 || r >= a.rows() || c < 0 || c >= a.cols())
    throw ContractError("pick: index out of range");
  int ia = a.id();
  Mat out(1, 1);
  out(0, 0) = a.value()(r, c);
  return g->emit(
      std::move(out), {ia},
      [ia, r, c](Graph& g, int self) {
        if (wants(g, ia)) g.grad_buffer(ia)(r, c) += g.node(self).grad(0, 0);
      },
      "pick");
}

Tensor sum_all(Tensor a) {
  Graph* g = a.graph();
  int ia = a.id();
  Mat out(1, 1);
  out(0, 0) = a.value().sum();
  return g->emit(
      std::move(out), {ia},
      [ia](Graph& g, int self) {
        if (!wants(g, ia)) return;
        g.grad_buffer(ia).array() += g.node(self).grad(0, 0);
      },
      "sum_all");
}

Tensor add_n(const std::vector<Tensor>& terms) {
  if (terms.empty()) throw ContractError("add_n: no operands");
  Graph* g = terms[0].graph();
  std::vector<int> ids;
  Mat out = terms[0].value();
  ids.push_back(terms[0].id());
  for (std::size_t k = 1; k < terms.size(); ++k) {
    if (terms[k].graph() != g) throw ContractError("add_n: mixed graphs");
    if (terms[k].rows() != terms[0].rows() || terms[k].cols() != terms[0].cols())
      throw ContractError("add_n: shape mismatch");
    out += terms[k].value();
    ids.push_back(terms[k].id());
  }
  return g->emit(
      std::move(out), ids,
      [ids](Graph& g, int self) {
        const Mat& go = g.node(self).grad;
        for (int id : ids)
          if (wants(g, id)) g.grad_buffer(id) += go;
      },
      "add_n");
}

Tensor embedding_row(Tensor table, int row) {
  Graph* g = table.graph();
  if (row < 0 || row >= table.rows())
    throw ContractError("embedding_row: row out of range");
  int it = table.id();
  return g->emit(
      table.value().row(row).transpose(), {it},
      [it, row](Graph& g, int self) {
        if (!wants(g, it)) return;
        g.grad_buffer(it).row(row) += g.node(self).grad.transpose();
      },
      "embedding_row");
}

Tensor detach(Tensor a) {
  Graph* g = a.graph();
  return g->constant(a.value());
}

Tensor layer_norm(Tensor x, Tensor gain, Tensor offset, Scalar eps) {
  Graph* g = common_graph(x, gain);
  common_graph(x, offset);
  int d = x.rows();
  if (d < 2 || x.cols() != 1) throw ContractError("layer_norm: x must be d x 1, d >= 2");
  if (gain.rows() != d || offset.rows() != d)
    throw ContractError("layer_norm: gain/offset shape mismatch");
  int ix = x.id(), ig = gain.id(), io = offset.id();
  const Mat& xv = x.value();
  Scalar mu = xv.mean();
  Scalar var = (xv.array() - mu).square().mean();
  Scalar s = std::sqrt(var + eps);
  Mat xhat = (xv.array() - mu).matrix() / s;
  Mat y = gain.value().cwiseProduct(xhat) + offset.value();
  // keep xhat and s for the backward pass
  return g->emit(
      std::move(y), {ix, ig, io},
      [ix, ig, io, xhat, s](Graph& g, int self) {
        const Mat& go = g.node(self).grad;
        if (wants(g, ig)) g.grad_buffer(ig) += go.cwiseProduct(xhat);
        if (wants(g, io)) g.grad_buffer(io) += go;
        if (wants(g, ix)) {
          Mat gxhat = go.cwiseProduct(g.node(ig).value);
          Scalar m1 = gxhat.mean();
          Scalar m2 = gxhat.cwiseProduct(xhat).mean();
          g.grad_buffer(ix) += ((gxhat.array() - m1) - xhat.array() * m2).matrix() / s;
        }
      },
      "layer_norm");
}

Tensor masked_softmax(Tensor logits, const std::vector<int>& mask) {
  Graph* g = logits.graph();
  int n = logits.rows();
  if (logits.cols() != 1) throw ContractError("masked_softmax: logits must be n x 1");
  if (static_cast<int>(mask.size()) != n)
    throw ContractError("masked_softmax: mask length mismatch");
  int live = 0;
  for (int m : mask) live += (m != 0);
  if (live == 0) throw DataError("masked_softmax: empty mask");
  const Mat& s = logits.value();
  Scalar mx = -std::numeric_limits<Scalar>::infinity();
  for (int i = 0; i < n; ++i)
    if (mask[i]) mx = std::max(mx, s(i, 0));
  Mat p = Mat::Zero(n, 1);
  Scalar z = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!mask[i]) continue;
    p(i, 0) = std::exp(s(i, 0) - mx);
    z += p(i, 0);
  }
  p /= z;
  int il = logits.id();
  std::vector<int> mk = mask;
  return g->emit(
      std::move(p), {il},
      [il, mk](Graph& g, int self) {
        if (!wants(g, il)) return;
        const Mat& p = g.node(self).value;
        const Mat& go = g.node(self).grad;
        Scalar dot = go.cwiseProduct(p).sum();
        Mat& gl = g.grad_buffer(il);
        for (int i = 0; i < p.rows(); ++i)
          if (mk[i]) gl(i, 0) += p(i, 0) * (go(i, 0) - dot);
      },
      "masked_softmax");
}

Tensor log_softmax(Tensor logits) {
  Graph* g = logits.graph();
  if (logits.cols() != 1) throw ContractError("log_softmax: logits must be n x 1");
  const Mat& s = logits.value();
  Scalar mx = s.maxCoeff();
  Scalar z = (s.array() - mx).exp().sum();
  Mat ls = (s.array() - mx - std::log(z)).matrix();
  int il = logits.id();
  return g->emit(
      std::move(ls), {il},
      [il](Graph& g, int self) {
        if (!wants(g, il)) return;
        const Mat& ls = g.node(self).value;
        const Mat& go = g.node(self).grad;
        Scalar gs = go.sum();
        g.grad_buffer(il) += (go.array() - ls.array().exp() * gs).matrix();
      },
      "log_softmax");
}

namespace {

Tensor dropout_with_mask(Tensor a, Mat mask) {
  Graph* g = a.graph();
  int ia = a.id();
  return g->emit(
      a.value().cwiseProduct(mask), {ia},
      [ia, mask](Graph& g, int self) {
        if (wants(g, ia)) g.grad_buffer(ia) += g.node(self).grad.cwiseProduct(mask);
      },
      "dropout");
}

}  // namespace

Tensor dropout(Tensor a, Scalar rate, RngStream& rng, bool enabled) {
  if (!enabled || rate <= 0.0) return a;
  if (rate >= 1.0) throw ContractError("dropout: rate must be < 1");
  Scalar keep = 1.0 - rate;
  Mat mask(a.rows(), a.cols());
  for (int c = 0; c < a.cols(); ++c)
    for (int r = 0; r < a.rows(); ++r)
      mask(r, c) = rng.uniform() < keep ? 1.0 / keep : 0.0;
  return dropout_with_mask(a, std::move(mask));
}

Tensor dropout_rows(Tensor a, Scalar rate, RngStream& rng, bool enabled) {
  if (!enabled || rate <= 0.0) return a;
  if (rate >= 1.0) throw ContractError("dropout_rows: rate must be < 1");
  Scalar keep = 1.0 - rate;
  Mat mask(a.rows(), a.cols());
  for (int r = 0; r < a.rows(); ++r) {
    Scalar v = rng.uniform() < keep ? 1.0 / keep : 0.0;
    mask.row(r).setConstant(v);
  }
  return dropout_with_mask(a, std::move(mask));
}

int argmax_col(const Mat& v) {
  if (v.cols() != 1 || v.rows() == 0) throw ContractError("argmax_col: need n x 1, n >= 1");
  int best = 0;
  for (int i = 1; i < v.rows(); ++i)
    if (v(i, 0) > v(best, 0)) best = i;
  return best;
}

int sample_categorical(const Mat& p, RngStream& rng) {
  if (p.cols() != 1 || p.rows() == 0)
    throw DataError("sample_categorical: need n x 1 probabilities");
  Scalar total = 0.0;
  for (int i = 0; i < p.rows(); ++i) {
    if (!(p(i, 0) >= 0.0)) throw DataError("sample_categorical: negative or NaN mass");
    total += p(i, 0);
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw DataError("sample_categorical: probabilities do not sum to 1");
  Scalar u = rng.uniform() * total;
  Scalar acc = 0.0;
  int last_positive = -1;
  for (int i = 0; i < p.rows(); ++i) {
    if (p(i, 0) <= 0.0) continue;
    last_positive = i;
    acc += p(i, 0);
    if (u < acc) return i;
  }
  if (last_positive < 0) throw DataError("sample_categorical: all mass zero");
  return last_positive;  // rounding slack at the top of the CDF
}

}  // namespace som
