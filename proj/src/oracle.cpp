#include "som/oracle.hpp"

#include <algorithm>
#include <optional>
#include <string>

namespace som {

namespace {

// path of ancestors from root to the leaf with index i
bool find_path(const Tree& t, int i, std::vector<const Tree*>& path) {
  path.push_back(&t);
  if (t.is_leaf()) {
    if (t.leaf == i) return true;
    path.pop_back();
    return false;
  }
  for (const Tree& c : t.children) {
    if (i < c.span_begin() || i > c.span_end()) continue;
    if (find_path(c, i, path)) return true;
  }
  path.pop_back();
  return false;
}

}  // namespace

int first_sibling(const Tree& gamma, int i) {
  int T = gamma.leaf_count();
  if (i < 2 || i > T)
    throw ContractError("first_sibling: position must be in 2..T");
  std::vector<const Tree*> path;
  if (!find_path(gamma, i, path))
    throw ContractError("first_sibling: leaf not found");
  // smallest ancestor in which token i is not the first token
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    if ((*it)->span_begin() < i) return (*it)->span_begin();
  }
  throw ContractError("first_sibling: no containing clause");  // unreachable for i >= 2
}

DynamicOracle::DynamicOracle(const Tree& gamma, int slots)
    : length_(gamma.leaf_count()), slots_(slots) {
  if (slots_ < 2) throw ContractError("DynamicOracle: need at least 2 slots");
  first_sib_.assign(length_ + 2, 0);
  for (int i = 2; i <= length_; ++i) first_sib_[i] = first_sibling(gamma, i);
  first_sib_[length_ + 1] = 1;  // EOS closes the root clause
}

int DynamicOracle::label_for(int i, int j) const {
  // mu over the decisions strictly between j and i; when the range is empty
  // (i = j + 1) use theta_j - 1
  int mu;
  if (i == j + 1) {
    mu = theta_[j - 1] - 1;
  } else {
    mu = 0;
    for (int k = j + 1; k <= i - 1; ++k) mu = std::max(mu, theta_[k - 1]);
  }
  int xi = std::max(xi_[j - 1] - 1, mu);
  if (xi < 1)
    throw DataError("insufficient slots: label underflow at position " +
                    std::to_string(i) + " (N = " + std::to_string(slots_) + ")");
  return xi;
}

int DynamicOracle::next_label() {
  int pos = static_cast<int>(theta_.size()) + 1;
  if (pos > length_) throw ContractError("DynamicOracle: past end of sentence");
  if (static_cast<int>(xi_.size()) >= pos)
    throw ContractError("DynamicOracle: label already emitted for this position");
  int xi = pos == 1 ? slots_ : label_for(pos, first_sib_[pos]);
  xi_.push_back(xi);
  return xi;
}

void DynamicOracle::record_decision(int theta) {
  int pos = static_cast<int>(theta_.size()) + 1;
  if (pos > length_) throw ContractError("DynamicOracle: past end of sentence");
  if (pos == 1) {
    if (theta != slots_)
      throw ContractError("DynamicOracle: first decision must be N");
  } else {
    int prev = theta_.back();
    if (theta < std::max(1, prev - 1) || theta > slots_ - 1)
      throw ContractError("DynamicOracle: illegal decision at position " +
                          std::to_string(pos));
  }
  theta_.push_back(theta);
}

int DynamicOracle::eos_label() {
  if (static_cast<int>(theta_.size()) != length_)
    throw ContractError("DynamicOracle: eos_label needs all decisions");
  return label_for(length_ + 1, 1);
}

std::vector<int> static_labels(const Tree& gamma, int slots) {
  DynamicOracle oracle(gamma, slots);
  std::vector<int> out;
  for (int t = 1; t <= oracle.sentence_length(); ++t) {
    int xi = oracle.next_label();
    oracle.record_decision(xi);
    out.push_back(xi);
  }
  return out;
}

std::vector<int> static_labels_with_eos(const Tree& gamma, int slots) {
  DynamicOracle oracle(gamma, slots);
  std::vector<int> out;
  for (int t = 1; t <= oracle.sentence_length(); ++t) {
    int xi = oracle.next_label();
    oracle.record_decision(xi);
    out.push_back(xi);
  }
  out.push_back(oracle.eos_label());
  return out;
}

std::vector<int> left_branching_labels(int length, int slots) {
  if (length < 1) throw ContractError("left_branching_labels: length >= 1");
  if (slots < 2) throw ContractError("left_branching_labels: slots >= 2");
  std::vector<int> out(length, slots - 1);
  out[0] = slots;
  return out;
}

int first_illegal_decision(const std::vector<int>& theta, int slots) {
  for (std::size_t t = 0; t < theta.size(); ++t) {
    if (t == 0) {
      if (theta[0] != slots) return 1;
    } else {
      if (theta[t] < std::max(1, theta[t - 1] - 1) || theta[t] > slots - 1)
        return static_cast<int>(t) + 1;
    }
  }
  return 0;
}

Tree decode_tree(const std::vector<int>& theta, int length, int slots) {
  if (static_cast<int>(theta.size()) != length)
    throw ContractError("decode_tree: decision count does not match length");
  int bad = first_illegal_decision(theta, slots);
  if (bad)
    throw DataError("decode_tree: illegal decision at step " + std::to_string(bad));
  int N = slots;
  std::vector<std::optional<Tree>> mem(N + 1), cand(N + 1);
  for (int t = 1; t <= length; ++t) {
    int th = theta[t - 1];
    int split = std::min(th + 1, N);
    std::vector<std::optional<Tree>> mem_next(N + 1), cand_next(N + 1);
    for (int j = 1; j <= N; ++j) mem_next[j] = j <= split ? cand[j] : mem[j];
    cand_next[th] = Tree::make_leaf(t);
    for (int j = th + 1; j <= N; ++j) {
      if (mem_next[j])
        cand_next[j] = Tree::make_node({*mem_next[j], *cand_next[j - 1]});
      else
        cand_next[j] = cand_next[j - 1];
    }
    mem = std::move(mem_next);
    cand = std::move(cand_next);
  }
  if (!cand[N]) throw ContractError("decode_tree: empty top candidate");
  Tree out = *cand[N];
  check_tree(out);
  if (out.leaf_count() != length)
    throw ContractError("decode_tree: leaves were lost during replay");
  return out;
}

}  // namespace som
