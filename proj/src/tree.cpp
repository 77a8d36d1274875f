#include "som/tree.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <numeric>
#include <sstream>

namespace som {

Tree Tree::make_leaf(int index) {
  if (index < 1) throw ContractError("Tree leaf index must be >= 1");
  Tree t;
  t.leaf = index;
  return t;
}

Tree Tree::make_node(std::vector<Tree> children) {
  if (children.size() < 2)
    throw ContractError("Tree internal node needs >= 2 children");
  Tree t;
  t.children = std::move(children);
  return t;
}

int Tree::span_begin() const {
  return is_leaf() ? leaf : children.front().span_begin();
}

int Tree::span_end() const {
  return is_leaf() ? leaf : children.back().span_end();
}

int Tree::leaf_count() const {
  if (is_leaf()) return 1;
  int n = 0;
  for (const Tree& c : children) n += c.leaf_count();
  return n;
}

int Tree::depth() const {
  if (is_leaf()) return 0;
  int d = 0;
  for (const Tree& c : children) d = std::max(d, c.depth());
  return d + 1;
}

bool Tree::is_binary() const {
  if (is_leaf()) return true;
  if (children.size() != 2) return false;
  return children[0].is_binary() && children[1].is_binary();
}

namespace {
void collect_leaves(const Tree& t, std::vector<int>& out) {
  if (t.is_leaf()) {
    out.push_back(t.leaf);
    return;
  }
  for (const Tree& c : t.children) collect_leaves(c, out);
}
}  // namespace

std::vector<int> Tree::leaves() const {
  std::vector<int> out;
  collect_leaves(*this, out);
  return out;
}

bool Tree::operator==(const Tree& other) const {
  if (leaf != other.leaf) return false;
  if (children.size() != other.children.size()) return false;
  for (std::size_t i = 0; i < children.size(); ++i)
    if (!(children[i] == other.children[i])) return false;
  return true;
}

namespace {
// returns (begin, end) and validates tiling
std::pair<int, int> check_node(const Tree& t) {
  if (t.is_leaf()) {
    if (!t.children.empty()) throw DataError("tree: leaf with children");
    return {t.leaf, t.leaf};
  }
  if (t.children.size() < 2) throw DataError("tree: internal node with < 2 children");
  auto span = check_node(t.children[0]);
  for (std::size_t i = 1; i < t.children.size(); ++i) {
    auto s = check_node(t.children[i]);
    if (s.first != span.second + 1)
      throw DataError("tree: child spans are not contiguous");
    span.second = s.second;
  }
  return span;
}
}  // namespace

void check_tree(const Tree& t) {
  auto span = check_node(t);
  std::vector<int> lv = t.leaves();
  if (span.first != 1)
    throw DataError("tree: leaves do not start at 1");
  for (std::size_t i = 0; i < lv.size(); ++i)
    if (lv[i] != static_cast<int>(i) + 1)
      throw DataError("tree: leaves do not enumerate 1..T in order");
}

Tree binarize_left(const Tree& t) {
  if (t.is_leaf()) return t;
  std::vector<Tree> kids;
  kids.reserve(t.children.size());
  for (const Tree& c : t.children) kids.push_back(binarize_left(c));
  Tree acc = std::move(kids[0]);
  for (std::size_t i = 1; i < kids.size(); ++i)
    acc = Tree::make_node({std::move(acc), std::move(kids[i])});
  return acc;
}

namespace {
void collect_spans(const Tree& t, std::vector<std::pair<int, int>>& out) {
  if (t.is_leaf()) return;
  out.emplace_back(t.span_begin(), t.span_end());
  for (const Tree& c : t.children) collect_spans(c, out);
}
}  // namespace

std::vector<std::pair<int, int>> internal_spans(const Tree& t) {
  std::vector<std::pair<int, int>> out;
  collect_spans(t, out);
  return out;
}

TreeStats tree_stats(const std::vector<Tree>& trees) {
  if (trees.empty()) throw DataError("tree_stats: empty tree sequence");
  std::vector<int> depths;
  depths.reserve(trees.size());
  for (const Tree& t : trees) depths.push_back(t.depth());
  std::sort(depths.begin(), depths.end());
  TreeStats st;
  st.max_depth = depths.back();
  st.median_depth = depths[(depths.size() - 1) / 2];  // lower median
  st.mean_depth = std::accumulate(depths.begin(), depths.end(), 0.0) /
                  static_cast<double>(depths.size());
  return st;
}

// ---- bracket parsing ----

namespace {

struct BracketParser {
  const std::string& text;
  std::size_t pos = 0;
  int next_leaf = 1;
  std::vector<std::string> tokens;

  explicit BracketParser(const std::string& t) : text(t) {}

  [[noreturn]] void fail(const std::string& what) {
    throw DataError("bracket parse error at offset " + std::to_string(pos) +
                    ": " + what);
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  std::string read_atom() {
    std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != '(' && text[pos] != ')')
      ++pos;
    if (pos == start) fail("expected token");
    return text.substr(start, pos - start);
  }

  // one node; '(' already required at current position
  Tree parse_node() {
    skip_ws();
    if (pos >= text.size() || text[pos] != '(') fail("expected '('");
    ++pos;
    skip_ws();
    if (pos >= text.size()) fail("unbalanced brackets (stream ended)");
    // a label, when present, is the atom right after '('
    if (text[pos] != '(' && text[pos] != ')') read_atom();  // label, discarded
    std::vector<Tree> kids;
    for (;;) {
      skip_ws();
      if (pos >= text.size()) fail("unbalanced brackets (stream ended)");
      if (text[pos] == ')') {
        ++pos;
        break;
      }
      if (text[pos] == '(') {
        kids.push_back(parse_node());
      } else {
        tokens.push_back(read_atom());
        kids.push_back(Tree::make_leaf(next_leaf++));
      }
    }
    if (kids.empty()) fail("empty constituent");
    if (kids.size() == 1) return kids[0];  // unary chains collapse downward
    return Tree::make_node(std::move(kids));
  }
};

}  // namespace

std::vector<Tree> parse_ptb_brackets(const std::string& text) {
  std::vector<Tree> out;
  BracketParser p(text);
  while (!p.at_end()) {
    p.next_leaf = 1;
    p.tokens.clear();
    out.push_back(p.parse_node());
  }
  return out;
}

std::vector<Tree> parse_ptb_brackets(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_ptb_brackets(ss.str());
}

namespace {
void brackets_rec(const Tree& t, const std::vector<std::string>& surface,
                  std::string& out) {
  if (t.is_leaf()) {
    out += surface.at(t.leaf - 1);
    return;
  }
  out += "(X";
  for (const Tree& c : t.children) {
    out += ' ';
    brackets_rec(c, surface, out);
  }
  out += ')';
}
}  // namespace

std::string to_brackets(const Tree& t, const std::vector<std::string>& surface) {
  std::string out;
  brackets_rec(t, surface, out);
  return out;
}

// ---- dependency conversion ----

namespace {

void dep_validate(const DependencyTree& d) {
  int n = static_cast<int>(d.heads.size());
  if (n == 0) throw DataError("dependency tree: empty sentence");
  if (static_cast<int>(d.tokens.size()) != n)
    throw DataError("dependency tree: token/head count mismatch");
  int roots = 0;
  for (int h : d.heads) {
    if (h < 0 || h > n) throw DataError("dependency tree: head index out of range");
    if (h == 0) ++roots;
  }
  if (roots != 1) throw DataError("dependency tree: expected exactly one root");
  // cycle check: walk to root from each token
  for (int i = 1; i <= n; ++i) {
    int steps = 0, cur = i;
    while (cur != 0) {
      cur = d.heads[cur - 1];
      if (++steps > n) throw DataError("dependency tree: cycle detected");
    }
  }
}

Tree dep_convert(int head, const std::vector<std::vector<int>>& deps) {
  const std::vector<int>& ds = deps[head];
  if (ds.empty()) return Tree::make_leaf(head);
  std::vector<Tree> kids;
  for (int d : ds) kids.push_back(dep_convert(d, deps));
  kids.push_back(Tree::make_leaf(head));
  std::sort(kids.begin(), kids.end(), [](const Tree& a, const Tree& b) {
    return a.span_begin() < b.span_begin();
  });
  return Tree::make_node(std::move(kids));
}

}  // namespace

bool is_projective(const DependencyTree& d) {
  int n = static_cast<int>(d.heads.size());
  // subtree spans must be contiguous intervals
  std::vector<int> lo(n + 1), hi(n + 1);
  for (int i = 1; i <= n; ++i) lo[i] = hi[i] = i;
  // propagate bottom-up; iterate until fixpoint (n is small)
  for (int pass = 0; pass < n; ++pass) {
    bool changed = false;
    for (int i = 1; i <= n; ++i) {
      int h = d.heads[i - 1];
      if (h == 0) continue;
      if (lo[i] < lo[h]) { lo[h] = lo[i]; changed = true; }
      if (hi[i] > hi[h]) { hi[h] = hi[i]; changed = true; }
    }
    if (!changed) break;
  }
  std::vector<int> subtree(n + 1, 1);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 1);
  // process tokens deepest-first: sort by path length to root
  std::vector<int> depth_of(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    int cur = i, dp = 0;
    while (cur != 0) { cur = d.heads[cur - 1]; ++dp; }
    depth_of[i] = dp;
  }
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return depth_of[a] > depth_of[b]; });
  for (int i : order) {
    int h = d.heads[i - 1];
    if (h != 0) subtree[h] += subtree[i];
  }
  for (int i = 1; i <= n; ++i)
    if (hi[i] - lo[i] + 1 != subtree[i]) return false;
  return true;
}

Tree dep_to_constituency(const DependencyTree& d) {
  dep_validate(d);
  if (!is_projective(d))
    throw DataError("dep_to_constituency: non-projective dependency tree");
  int n = static_cast<int>(d.heads.size());
  std::vector<std::vector<int>> deps(n + 1);
  int root = 0;
  for (int i = 1; i <= n; ++i) {
    int h = d.heads[i - 1];
    if (h == 0)
      root = i;
    else
      deps[h].push_back(i);
  }
  Tree t = dep_convert(root, deps);
  check_tree(t);
  return t;
}

}  // namespace som
