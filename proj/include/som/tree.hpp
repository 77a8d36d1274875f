#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "som/errors.hpp"

namespace som {

// N-ary constituency tree over 1-based token indices.  A leaf holds its token
// index; an internal node has >= 2 ordered children whose spans tile the
// parent span.  Binary trees are the same type with every internal node
// restricted to exactly 2 children (checked by is_binary()).
struct Tree {
  int leaf = -1;  // 1-based token index when >= 1
  std::vector<Tree> children;

  bool is_leaf() const { return leaf >= 1; }
  static Tree make_leaf(int index);
  static Tree make_node(std::vector<Tree> children);

  // span of covered token indices, inclusive
  int span_begin() const;
  int span_end() const;
  int leaf_count() const;
  // longest root-to-leaf edge count
  int depth() const;
  bool is_binary() const;
  // left-to-right token indices
  std::vector<int> leaves() const;

  bool operator==(const Tree& other) const;
};

// Validates span tiling and that leaves enumerate 1..T exactly once.
void check_tree(const Tree& t);

// (c1 c2 ... ck) -> (((c1 c2) c3) ... ck); identity on binary nodes.
Tree binarize_left(const Tree& t);

// All internal spans (begin, end), including the root span.
std::vector<std::pair<int, int>> internal_spans(const Tree& t);

struct TreeStats {
  int max_depth = 0;
  int median_depth = 0;  // lower median
  double mean_depth = 0.0;
};
TreeStats tree_stats(const std::vector<Tree>& trees);

// ---- PTB-style brackets ----
// Parses one or more bracketed trees.  Labels are discarded; unary chains are
// collapsed to the lowest node.  Unbalanced input raises DataError with the
// character offset.
std::vector<Tree> parse_ptb_brackets(std::istream& in);
std::vector<Tree> parse_ptb_brackets(const std::string& text);

// "(a (b c))" over the given surface forms; internal nodes unlabeled.
std::string to_brackets(const Tree& t, const std::vector<std::string>& surface);

// ---- dependency trees ----
struct DependencyTree {
  std::vector<std::string> tokens;  // surface strings, position i+1
  std::vector<int> heads;           // head position, 0 for root
  std::vector<std::string> labels;  // relation strings, informational
};

bool is_projective(const DependencyTree& d);

// Each head with >= 1 dependents becomes a constituent whose ordered children
// are the converted dependents plus the head's own leaf, in surface order.
// Non-projective input raises DataError.
Tree dep_to_constituency(const DependencyTree& d);

}  // namespace som
