#pragma once

#include <vector>

#include "som/tree.hpp"

namespace som {

// Write-slot conventions (shared by the oracle and the memory grid):
// slots are indexed 1..N with slot N topmost.  theta_t / xi_t name the
// candidate slot that receives token t; the transition split point is
// theta_t + 1 (clamped to N at t = 1).  A decision sequence is legal iff
// theta_1 = N and, for t >= 2, max(1, theta_{t-1} - 1) <= theta_t <= N - 1.

// Position of the first token of the smallest constituent of gamma that
// contains token i in non-initial position.  gamma is the n-ary tree
// (before binarization); requires 2 <= i <= T.
int first_sibling(const Tree& gamma, int i);

// Online label generator: emits xi_i conditioned on the decisions the model
// actually took.  Feeding back the emitted labels as decisions reproduces the
// static oracle.
class DynamicOracle {
 public:
  DynamicOracle(const Tree& gamma, int slots);

  int sentence_length() const { return length_; }
  int slots() const { return slots_; }

  // Label for position theta-history-size + 1 (call before record()).
  // Raises DataError("insufficient slots...") if the label would be < 1.
  int next_label();
  // Record the decision the model executed for the current position.
  void record_decision(int theta);
  // Label for the virtual end-of-sentence position T+1; requires all T
  // decisions recorded.  Uses j = 1 (EOS closes the root clause).
  int eos_label();

  const std::vector<int>& decisions() const { return theta_; }
  const std::vector<int>& emitted_labels() const { return xi_; }

 private:
  int label_for(int i, int j) const;  // Algorithm recurrence at position i
  int length_;
  int slots_;
  std::vector<int> first_sib_;  // per position 2..T
  std::vector<int> xi_;         // labels emitted so far (index 0 = position 1)
  std::vector<int> theta_;      // decisions recorded so far
};

// Labels under teacher decisions (theta = xi throughout).  Returns T labels;
// eos receives the extra label when requested via static_labels_with_eos.
std::vector<int> static_labels(const Tree& gamma, int slots);
// T labels plus the virtual EOS label appended (size T + 1).
std::vector<int> static_labels_with_eos(const Tree& gamma, int slots);

// (N, N-1, N-1, ...): labels of the fully left-branching tree.
std::vector<int> left_branching_labels(int length, int slots);

// Checks the DecisionTrace legality invariants; returns the first violating
// step (1-based) or 0 if legal.
int first_illegal_decision(const std::vector<int>& theta, int slots);

// Symbolic replay of the memory-grid transition: builds the binary tree held
// in the top candidate slot after the last step.  Illegal decisions raise
// DataError naming the first violating step.
Tree decode_tree(const std::vector<int>& theta, int length, int slots);

}  // namespace som
