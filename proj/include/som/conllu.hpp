#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "som/tree.hpp"

namespace som {

struct ConlluResult {
  std::vector<DependencyTree> sentences;
  // per-sentence rejections (malformed heads, multiple roots, cycles)
  struct Rejection {
    int line;  // 1-based line number of the sentence start
    std::string reason;
  };
  std::vector<Rejection> rejected;
};

// 10 tab-separated columns, blank-line sentence separation, '#' comments.
// Multiword-token ranges (ids like "3-4") and empty nodes (ids like "5.1")
// are skipped.  Malformed sentences are rejected individually; corrupt
// framing raises DataError.
ConlluResult parse_conllu(std::istream& in);
ConlluResult parse_conllu(const std::string& text);

}  // namespace som
