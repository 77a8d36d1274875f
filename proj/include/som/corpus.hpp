#pragma once

#include <optional>
#include <string>
#include <vector>

#include "som/tree.hpp"
#include "som/vocab.hpp"

namespace som {

struct Sentence {
  std::vector<int> tokens;           // vocabulary ids
  std::vector<std::string> surface;  // original forms
  std::optional<Tree> gold;          // n-ary gold tree, when available
  std::string split;                 // "train" | "valid" | "test"

  int length() const { return static_cast<int>(tokens.size()); }
};

struct Corpus {
  std::vector<Sentence> sentences;

  std::vector<Sentence> split(const std::string& name) const;
};

// One JSON object per line: {"tokens":[ids],"surface":[...],"tree":...,
// "split":"train"}.  "tree" is nested arrays of leaf indices, absent when the
// sentence has no gold tree.
void write_corpus_jsonl(const std::string& path, const std::vector<Sentence>& sents);
std::vector<Sentence> read_corpus_jsonl(const std::string& path);

// nested-array encoding of trees used in the JSONL format
std::string tree_to_json(const Tree& t);
Tree tree_from_json(const std::string& json_text);

void write_vocab_json(const std::string& path, const Vocab& v);
Vocab read_vocab_json(const std::string& path);

}  // namespace som
