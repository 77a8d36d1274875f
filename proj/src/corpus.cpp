#include "som/corpus.hpp"

#include <fstream>

#include <json.hpp>

namespace som {

using json = nlohmann::json;

namespace {

json tree_to_json_value(const Tree& t) {
  if (t.is_leaf()) return t.leaf;
  json arr = json::array();
  for (const Tree& c : t.children) arr.push_back(tree_to_json_value(c));
  return arr;
}

Tree tree_from_json_value(const json& j) {
  if (j.is_number_integer()) return Tree::make_leaf(j.get<int>());
  if (!j.is_array() || j.size() < 2)
    throw DataError("tree json: expected leaf index or array of >= 2 children");
  std::vector<Tree> kids;
  for (const json& c : j) kids.push_back(tree_from_json_value(c));
  return Tree::make_node(std::move(kids));
}

}  // namespace

std::vector<Sentence> Corpus::split(const std::string& name) const {
  std::vector<Sentence> out;
  for (const Sentence& s : sentences)
    if (s.split == name) out.push_back(s);
  return out;
}

std::string tree_to_json(const Tree& t) { return tree_to_json_value(t).dump(); }

Tree tree_from_json(const std::string& text) {
  return tree_from_json_value(json::parse(text));
}

void write_corpus_jsonl(const std::string& path, const std::vector<Sentence>& sents) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  for (const Sentence& s : sents) {
    json j;
    j["tokens"] = s.tokens;
    j["surface"] = s.surface;
    if (s.gold) j["tree"] = tree_to_json_value(*s.gold);
    j["split"] = s.split;
    out << j.dump() << "\n";
  }
}

std::vector<Sentence> read_corpus_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path);
  std::vector<Sentence> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    Sentence s;
    s.tokens = j.at("tokens").get<std::vector<int>>();
    s.surface = j.at("surface").get<std::vector<std::string>>();
    if (j.contains("tree")) {
      s.gold = tree_from_json_value(j.at("tree"));
      if (s.gold->leaf_count() != static_cast<int>(s.tokens.size()))
        throw DataError(path + ":" + std::to_string(line_no) +
                        ": tree leaf count does not match tokens");
      check_tree(*s.gold);
    }
    s.split = j.value("split", "train");
    out.push_back(std::move(s));
  }
  return out;
}

void write_vocab_json(const std::string& path, const Vocab& v) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  json j;
  j["ids"] = v.id_list();
  out << j.dump(2) << "\n";
}

Vocab read_vocab_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  return Vocab::from_id_list(j.at("ids").get<std::vector<std::string>>());
}

}  // namespace som
