#include "som/vocab.hpp"

#include <cctype>

namespace som {

namespace {
const char* kEosToken = "<eos>";

bool ends_with(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() &&
         s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}
}  // namespace

const std::vector<std::string>& Vocab::unk_classes() {
  static const std::vector<std::string> classes = {
      "<unk-num>", "<unk-cap>", "<unk-ing>", "<unk-ed>",
      "<unk-ly>",  "<unk-s>",   "<unk>"};
  return classes;
}

std::string Vocab::unk_class_of(const std::string& token) {
  for (char c : token)
    if (std::isdigit(static_cast<unsigned char>(c))) return "<unk-num>";
  if (!token.empty() && std::isupper(static_cast<unsigned char>(token[0])))
    return "<unk-cap>";
  // suffixes, longest first
  if (ends_with(token, "ing") && token.size() > 3) return "<unk-ing>";
  if (ends_with(token, "ed") && token.size() > 2) return "<unk-ed>";
  if (ends_with(token, "ly") && token.size() > 2) return "<unk-ly>";
  if (ends_with(token, "s") && token.size() > 1) return "<unk-s>";
  return "<unk>";
}

Vocab Vocab::build(const std::vector<std::vector<std::string>>& sentences,
                   int min_count) {
  if (min_count < 1) throw ContractError("Vocab::build: min_count must be >= 1");
  if (sentences.empty()) throw DataError("Vocab::build: empty corpus");
  std::map<std::string, int> freq;
  std::vector<std::string> order;
  for (const auto& sent : sentences)
    for (const std::string& tok : sent) {
      auto it = freq.find(tok);
      if (it == freq.end()) {
        freq[tok] = 1;
        order.push_back(tok);
      } else {
        ++it->second;
      }
    }
  Vocab v;
  v.id_to_token_.push_back(kEosToken);
  for (const std::string& c : unk_classes()) v.id_to_token_.push_back(c);
  for (std::size_t i = 0; i < v.id_to_token_.size(); ++i)
    v.token_to_id_[v.id_to_token_[i]] = static_cast<int>(i);
  for (const std::string& tok : order) {
    if (freq[tok] < min_count) continue;
    if (v.token_to_id_.count(tok)) continue;
    v.token_to_id_[tok] = static_cast<int>(v.id_to_token_.size());
    v.id_to_token_.push_back(tok);
  }
  return v;
}

int Vocab::id_of(const std::string& token) const {
  auto it = token_to_id_.find(token);
  if (it != token_to_id_.end()) return it->second;
  return token_to_id_.at(unk_class_of(token));
}

const std::string& Vocab::token_of(int id) const {
  if (id < 0 || id >= size()) throw ContractError("Vocab::token_of: bad id");
  return id_to_token_[id];
}

bool Vocab::is_known(const std::string& token) const {
  return token_to_id_.count(token) > 0;
}

Vocab Vocab::from_id_list(const std::vector<std::string>& ids) {
  Vocab v;
  std::size_t reserved = 1 + unk_classes().size();
  if (ids.size() < reserved || ids[0] != kEosToken)
    throw DataError("Vocab::from_id_list: malformed id list");
  for (std::size_t i = 0; i < unk_classes().size(); ++i)
    if (ids[i + 1] != unk_classes()[i])
      throw DataError("Vocab::from_id_list: malformed reserved entries");
  v.id_to_token_ = ids;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (v.token_to_id_.count(ids[i]))
      throw DataError("Vocab::from_id_list: duplicate token");
    v.token_to_id_[ids[i]] = static_cast<int>(i);
  }
  return v;
}

}  // namespace som
