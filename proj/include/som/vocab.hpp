#pragma once

#include <map>
#include <string>
#include <vector>

#include "som/errors.hpp"

namespace som {

// Token -> dense id mapping with a 7-class orthographic UNK scheme.
// Reserved ids: 0 = EOS, 1..7 = UNK classes (see unk_class_of).  Tokens seen
// fewer than min_count times map to their UNK class.
class Vocab {
 public:
  static constexpr int kEos = 0;

  // Classes ordered by precedence: a digit anywhere wins, then initial
  // uppercase, then suffixes longest-first, then the bare fallback.
  static const std::vector<std::string>& unk_classes();  // "<unk-num>", ...
  static std::string unk_class_of(const std::string& token);

  // Deterministic: known tokens get ids in first-seen corpus order.
  static Vocab build(const std::vector<std::vector<std::string>>& sentences,
                     int min_count);

  int id_of(const std::string& token) const;  // total: falls back to UNK class
  const std::string& token_of(int id) const;
  int size() const { return static_cast<int>(id_to_token_.size()); }
  bool is_known(const std::string& token) const;

  // serialization (id -> token list, including reserved entries)
  std::vector<std::string> id_list() const { return id_to_token_; }
  static Vocab from_id_list(const std::vector<std::string>& ids);

 private:
  std::map<std::string, int> token_to_id_;
  std::vector<std::string> id_to_token_;
};

}  // namespace som
