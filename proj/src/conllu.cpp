#include "som/conllu.hpp"

#include <istream>
#include <sstream>

namespace som {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cols;
  std::size_t start = 0;
  for (;;) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return cols;
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

void validate_sentence(const DependencyTree& d) {
  int n = static_cast<int>(d.heads.size());
  int roots = 0;
  for (int h : d.heads) {
    if (h < 0 || h > n) throw DataError("head index out of range");
    if (h == 0) ++roots;
  }
  if (roots == 0) throw DataError("no root");
  if (roots > 1) throw DataError("multiple roots");
  for (int i = 1; i <= n; ++i) {
    int steps = 0, cur = i;
    while (cur != 0) {
      cur = d.heads[cur - 1];
      if (++steps > n) throw DataError("cycle in head links");
    }
  }
}

}  // namespace

ConlluResult parse_conllu(std::istream& in) {
  ConlluResult out;
  DependencyTree cur;
  int line_no = 0;
  int sent_start_line = 0;
  int expected_id = 1;
  bool bad = false;
  std::string bad_reason;

  auto flush = [&]() {
    if (cur.tokens.empty() && !bad) return;
    if (!bad) {
      try {
        validate_sentence(cur);
        out.sentences.push_back(cur);
      } catch (const DataError& e) {
        out.rejected.push_back({sent_start_line, e.what()});
      }
    } else {
      out.rejected.push_back({sent_start_line, bad_reason});
    }
    cur = DependencyTree();
    expected_id = 1;
    bad = false;
  };

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') continue;
    if (cur.tokens.empty() && !bad) sent_start_line = line_no;
    if (bad) continue;
    std::vector<std::string> cols = split_tabs(line);
    if (cols.size() != 10)
      throw DataError("conllu line " + std::to_string(line_no) +
                      ": expected 10 tab-separated columns, got " +
                      std::to_string(cols.size()));
    const std::string& id = cols[0];
    // multiword ranges (3-4) and empty nodes (5.1) are skipped
    if (id.find('-') != std::string::npos || id.find('.') != std::string::npos)
      continue;
    if (!all_digits(id) || std::stoi(id) != expected_id) {
      bad = true;
      bad_reason = "line " + std::to_string(line_no) + ": unexpected token id '" + id + "'";
      continue;
    }
    ++expected_id;
    if (!all_digits(cols[6])) {
      bad = true;
      bad_reason = "line " + std::to_string(line_no) + ": malformed head '" + cols[6] + "'";
      continue;
    }
    cur.tokens.push_back(cols[1]);
    cur.heads.push_back(std::stoi(cols[6]));
    cur.labels.push_back(cols[7]);
  }
  flush();
  return out;
}

ConlluResult parse_conllu(const std::string& text) {
  std::istringstream ss(text);
  return parse_conllu(ss);
}

}  // namespace som
