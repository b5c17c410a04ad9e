// Constituency-tree utilities: bracketed-file parsing, nonterminal
// coarsening with duplicate-rule removal, labeled/unlabeled linearization,
// and bracket exact match.
#pragma once

#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "amcogs/errors.hpp"
#include "amcogs/strings.hpp"

namespace amcogs {

struct ConstTree {
  std::string label;  // nonterminal, or the terminal token at a leaf
  std::vector<ConstTree> children;

  bool leaf() const { return children.empty(); }
  bool operator==(const ConstTree&) const = default;
};

namespace detail {

struct BracketParser {
  std::string_view s;
  std::size_t pos = 0;

  void skipSpace() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  std::string word() {
    std::size_t start = pos;
    while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) &&
           s[pos] != '(' && s[pos] != ')')
      ++pos;
    if (pos == start) throw SyntaxError("expected a label or token", start);
    return std::string(s.substr(start, pos - start));
  }
  ConstTree tree() {
    skipSpace();
    if (pos >= s.size()) throw SyntaxError("unexpected end of tree", pos);
    if (s[pos] != '(') return {word(), {}};
    ++pos;  // '('
    skipSpace();
    ConstTree t;
    t.label = word();
    skipSpace();
    while (pos < s.size() && s[pos] != ')') {
      t.children.push_back(tree());
      skipSpace();
    }
    if (pos >= s.size()) throw SyntaxError("missing ')'", pos);
    ++pos;  // ')'
    if (t.children.empty())
      throw SyntaxError("nonterminal without children", pos);
    return t;
  }
};

}  // namespace detail

inline ConstTree parseBracketed(std::string_view text) {
  detail::BracketParser p{text};
  ConstTree t = p.tree();
  p.skipSpace();
  if (p.pos != text.size()) throw SyntaxError("trailing characters after tree", p.pos);
  return t;
}

inline std::vector<ConstTree> loadTrees(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open tree file: " + path);
  std::vector<ConstTree> out;
  std::string line;
  long lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (normalizeWhitespace(line).empty()) continue;
    try {
      out.push_back(parseBracketed(line));
    } catch (const SyntaxError& e) {
      throw FormatError("line " + std::to_string(lineNo) + ": " + e.what());
    }
  }
  return out;
}

// Two whitespace-separated columns: fine label, coarse label.
inline std::map<std::string, std::string> loadLabelMap(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open label map: " + path);
  std::map<std::string, std::string> map;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> f = splitWhitespace(line);
    if (f.empty() || f[0][0] == '#') continue;
    if (f.size() != 2) throw FormatError("label map lines need 2 columns: " + line);
    map[f[0]] = f[1];
  }
  return map;
}

// Replaces fine-grained nonterminals via the map, then repeatedly collapses
// duplicate unary rules X -> X until none remain. Terminals are untouched.
inline ConstTree coarsen(const ConstTree& t, const std::map<std::string, std::string>& map) {
  if (t.leaf()) return t;
  auto it = map.find(t.label);
  if (it == map.end()) throw UnknownLabel("no coarse label for " + t.label);
  ConstTree out;
  out.label = it->second;
  for (const ConstTree& c : t.children) out.children.push_back(coarsen(c, map));
  while (out.children.size() == 1 && !out.children[0].leaf() &&
         out.children[0].label == out.label) {
    std::vector<ConstTree> grand = std::move(out.children[0].children);
    out.children = std::move(grand);
  }
  return out;
}

// Labeled:   "(NP (Det a) (N rose))"
// Unlabeled: "((a)(rose))" — brackets and terminals only.
inline std::string linearize(const ConstTree& t, bool labeled) {
  if (labeled) {
    if (t.leaf()) return t.label;
    std::string s = "(" + t.label;
    for (const ConstTree& c : t.children) s += " " + linearize(c, true);
    return s + ")";
  }
  if (t.leaf()) return t.label;
  std::string s = "(";
  for (const ConstTree& c : t.children) s += linearize(c, false);
  return s + ")";
}

inline double bracketExactMatch(const std::vector<ConstTree>& gold,
                                const std::vector<ConstTree>& pred, bool labeled) {
  if (gold.size() != pred.size())
    throw LengthMismatch("tree lists differ in length: " + std::to_string(gold.size()) +
                         " vs " + std::to_string(pred.size()));
  if (gold.empty()) return 1.0;
  long hits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i)
    hits += linearize(gold[i], labeled) == linearize(pred[i], labeled);
  return static_cast<double>(hits) / static_cast<double>(gold.size());
}

}  // namespace amcogs
