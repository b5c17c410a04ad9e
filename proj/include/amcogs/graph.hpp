// Directed labeled graphs with token alignments, source-annotated graphs
// (the algebra's operands) and their types, alignment-guided isomorphism,
// and a line-based text serialization for fixtures and debugging.
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "amcogs/errors.hpp"
#include "amcogs/strings.hpp"

namespace amcogs {

enum class SourceName : int { S0 = 0, S1 = 1, S2 = 2 };

inline std::string str(SourceName s) {
  switch (s) {
    case SourceName::S0: return "s0";
    case SourceName::S1: return "s1";
    case SourceName::S2: return "s2";
  }
  throw Error("bad source name");
}

inline SourceName sourceFromString(std::string_view s) {
  std::string t = toLower(s);
  if (t == "s0") return SourceName::S0;
  if (t == "s1") return SourceName::S1;
  if (t == "s2") return SourceName::S2;
  throw Error("unknown source name: " + std::string(s));
}

// A type is a finite map from open sources to the type requested of whatever
// fills that source. Entries are kept sorted, so equality is structural.
class AmType {
 public:
  using Entry = std::pair<SourceName, AmType>;

  AmType() = default;

  void add(SourceName s, AmType request = AmType()) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), s,
                               [](const Entry& e, SourceName x) { return e.first < x; });
    if (it != entries_.end() && it->first == s)
      throw Error("duplicate source in type: " + amcogs::str(s));
    entries_.insert(it, {s, std::move(request)});
  }
  bool has(SourceName s) const { return find(s) != nullptr; }
  const AmType* request(SourceName s) const { return find(s); }
  AmType without(SourceName s) const {
    AmType t;
    for (const Entry& e : entries_)
      if (e.first != s) t.entries_.push_back(e);
    return t;
  }
  bool isEmpty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }

  int depth() const {
    int d = 0;
    for (const Entry& e : entries_) d = std::max(d, 1 + e.second.depth());
    return d;
  }

  // "[]", "[s0]", "[s0, s2[s0]]" — nonempty requests printed inline.
  std::string str() const {
    std::string out = "[";
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (i) out += ", ";
      out += amcogs::str(entries_[i].first);
      if (!entries_[i].second.isEmpty()) out += entries_[i].second.str();
    }
    return out + "]";
  }

  static AmType parse(std::string_view s) {
    std::size_t pos = 0;
    AmType t = parseAt(s, pos);
    if (pos != s.size()) throw Error("trailing characters in type: " + std::string(s));
    return t;
  }

  friend bool operator==(const AmType& a, const AmType& b) {
    return a.entries_ == b.entries_;
  }
  friend bool operator<(const AmType& a, const AmType& b) {
    return a.entries_ < b.entries_;
  }

 private:
  const AmType* find(SourceName s) const {
    for (const Entry& e : entries_)
      if (e.first == s) return &e.second;
    return nullptr;
  }
  static AmType parseAt(std::string_view s, std::size_t& pos) {
    auto fail = [&](const std::string& m) { throw Error("bad type '" + std::string(s) + "': " + m); };
    if (pos >= s.size() || s[pos] != '[') fail("expected '['");
    ++pos;
    AmType t;
    while (pos < s.size() && s[pos] != ']') {
      while (pos < s.size() && (s[pos] == ' ' || s[pos] == ',')) ++pos;
      if (pos < s.size() && s[pos] == ']') break;
      if (pos + 1 >= s.size()) fail("truncated source name");
      SourceName src = sourceFromString(s.substr(pos, 2));
      pos += 2;
      AmType req;
      if (pos < s.size() && s[pos] == '[') req = parseAt(s, pos);
      t.add(src, std::move(req));
    }
    if (pos >= s.size()) fail("expected ']'");
    ++pos;
    return t;
  }

  std::vector<Entry> entries_;
};

struct GraphNode {
  int id = -1;
  std::string label;          // empty = unlabeled placeholder
  std::optional<int> align;   // token index

  bool labeled() const { return !label.empty(); }
};

struct GraphEdge {
  int from = -1;
  int to = -1;
  std::string label;

  bool operator==(const GraphEdge&) const = default;
};

struct SemGraph {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;
  int root = -1;

  int addNode(std::string label, std::optional<int> align = std::nullopt) {
    int id = nextId_++;
    nodes.push_back({id, std::move(label), align});
    return id;
  }
  void addEdge(int from, int to, std::string label) {
    edges.push_back({from, to, std::move(label)});
  }

  const GraphNode* find(int id) const {
    for (const GraphNode& n : nodes)
      if (n.id == id) return &n;
    return nullptr;
  }
  GraphNode* find(int id) {
    for (GraphNode& n : nodes)
      if (n.id == id) return &n;
    return nullptr;
  }
  const GraphNode& node(int id) const {
    const GraphNode* n = find(id);
    if (!n) throw Error("no node with id " + std::to_string(id));
    return *n;
  }

  std::vector<const GraphEdge*> outEdges(int id) const {
    std::vector<const GraphEdge*> out;
    for (const GraphEdge& e : edges)
      if (e.from == id) out.push_back(&e);
    return out;
  }
  std::vector<const GraphEdge*> inEdges(int id) const {
    std::vector<const GraphEdge*> out;
    for (const GraphEdge& e : edges)
      if (e.to == id) out.push_back(&e);
    return out;
  }

  void validate() const {
    if (!find(root)) throw Error("graph root missing");
    std::set<int> ids;
    for (const GraphNode& n : nodes)
      if (!ids.insert(n.id).second) throw Error("duplicate node id");
    for (const GraphEdge& e : edges)
      if (!ids.count(e.from) || !ids.count(e.to))
        throw Error("edge endpoint not in graph");
  }

  // Keeps fresh ids unique after external id manipulation (used by merges).
  void bumpNextId(int atLeast) { nextId_ = std::max(nextId_, atLeast); }
  int nextIdHint() const { return nextId_; }

 private:
  int nextId_ = 0;
};

namespace detail {

struct NodeSig {
  std::string label;
  int align;
  bool isRoot;
  std::vector<std::string> outLabels, inLabels;
  auto operator<=>(const NodeSig&) const = default;
};

inline NodeSig signatureOf(const SemGraph& g, const GraphNode& n) {
  NodeSig s;
  s.label = n.label;
  s.align = n.align.value_or(-1);
  s.isRoot = n.id == g.root;
  for (const GraphEdge* e : g.outEdges(n.id)) s.outLabels.push_back(e->label);
  for (const GraphEdge* e : g.inEdges(n.id)) s.inLabels.push_back(e->label);
  std::sort(s.outLabels.begin(), s.outLabels.end());
  std::sort(s.inLabels.begin(), s.inLabels.end());
  return s;
}

}  // namespace detail

// True iff some node bijection preserves labels, alignments, edges (with
// multiplicity) and the root. Ids are ignored. Candidates are pruned by node
// signature; COGS alignments make the search near-linear in practice.
inline bool isomorphic(const SemGraph& g1, const SemGraph& g2) {
  if (g1.nodes.size() != g2.nodes.size() || g1.edges.size() != g2.edges.size())
    return false;

  std::map<detail::NodeSig, std::vector<int>> buckets;
  for (const GraphNode& n : g2.nodes)
    buckets[detail::signatureOf(g2, n)].push_back(n.id);

  std::vector<std::pair<int, std::vector<int>>> order;  // (g1 node, candidates)
  for (const GraphNode& n : g1.nodes) {
    auto it = buckets.find(detail::signatureOf(g1, n));
    if (it == buckets.end()) return false;
    order.push_back({n.id, it->second});
  }
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return a.second.size() < b.second.size();
  });

  // Adjacency as multisets keyed by endpoint pairs.
  auto edgeCount = [](const SemGraph& g, int a, int b, const std::string& lbl) {
    int c = 0;
    for (const GraphEdge& e : g.edges)
      if (e.from == a && e.to == b && e.label == lbl) ++c;
    return c;
  };

  std::map<int, int> match;  // g1 id -> g2 id
  std::set<int> used;

  std::function<bool(std::size_t)> tryAssign = [&](std::size_t k) -> bool {
    if (k == order.size()) return true;
    int v1 = order[k].first;
    for (int v2 : order[k].second) {
      if (used.count(v2)) continue;
      bool ok = true;
      // Edges between v1 and already-matched nodes must correspond exactly.
      for (const auto& [u1, u2] : match) {
        for (const GraphEdge& e : g1.edges) {
          if (e.from == v1 && e.to == u1 && edgeCount(g1, v1, u1, e.label) !=
                                                edgeCount(g2, v2, u2, e.label)) {
            ok = false;
            break;
          }
          if (e.from == u1 && e.to == v1 && edgeCount(g1, u1, v1, e.label) !=
                                                edgeCount(g2, u2, v2, e.label)) {
            ok = false;
            break;
          }
        }
        if (!ok) break;
        for (const GraphEdge& e : g2.edges) {
          if ((e.from == v2 && e.to == u2 && edgeCount(g2, v2, u2, e.label) !=
                                                 edgeCount(g1, v1, u1, e.label)) ||
              (e.from == u2 && e.to == v2 && edgeCount(g2, u2, v2, e.label) !=
                                                 edgeCount(g1, u1, v1, e.label))) {
            ok = false;
            break;
          }
        }
        if (!ok) break;
      }
      // Self loops.
      if (ok) {
        for (const GraphEdge& e : g1.edges)
          if (e.from == v1 && e.to == v1 &&
              edgeCount(g1, v1, v1, e.label) != edgeCount(g2, v2, v2, e.label)) {
            ok = false;
            break;
          }
      }
      if (!ok) continue;
      match[v1] = v2;
      used.insert(v2);
      if (tryAssign(k + 1)) return true;
      match.erase(v1);
      used.erase(v2);
    }
    return false;
  };
  return tryAssign(0);
}

// A graph whose designated nodes carry source names (open argument slots).
// `open` maps each open source to its node; `requests` holds the type
// requested at each open source. `anchors` additionally remembers the node of
// every source the graph has ever carried, including sources already filled —
// Apply resolves request merges through it, which makes evaluation
// order-independent.
struct AsGraph {
  SemGraph graph;
  std::map<SourceName, int> open;
  std::map<SourceName, int> anchors;
  std::map<SourceName, AmType> requests;

  void addSource(SourceName s, int node, AmType request = AmType()) {
    if (open.count(s)) throw Error("source already present: " + str(s));
    for (const auto& [o, n] : open)
      if (n == node) throw Error("node already carries source " + str(o));
    open[s] = node;
    anchors[s] = node;
    requests[s] = std::move(request);
  }

  AmType type() const {
    AmType t;
    for (const auto& [s, n] : open) t.add(s, requests.at(s));
    return t;
  }

  void validate() const {
    graph.validate();
    std::set<int> seen;
    for (const auto& [s, n] : open) {
      if (!graph.find(n)) throw Error("source node missing: " + str(s));
      if (!seen.insert(n).second) throw Error("source map not injective");
      if (!requests.count(s)) throw Error("open source lacks a request entry");
    }
    for (const auto& [s, n] : anchors)
      if (!graph.find(n)) throw Error("anchor node missing: " + str(s));
  }
};

inline AmType typeOf(const AsGraph& g) { return g.type(); }

// ---- text serialization (one element per line; '-' = absent) ----

inline std::string toText(const SemGraph& g) {
  std::ostringstream os;
  for (const GraphNode& n : g.nodes)
    os << "node " << n.id << " " << (n.label.empty() ? "-" : n.label) << " "
       << (n.align ? std::to_string(*n.align) : "-") << "\n";
  for (const GraphEdge& e : g.edges)
    os << "edge " << e.from << " " << e.to << " " << e.label << "\n";
  os << "root " << g.root << "\n";
  return os.str();
}

inline std::string toText(const AsGraph& g) {
  std::string s = toText(g.graph);
  for (const auto& [src, n] : g.open)
    s += "source " + str(src) + " " + std::to_string(n) + " " +
         g.requests.at(src).str() + "\n";
  return s;
}

inline SemGraph semGraphFromText(std::string_view text) {
  SemGraph g;
  int maxId = -1;
  for (const std::string& line : splitChar(text, '\n')) {
    std::vector<std::string> f = splitWhitespace(line);
    if (f.empty()) continue;
    if (f[0] == "node" && f.size() == 4) {
      GraphNode n;
      n.id = std::stoi(f[1]);
      if (f[2] != "-") n.label = f[2];
      if (f[3] != "-") n.align = std::stoi(f[3]);
      g.nodes.push_back(n);
      maxId = std::max(maxId, n.id);
    } else if (f[0] == "edge" && f.size() == 4) {
      g.addEdge(std::stoi(f[1]), std::stoi(f[2]), f[3]);
    } else if (f[0] == "root" && f.size() == 2) {
      g.root = std::stoi(f[1]);
    } else {
      throw FormatError("bad graph line: " + line);
    }
  }
  g.bumpNextId(maxId + 1);
  g.validate();
  return g;
}

}  // namespace amcogs
