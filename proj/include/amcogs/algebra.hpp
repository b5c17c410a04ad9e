// The AM algebra: Apply and Modify on source-annotated graphs, and the
// deterministic bottom-up evaluation of AM dependency trees.
//
// Apply fills an open argument slot of the head with the root of the
// argument; sources named in the slot's request are unified with the head's
// same-named nodes, which is what creates re-entrancies such as subject
// control. Modify merges the modifier's open source with the head's root and
// leaves the head's type untouched.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "amcogs/errors.hpp"
#include "amcogs/graph.hpp"

namespace amcogs {

enum class OpKind { Apply, Modify };

struct Operation {
  OpKind kind = OpKind::Apply;
  SourceName src = SourceName::S0;

  static Operation apply(SourceName s) { return {OpKind::Apply, s}; }
  static Operation modify(SourceName s) { return {OpKind::Modify, s}; }

  std::string str() const {
    return (kind == OpKind::Apply ? std::string("APP_") : std::string("MOD_")) +
           amcogs::str(src);
  }
  static Operation parse(std::string_view s) {
    if (s.size() < 5 || s[3] != '_') throw Error("bad operation: " + std::string(s));
    Operation op;
    std::string head(s.substr(0, 3));
    if (head == "APP") op.kind = OpKind::Apply;
    else if (head == "MOD") op.kind = OpKind::Modify;
    else throw Error("bad operation: " + std::string(s));
    op.src = sourceFromString(s.substr(4));
    return op;
  }
  auto operator<=>(const Operation&) const = default;
};

struct Constant {
  int token = -1;
  std::optional<AsGraph> graph;  // nullopt = ⊥, contributes nothing

  bool isBottom() const { return !graph.has_value(); }
};

struct TreeEdge {
  int head = -1;
  int dep = -1;
  Operation op;
};

struct AmDepTree {
  std::vector<Constant> constants;  // index = token position
  std::vector<TreeEdge> edges;

  int size() const { return static_cast<int>(constants.size()); }

  std::vector<const TreeEdge*> childrenOf(int token) const {
    std::vector<const TreeEdge*> out;
    for (const TreeEdge& e : edges)
      if (e.head == token) out.push_back(&e);
    return out;
  }

  // The unique non-⊥ token without an incoming edge.
  int rootToken() const {
    std::set<int> hasParent;
    for (const TreeEdge& e : edges) hasParent.insert(e.dep);
    int root = -1;
    for (const Constant& c : constants) {
      if (c.isBottom()) continue;
      if (hasParent.count(c.token)) continue;
      if (root != -1) throw IllTyped("tree has more than one root");
      root = c.token;
    }
    if (root == -1) throw IllTyped("tree has no root");
    return root;
  }

  // One edge per line: head, dep, op, source.
  std::string toText() const {
    std::ostringstream os;
    for (const TreeEdge& e : edges)
      os << e.head << " " << e.dep << " "
         << (e.op.kind == OpKind::Apply ? "APP" : "MOD") << " " << str(e.op.src)
         << "\n";
    return os.str();
  }
};

namespace detail {

// Replaces node `from` by node `into` everywhere: edges are re-pointed, the
// labels and alignments are unioned (at most one side may carry each).
inline void unifyNodes(SemGraph& g, int from, int into) {
  if (from == into) return;
  GraphNode* a = g.find(from);
  GraphNode* b = g.find(into);
  if (!a || !b) throw Error("unify on missing node");
  if (a->labeled() && b->labeled() && a->label != b->label)
    throw LabelClash("merge partners are labeled differently: " + a->label +
                     " vs " + b->label);
  if (a->align && b->align && *a->align != *b->align)
    throw LabelClash("merge partners carry conflicting alignments");
  if (a->labeled()) b->label = a->label;
  if (a->align) b->align = a->align;
  for (GraphEdge& e : g.edges) {
    if (e.from == from) e.from = into;
    if (e.to == from) e.to = into;
  }
  std::erase_if(g.nodes, [&](const GraphNode& n) { return n.id == from; });
  if (g.root == from) g.root = into;
}

// Imports all of src's nodes and edges into dst with fresh ids; returns the
// id remapping.
inline std::map<int, int> importGraph(SemGraph& dst, const SemGraph& src) {
  std::map<int, int> remap;
  for (const GraphNode& n : src.nodes) remap[n.id] = dst.addNode(n.label, n.align);
  for (const GraphEdge& e : src.edges)
    dst.addEdge(remap.at(e.from), remap.at(e.to), e.label);
  return remap;
}

}  // namespace detail

inline AsGraph apply(const AsGraph& head, SourceName s, const AsGraph& arg) {
  auto it = head.open.find(s);
  if (it == head.open.end())
    throw NoSuchSource("head has no open source " + str(s));
  const AmType& request = head.requests.at(s);
  AmType argType = arg.type();
  if (!(argType == request))
    throw TypeClash("request at " + str(s) + " is " + request.str() +
                    " but argument has type " + argType.str());

  AsGraph out = head;
  std::map<int, int> remap = detail::importGraph(out.graph, arg.graph);

  int slot = it->second;
  detail::unifyNodes(out.graph, remap.at(arg.graph.root), slot);
  out.open.erase(s);
  out.requests.erase(s);
  // The anchor keeps pointing at the filled slot so later request merges can
  // still reach it.

  for (const auto& [r, req] : request.entries()) {
    (void)req;
    int argNode = remap.at(arg.open.at(r));
    auto anchor = out.anchors.find(r);
    if (anchor == out.anchors.end())
      throw TypeClash("request names source " + str(r) + " unknown to the head");
    detail::unifyNodes(out.graph, argNode, anchor->second);
  }
  return out;
}

inline AsGraph modify(const AsGraph& head, SourceName s, const AsGraph& mod) {
  auto it = mod.open.find(s);
  if (it == mod.open.end())
    throw NoSuchSource("modifier has no open source " + str(s));
  if (mod.open.size() > 1) {
    std::string extra;
    for (const auto& [o, n] : mod.open)
      if (o != s) extra += (extra.empty() ? "" : ", ") + str(o);
    throw ModifierWithOpenSources("modifier has open sources besides " + str(s) +
                                  ": " + extra);
  }
  if (!mod.requests.at(s).isEmpty())
    throw TypeClash("modify source " + str(s) + " must carry an empty request");

  AsGraph out = head;
  std::map<int, int> remap = detail::importGraph(out.graph, mod.graph);
  detail::unifyNodes(out.graph, remap.at(it->second), out.graph.root);
  return out;
}

namespace detail {

inline AsGraph evaluateSubtree(const AmDepTree& tree, int token) {
  const Constant& c = tree.constants.at(token);
  if (c.isBottom()) throw IllTyped("⊥ token used as tree node");
  AsGraph value = *c.graph;
  // Children combine in edge-list order; the result is order-independent
  // because Apply targets distinct sources and Modify targets the root.
  for (const TreeEdge* e : tree.childrenOf(token)) {
    AsGraph child = evaluateSubtree(tree, e->dep);
    try {
      value = e->op.kind == OpKind::Apply ? apply(value, e->op.src, child)
                                          : modify(value, e->op.src, child);
    } catch (const AlgebraError& err) {
      throw IllTyped("edge " + std::to_string(e->head) + "->" +
                     std::to_string(e->dep) + " " + e->op.str() + ": " + err.what());
    }
  }
  return value;
}

}  // namespace detail

// Deterministic bottom-up evaluation; the root's remaining type must be empty.
inline AsGraph evaluateValue(const AmDepTree& tree) {
  for (const TreeEdge& e : tree.edges) {
    if (e.head < 0 || e.head >= tree.size() || e.dep < 0 || e.dep >= tree.size())
      throw IllTyped("tree edge out of range");
    if (tree.constants[e.head].isBottom() || tree.constants[e.dep].isBottom())
      throw IllTyped("tree edge touches a ⊥ token");
  }
  int root = tree.rootToken();
  // Every non-⊥ token must hang off the root.
  {
    std::set<int> reach{root};
    std::vector<int> stack{root};
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      for (const TreeEdge* e : tree.childrenOf(t))
        if (reach.insert(e->dep).second) stack.push_back(e->dep);
    }
    for (const Constant& c : tree.constants)
      if (!c.isBottom() && !reach.count(c.token))
        throw IllTyped("non-⊥ token disconnected from the tree");
  }
  AsGraph value = detail::evaluateSubtree(tree, root);
  if (!value.type().isEmpty())
    throw NonEmptyRootType("root value still has open sources: " +
                           value.type().str());
  return value;
}

inline SemGraph evaluate(const AmDepTree& tree) { return evaluateValue(tree).graph; }

// Projectivity w.r.t. token order: every subtree must cover a contiguous
// stretch of the non-⊥ tokens (⊥ tokens sit outside the tree and do not
// break contiguity).
inline bool isProjective(const AmDepTree& tree) {
  std::map<int, int> rank;  // token -> position among non-⊥ tokens
  for (const Constant& c : tree.constants)
    if (!c.isBottom()) {
      int r = static_cast<int>(rank.size());
      rank[c.token] = r;
    }
  for (const auto& [token, r] : rank) {
    std::set<int> yield{rank.at(token)};
    std::vector<int> stack{token};
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      for (const TreeEdge* e : tree.childrenOf(t)) {
        yield.insert(rank.at(e->dep));
        stack.push_back(e->dep);
      }
    }
    if (*yield.rbegin() - *yield.begin() + 1 != static_cast<int>(yield.size()))
      return false;
  }
  return true;
}

// The set of distinct source names mentioned anywhere in the tree's constants.
inline std::set<SourceName> sourcesUsed(const AmDepTree& tree) {
  std::set<SourceName> used;
  for (const Constant& c : tree.constants) {
    if (c.isBottom()) continue;
    for (const auto& [s, n] : c.graph->open) used.insert(s);
  }
  return used;
}

}  // namespace amcogs
