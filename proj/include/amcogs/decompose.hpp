// Deterministic decomposition of an aligned gold graph into an AM dependency
// tree plus per-token supertags.
//
// Each token's constant is its aligned node together with the node's blob
// (all outgoing edges), external endpoints replaced by source placeholders
// under a fixed label -> source map. Determiner (iota) and preposition
// (nmod.op1) attachments become Modify edges from the modified head;
// everything argumental becomes Apply. Re-entrant nodes (control subjects)
// keep a single tree parent; the other incoming edges stay open in their
// owners' constants and surface as type requests on the tree path.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "amcogs/algebra.hpp"
#include "amcogs/convert.hpp"
#include "amcogs/errors.hpp"
#include "amcogs/graph.hpp"

namespace amcogs {

struct Blob {
  int owner = -1;
  std::vector<GraphEdge> edges;
};

// Every edge belongs to the blob of the node it originates from.
inline std::vector<Blob> blobs(const SemGraph& g) {
  std::vector<Blob> out;
  for (const GraphNode& n : g.nodes) {
    Blob b;
    b.owner = n.id;
    for (const GraphEdge* e : g.outEdges(n.id)) b.edges.push_back(*e);
    out.push_back(std::move(b));
  }
  return out;
}

struct Decomposition {
  AmDepTree tree;

  const Constant& supertag(int token) const { return tree.constants.at(token); }
};

// Delexicalized canonical key of a star-shaped constant:
// "<lex>|edge>source[request]|...". The root label is replaced by a slot.
inline std::string shapeKey(const AsGraph& c) {
  for (const auto& [s, n] : c.open)
    if (n == c.graph.root) throw NonDecomposable("constant root carries a source");
  std::vector<std::string> parts;
  std::set<int> placeholders;
  for (const GraphEdge& e : c.graph.edges) {
    if (e.from != c.graph.root)
      throw NonDecomposable("constant is not a star rooted at its owner");
    placeholders.insert(e.to);
    SourceName src = SourceName::S0;
    bool found = false;
    for (const auto& [s, n] : c.open)
      if (n == e.to) {
        src = s;
        found = true;
      }
    if (!found) throw NonDecomposable("constant edge does not end in a source slot");
    parts.push_back(e.label + ">" + str(src) + c.requests.at(src).str());
  }
  if (placeholders.size() + 1 != c.graph.nodes.size())
    throw NonDecomposable("constant has disconnected nodes");
  std::sort(parts.begin(), parts.end());
  std::string key = "<lex>";
  for (const std::string& p : parts) key += "|" + p;
  return key;
}

// Rebuilds the delexicalized constant from its key. The root is left
// unlabeled and unaligned; callers fill both in.
inline AsGraph shapeFromKey(const std::string& key) {
  std::vector<std::string> parts = splitChar(key, '|');
  if (parts.empty() || parts[0] != "<lex>") throw FormatError("bad shape key: " + key);
  AsGraph g;
  int root = g.graph.addNode("");
  g.graph.root = root;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const std::string& p = parts[i];
    std::size_t gt = p.find('>');
    std::size_t br = p.find('[', gt == std::string::npos ? 0 : gt);
    if (gt == std::string::npos || br == std::string::npos)
      throw FormatError("bad shape entry: " + p);
    std::string label = p.substr(0, gt);
    SourceName src = sourceFromString(p.substr(gt + 1, br - gt - 1));
    AmType req = AmType::parse(p.substr(br));
    int slot = g.graph.addNode("");
    g.graph.addEdge(root, slot, label);
    g.addSource(src, slot, std::move(req));
  }
  g.validate();
  return g;
}

inline Decomposition decompose(const AlignedGraph& ag) {
  const SemGraph& g = ag.graph;
  g.validate();
  const int n = ag.tokenCount;

  // Owner node per token (alignments are injective on COGS graphs).
  std::vector<int> ownerOf(n, -1);
  std::map<int, int> tokenOf;
  for (const GraphNode& nd : g.nodes) {
    if (!nd.align) throw NonDecomposable("node without alignment");
    int t = *nd.align;
    if (t < 0 || t >= n) throw NonDecomposable("node aligned outside the sentence");
    if (ownerOf[t] != -1)
      throw NonDecomposable("two nodes aligned to token " + std::to_string(t));
    ownerOf[t] = nd.id;
    tokenOf[nd.id] = t;
  }

  // Constants: owner node + blob, external endpoints as placeholders.
  struct Slot {
    SourceName src;
    int extNode;  // endpoint in the full graph
  };
  std::vector<std::optional<AsGraph>> constants(n);
  std::vector<std::vector<Slot>> slots(n);
  for (int t = 0; t < n; ++t) {
    if (ownerOf[t] == -1) continue;
    const GraphNode& owner = g.node(ownerOf[t]);
    AsGraph c;
    int root = c.graph.addNode(owner.label, t);
    c.graph.root = root;
    std::map<int, int> placeholderOf;
    for (const GraphEdge* e : g.outEdges(owner.id)) {
      if (placeholderOf.count(e->to))
        throw NonDecomposable("two blob edges share one endpoint");
      if (!tokenOf.count(e->to)) throw NonDecomposable("blob endpoint has no owner");
      int slot = c.graph.addNode("");
      placeholderOf[e->to] = slot;
      c.graph.addEdge(root, slot, e->label);
      SourceName src = canonicalSource(e->label);
      if (c.open.count(src))
        throw NonDecomposable("two blob edges map to source " + str(src));
      c.addSource(src, slot);
      slots[t].push_back({src, e->to});
    }
    constants[t] = std::move(c);
  }

  // Token-level arcs. iota and nmod.op1 run from the modifier's node to the
  // modified head, so those tree edges are reversed and labeled Modify.
  struct Arc {
    int head, dep;
    Operation op;
    SourceName placeholderSrc;  // source of the placeholder that the edge fills
    int extNode;                // the dependent-side graph node
    bool dropped = false;
  };
  std::vector<Arc> arcs;
  for (const GraphEdge& e : g.edges) {
    int i = tokenOf.at(e.from);
    int j = tokenOf.at(e.to);
    if (i == j) throw NonDecomposable("edge within a single token");
    SourceName src = canonicalSource(e.label);
    if (e.label == "iota" || e.label == "nmod.op1")
      arcs.push_back({j, i, Operation::modify(src), src, e.to, false});
    else
      arcs.push_back({i, j, Operation::apply(src), src, e.to, false});
  }

  // Resolve re-entrancies: a token with several Apply parents keeps the one
  // from which every other candidate parent is reachable over the arcs.
  {
    std::map<int, std::vector<int>> parents;
    for (std::size_t a = 0; a < arcs.size(); ++a)
      parents[arcs[a].dep].push_back(static_cast<int>(a));
    auto reaches = [&](int from, int to) {
      std::set<int> seen{from};
      std::vector<int> stack{from};
      while (!stack.empty()) {
        int t = stack.back();
        stack.pop_back();
        if (t == to) return true;
        for (const Arc& a : arcs)
          if (a.head == t && seen.insert(a.dep).second) stack.push_back(a.dep);
      }
      return false;
    };
    for (auto& [dep, cand] : parents) {
      if (cand.size() < 2) continue;
      int keep = -1;
      for (int a : cand) {
        bool dominates = true;
        for (int b : cand)
          if (b != a && !reaches(arcs[a].head, arcs[b].head)) dominates = false;
        if (dominates) {
          if (keep != -1) throw NonDecomposable("no unique parent for re-entrant token");
          keep = a;
        }
      }
      if (keep == -1) throw NonDecomposable("re-entrancy without a dominating parent");
      for (int a : cand)
        if (a != keep) {
          if (arcs[a].op.kind != OpKind::Apply)
            throw NonDecomposable("re-entrant modifier attachment");
          arcs[a].dropped = true;
        }
    }
  }

  AmDepTree tree;
  for (int t = 0; t < n; ++t) tree.constants.push_back({t, constants[t]});
  for (const Arc& a : arcs)
    if (!a.dropped) tree.edges.push_back({a.head, a.dep, a.op});

  // Tree sanity: single parent, root above everything.
  {
    std::set<int> seen;
    for (const TreeEdge& e : tree.edges)
      if (!seen.insert(e.dep).second)
        throw NonDecomposable("token with two tree parents");
    tree.rootToken();  // throws if not a single tree
  }

  // Bottom-up pass: compute which sources stay open in each subtree's value
  // (dropped arcs), check they resolve against the parent's constant, and
  // write the resulting requests into the Apply sources of parents.
  {
    std::map<int, std::map<SourceName, int>> opensAt;  // token -> src -> ext node
    int root = tree.rootToken();
    std::vector<std::pair<int, bool>> stack{{root, false}};
    std::vector<int> postorder;
    while (!stack.empty()) {
      auto [t, done] = stack.back();
      stack.pop_back();
      if (done) {
        postorder.push_back(t);
        continue;
      }
      stack.push_back({t, true});
      for (const TreeEdge* e : tree.childrenOf(t)) stack.push_back({e->dep, false});
    }
    for (int t : postorder) {
      std::map<SourceName, int> opens;
      for (const Arc& a : arcs)
        if (a.dropped && a.head == t) {
          if (opens.count(a.placeholderSrc))
            throw NonDecomposable("two dropped arcs share a source at one token");
          opens[a.placeholderSrc] = a.extNode;
        }
      for (const TreeEdge* e : tree.childrenOf(t)) {
        const std::map<SourceName, int>& childOpens = opensAt.at(e->dep);
        if (e->op.kind == OpKind::Modify) {
          if (!childOpens.empty())
            throw NonDecomposable("modifier subtree still has open sources");
          continue;
        }
        AmType request;
        for (const auto& [r, extNode] : childOpens) {
          // The parent's constant must hold a same-named placeholder for the
          // same graph node; that is what the request merge unifies.
          bool shared = false;
          for (const Slot& s : slots[t])
            if (s.src == r && s.extNode == extNode) shared = true;
          if (!shared)
            throw NonDecomposable("open source " + str(r) +
                                  " does not resolve at the tree parent");
          request.add(r, AmType{});
          auto mine = opens.find(r);
          if (mine != opens.end() && mine->second != extNode)
            throw NonDecomposable("conflicting nodes for open source " + str(r));
          // If the parent's own arc for this placeholder was dropped too, the
          // source keeps propagating upward; otherwise the parent's kept tree
          // edge fills it.
          for (const Arc& a : arcs)
            if (a.dropped && a.head == t && a.placeholderSrc == r) opens[r] = extNode;
        }
        if (request.depth() > 1)
          throw NonDecomposable("request of depth > 1 required");
        tree.constants[t].graph->requests.at(e->op.src) = std::move(request);
      }
      opensAt[t] = std::move(opens);
    }
    if (!opensAt.at(root).empty())
      throw NonDecomposable("root value would keep open sources");
  }

  return {std::move(tree)};
}

// Delexicalized supertag shapes with their corpus frequencies.
inline std::map<std::string, long> supertagInventory(const std::vector<Decomposition>& corpus) {
  std::map<std::string, long> freq;
  for (const Decomposition& d : corpus)
    for (const Constant& c : d.tree.constants)
      if (!c.isBottom()) ++freq[shapeKey(*c.graph)];
  return freq;
}

// Shape inventory plus per-form statistics; what the scorer trains against
// and the decoder draws candidates from.
struct Lexicon {
  std::vector<std::string> shapes;          // sorted canonical keys; id = index
  std::vector<AsGraph> shapeGraphs;         // parsed, delexicalized
  std::map<std::string, long> shapeCounts;  // key -> frequency
  std::map<std::string, std::map<int, long>> formShapes;  // form -> shape id -> count
  std::map<std::string, long> formBottom;                 // form -> ⊥ count

  int shapeId(const std::string& key) const {
    auto it = std::lower_bound(shapes.begin(), shapes.end(), key);
    if (it == shapes.end() || *it != key) return -1;
    return static_cast<int>(it - shapes.begin());
  }
};

inline Lexicon buildLexicon(
    const std::vector<std::pair<std::vector<std::string>, Decomposition>>& corpus) {
  Lexicon lex;
  std::set<std::string> keys;
  for (const auto& [tokens, d] : corpus)
    for (const Constant& c : d.tree.constants)
      if (!c.isBottom()) keys.insert(shapeKey(*c.graph));
  lex.shapes.assign(keys.begin(), keys.end());
  for (const std::string& k : lex.shapes) lex.shapeGraphs.push_back(shapeFromKey(k));
  for (const auto& [tokens, d] : corpus)
    for (const Constant& c : d.tree.constants) {
      const std::string& form = tokens.at(c.token);
      if (c.isBottom()) {
        ++lex.formBottom[form];
      } else {
        std::string key = shapeKey(*c.graph);
        ++lex.shapeCounts[key];
        ++lex.formShapes[form][lex.shapeId(key)];
      }
    }
  return lex;
}

}  // namespace amcogs
