// Deterministic conversion between COGS logical forms and graphs.
//
// lfToGraph: one node per variable and proper name; binary predicates become
// edges; definite determiners and prepositions are reified as fresh nodes.
// graphToLf is the exact inverse followed by canonical conjunct ordering.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "amcogs/errors.hpp"
#include "amcogs/graph.hpp"
#include "amcogs/lf.hpp"

namespace amcogs {

struct AlignedGraph {
  SemGraph graph;
  int tokenCount = 0;
  bool fullyAligned = false;
};

inline const std::set<std::string>& cogsEdgeLabels() {
  static const std::set<std::string> kLabels = {
      "agent", "theme", "recipient", "xcomp", "ccomp", "iota", "nmod.op1", "nmod.op2"};
  return kLabels;
}

// Canonical edge-label -> source mapping used by decomposition and for the
// canonical source assignment of primitives.
inline SourceName canonicalSource(const std::string& edgeLabel) {
  if (edgeLabel == "agent") return SourceName::S0;
  if (edgeLabel == "theme") return SourceName::S1;
  if (edgeLabel == "recipient") return SourceName::S2;
  if (edgeLabel == "xcomp" || edgeLabel == "ccomp") return SourceName::S2;
  if (edgeLabel == "nmod.op1") return SourceName::S0;
  if (edgeLabel == "nmod.op2") return SourceName::S1;
  if (edgeLabel == "iota") return SourceName::S0;
  throw NonDecomposable("no canonical source for edge label " + edgeLabel);
}

// Fills the alignment cache of every proper-name argument (first occurrence
// of the name in the sentence) and bounds-checks variable indices.
inline LogicalForm alignLf(const LogicalForm& lf, const std::vector<std::string>& tokens) {
  LogicalForm out = lf;
  auto alignArg = [&](Argument& a) {
    if (a.kind == ArgKind::Variable) {
      if (a.index >= static_cast<int>(tokens.size()))
        throw ConvertError("variable index " + std::to_string(a.index) +
                           " out of range for " + std::to_string(tokens.size()) +
                           " tokens");
    } else if (a.kind == ArgKind::ProperName) {
      for (std::size_t i = 0; i < tokens.size(); ++i)
        if (tokens[i] == a.name) {
          a.alignment = static_cast<int>(i);
          return;
        }
      throw UnknownToken("proper name not found in sentence: " + a.name);
    }
  };
  for (Term& t : out.iotaTerms)
    for (Argument& a : t.args) alignArg(a);
  for (Term& t : out.conjuncts)
    for (Argument& a : t.args) alignArg(a);
  return out;
}

inline AlignedGraph lfToGraph(const LogicalForm& lfIn, const std::vector<std::string>& tokens) {
  if (lfIn.isPrimitive()) throw ConvertError("lfToGraph does not handle primitives");
  lfIn.validate();
  LogicalForm lf = alignLf(lfIn, tokens);
  const int n = static_cast<int>(tokens.size());

  SemGraph g;
  std::map<int, int> varNode;          // token index -> node id
  std::map<std::string, int> nameNode; // proper name -> node id
  std::set<int> introduced;            // determiner/preposition node ids

  // COGS sentences never repeat a proper name; fail loudly if one does.
  {
    std::set<std::string> seen;
    for (const std::string& t : tokens)
      if (startsWithUpper(t) && !seen.insert(t).second)
        throw ConvertError("proper name appears twice in sentence: " + t);
  }

  auto nodeFor = [&](const Argument& a) -> int {
    if (a.kind == ArgKind::Variable) {
      auto it = varNode.find(a.index);
      if (it != varNode.end()) return it->second;
      int id = g.addNode("", a.index);
      varNode[a.index] = id;
      return id;
    }
    if (a.kind == ArgKind::ProperName) {
      auto it = nameNode.find(a.name);
      if (it != nameNode.end()) return it->second;
      int id = g.addNode(a.name, *a.alignment);
      nameNode[a.name] = id;
      return id;
    }
    throw ConvertError("lambda variable in a non-primitive formula");
  };

  auto setLabel = [&](int id, const std::string& label) {
    GraphNode* node = g.find(id);
    if (node->labeled() && node->label != label)
      throw ConvertError("conflicting labels for one node: " + node->label + " vs " + label);
    node->label = label;
  };

  auto handleBinary = [&](const Term& t) {
    int a1 = nodeFor(t.args[0]);
    int a2 = nodeFor(t.args[1]);
    if (t.predicateParts.size() == 3) {
      // noun.nmod.P(x, y): reified preposition node aligned to index(x)+1.
      if (t.predicateParts[1] != "nmod")
        throw ConvertError("unsupported three-part predicate: " + t.predicate());
      setLabel(a1, t.predicateParts[0]);
      const std::string& prep = t.predicateParts[2];
      int at = tokenIndexOf(t.args[0]) + 1;
      if (at >= n) throw ConvertError("preposition alignment out of range");
      if (toLower(tokens[at]) != toLower(prep))
        throw ConvertError("token at preposition position is '" + tokens[at] +
                           "', expected '" + prep + "'");
      int p = g.addNode(prep, at);
      introduced.insert(p);
      g.addEdge(p, a1, "nmod.op1");
      g.addEdge(p, a2, "nmod.op2");
    } else {
      const std::string& rel = t.predicateParts[1];
      if (!cogsEdgeLabels().count(rel) || rel == "iota" || rel.rfind("nmod", 0) == 0)
        throw ConvertError("unknown relation: " + rel);
      setLabel(a1, t.predicateParts[0]);
      g.addEdge(a1, a2, rel);
    }
  };

  for (const Term& t : lf.iotaTerms) {
    int noun = nodeFor(t.args[0]);
    setLabel(noun, t.lemma());
    int at = tokenIndexOf(t.args[0]) - 1;
    if (at < 0) throw ConvertError("determiner alignment out of range");
    if (toLower(tokens[at]) != "the")
      throw ConvertError("token before a definite noun is '" + tokens[at] + "', expected 'the'");
    for (const GraphEdge& e : g.edges)
      if (e.to == noun && e.label == "iota")
        throw ConvertError("duplicate iota for one noun");
    int det = g.addNode("the", at);
    introduced.insert(det);
    g.addEdge(det, noun, "iota");
  }
  for (const Term& t : lf.conjuncts) {
    if (t.unary()) {
      if (t.args[0].kind != ArgKind::Variable)
        throw ConvertError("unary term over a non-variable");
      setLabel(nodeFor(t.args[0]), t.lemma());
    } else {
      handleBinary(t);
    }
  }

  for (const GraphNode& nd : g.nodes)
    if (!nd.labeled())
      throw ConvertError("variable never receives a label: token " +
                         std::to_string(nd.align.value_or(-1)));

  // At most two nodes may share a token (never observed in COGS; asserted).
  {
    std::map<int, int> perToken;
    for (const GraphNode& nd : g.nodes)
      if (nd.align && ++perToken[*nd.align] > 2)
        throw ConvertError("more than two nodes aligned to one token");
  }

  // Root: the unique node with no incoming edges, determiner and preposition
  // nodes excluded.
  std::vector<int> candidates;
  for (const GraphNode& nd : g.nodes) {
    if (introduced.count(nd.id)) continue;
    if (g.inEdges(nd.id).empty()) candidates.push_back(nd.id);
  }
  if (candidates.size() != 1)
    throw RootAmbiguity("expected exactly one root candidate, found " +
                        std::to_string(candidates.size()));
  g.root = candidates[0];
  g.validate();
  return {std::move(g), n, true};
}

// All injective assignments of {s0,s1,s2} to the given placeholder nodes,
// in a deterministic order.
namespace detail {
inline void sourceAssignments(const std::vector<int>& slots, std::size_t k,
                              std::vector<SourceName>& cur,
                              std::vector<std::vector<SourceName>>& out) {
  static const SourceName all[] = {SourceName::S0, SourceName::S1, SourceName::S2};
  if (k == slots.size()) {
    out.push_back(cur);
    return;
  }
  for (SourceName s : all) {
    if (std::find(cur.begin(), cur.end(), s) != cur.end()) continue;
    cur.push_back(s);
    sourceAssignments(slots, k + 1, cur, out);
    cur.pop_back();
  }
}
}  // namespace detail

// Shared scaffolding for the primitive conversions below: builds the graph
// with unlabeled placeholder slots and reports them in a fixed order.
inline AsGraph primitiveSkeleton(const LogicalForm& lf, std::vector<int>& slotsOut) {
  if (!lf.isPrimitive()) throw NotAPrimitive("formula has no lambda prefix");
  lf.validate();
  AsGraph result;
  if (lf.isBareName()) {
    int id = result.graph.addNode(lf.conjuncts[0].lemma(), 0);
    result.graph.root = id;
    return result;
  }
  const std::vector<std::string>& prefix = *lf.lambdaPrefix;

  // The event variable is the lambda variable appearing as the first argument
  // of every conjunct.
  std::optional<std::string> eventVar;
  for (const std::string& v : prefix) {
    bool ok = true;
    for (const Term& t : lf.conjuncts)
      if (t.args[0].name != v) ok = false;
    if (ok) {
      eventVar = v;
      break;
    }
  }
  if (!eventVar)
    throw NotAPrimitive("no lambda variable heads every conjunct");

  std::map<std::string, int> nodeOf;
  for (const std::string& v : prefix) nodeOf[v] = result.graph.addNode("");
  result.graph.root = nodeOf[*eventVar];
  result.graph.find(result.graph.root)->align = 0;  // single-token sentence

  for (const Term& t : lf.conjuncts) {
    int head = nodeOf.at(t.args[0].name);
    if (t.unary()) {
      GraphNode* nd = result.graph.find(head);
      if (nd->labeled() && nd->label != t.lemma())
        throw ConvertError("conflicting labels in primitive");
      nd->label = t.lemma();
    } else {
      if (t.predicateParts.size() != 2)
        throw ConvertError("nmod predicates cannot occur in primitives");
      GraphNode* nd = result.graph.find(head);
      if (nd->labeled() && nd->label != t.lemma())
        throw ConvertError("conflicting labels in primitive");
      nd->label = t.lemma();
      result.graph.addEdge(head, nodeOf.at(t.args[1].name), t.predicateParts[1]);
    }
  }
  if (!result.graph.find(result.graph.root)->labeled())
    throw NotAPrimitive("event variable never receives a label");

  for (const std::string& v : prefix)
    if (v != *eventVar) slotsOut.push_back(nodeOf.at(v));
  return result;
}

// Canonical conversion: placeholders get the source suggested by their
// incoming edge label (agent -> s0, theme -> s1, ...).
inline AsGraph primitiveToGraph(const LogicalForm& lf) {
  std::vector<int> slots;
  AsGraph g = primitiveSkeleton(lf, slots);
  for (int slot : slots) {
    auto in = g.graph.inEdges(slot);
    if (in.size() != 1)
      throw ConvertError("primitive slot must have exactly one incoming edge");
    SourceName s = canonicalSource(in[0]->label);
    if (g.open.count(s))
      throw ConvertError("two primitive slots map to the same source");
    g.addSource(s, slot);
  }
  g.validate();
  return g;
}

// Every injective source assignment for the primitive's slots (the canonical
// one is always included).
inline std::vector<AsGraph> enumeratePrimitiveSourceAssignments(const LogicalForm& lf) {
  std::vector<int> slots;
  AsGraph base = primitiveSkeleton(lf, slots);
  std::vector<std::vector<SourceName>> assignments;
  std::vector<SourceName> cur;
  detail::sourceAssignments(slots, 0, cur, assignments);
  std::vector<AsGraph> out;
  for (const auto& assign : assignments) {
    AsGraph g = base;
    for (std::size_t i = 0; i < slots.size(); ++i) g.addSource(assign[i], slots[i]);
    g.validate();
    out.push_back(std::move(g));
  }
  return out;
}

// Inverse conversion. Relexicalizes predicates from node labels, regenerates
// unary predicates for labeled leaves, turns determiner nodes back into iota
// terms and preposition nodes into nmod predicates, then sorts canonically.
inline LogicalForm graphToLf(const AlignedGraph& ag, const std::vector<std::string>& tokens) {
  const SemGraph& g = ag.graph;
  g.validate();
  (void)tokens;

  auto argOf = [&](const GraphNode& nd) -> Argument {
    if (!nd.align) throw MalformedGraph("node without alignment");
    if (*nd.align < 0 || *nd.align >= ag.tokenCount)
      throw MalformedGraph("node alignment out of range");
    if (startsWithUpper(nd.label))
      return Argument::properName(nd.label, *nd.align);
    return Argument::variable(*nd.align);
  };

  enum class Kind { Det, Prep, Regular };
  std::map<int, Kind> kind;
  for (const GraphNode& nd : g.nodes) {
    bool hasIota = false, hasOp = false;
    for (const GraphEdge* e : g.outEdges(nd.id)) {
      if (e->label == "iota") hasIota = true;
      if (e->label == "nmod.op1" || e->label == "nmod.op2") hasOp = true;
    }
    kind[nd.id] = hasIota ? Kind::Det : hasOp ? Kind::Prep : Kind::Regular;
    if (!nd.labeled()) throw MalformedGraph("unlabeled node in converted graph");
  }

  LogicalForm lf;
  std::set<int> underIota;
  for (const GraphNode& nd : g.nodes) {
    if (kind[nd.id] != Kind::Det) continue;
    auto out = g.outEdges(nd.id);
    if (out.size() != 1 || out[0]->label != "iota")
      throw MalformedGraph("determiner node must have exactly one iota edge");
    const GraphNode& noun = g.node(out[0]->to);
    if (!noun.labeled()) throw MalformedGraph("iota target unlabeled");
    lf.iotaTerms.push_back(Term({noun.label}, {argOf(noun)}));
    underIota.insert(noun.id);
  }
  for (const GraphNode& nd : g.nodes) {
    switch (kind[nd.id]) {
      case Kind::Det:
        break;
      case Kind::Prep: {
        auto out = g.outEdges(nd.id);
        const GraphEdge *op1 = nullptr, *op2 = nullptr;
        for (const GraphEdge* e : out) {
          if (e->label == "nmod.op1" && !op1) op1 = e;
          else if (e->label == "nmod.op2" && !op2) op2 = e;
          else throw MalformedGraph("preposition node with unexpected out-edges");
        }
        if (!op1 || !op2)
          throw MalformedGraph("preposition node lacks nmod.op1/nmod.op2");
        const GraphNode& x = g.node(op1->to);
        const GraphNode& y = g.node(op2->to);
        if (!x.labeled()) throw MalformedGraph("nmod.op1 target unlabeled");
        lf.conjuncts.push_back(
            Term({x.label, "nmod", nd.label}, {argOf(x), argOf(y)}));
        break;
      }
      case Kind::Regular: {
        auto out = g.outEdges(nd.id);
        if (out.empty()) {
          // Labeled leaf: unary predicate, unless the iota prefix covers it
          // or it is a proper name.
          if (!underIota.count(nd.id) && !startsWithUpper(nd.label))
            lf.conjuncts.push_back(Term({nd.label}, {argOf(nd)}));
        } else {
          for (const GraphEdge* e : out) {
            if (!cogsEdgeLabels().count(e->label) || e->label == "iota")
              throw MalformedGraph("unexpected edge label: " + e->label);
            lf.conjuncts.push_back(
                Term({nd.label, e->label}, {argOf(nd), argOf(g.node(e->to))}));
          }
        }
        break;
      }
    }
  }
  if (lf.conjuncts.empty())
    throw MalformedGraph("graph yields an empty conjunction");

  try {
    lf.validate();
  } catch (const Error& e) {
    throw MalformedGraph(std::string("graph is not invertible: ") + e.what());
  }
  return canonicalOrder(lf);
}

}  // namespace amcogs
