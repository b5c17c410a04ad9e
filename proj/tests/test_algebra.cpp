#include <algorithm>
#include <set>

#include "amcogs/algebra.hpp"
#include "amcogs/convert.hpp"
#include "catch2/catch_amalgamated.hpp"
#include "fixtures.hpp"

using namespace amcogs;

namespace {

AsGraph nounConstant(const std::string& label, int token) {
  AsGraph g;
  g.graph.root = g.graph.addNode(label, token);
  return g;
}

AsGraph detConstant(int token) {
  AsGraph g;
  int root = g.graph.addNode("the", token);
  int slot = g.graph.addNode("");
  g.graph.root = root;
  g.graph.addEdge(root, slot, "iota");
  g.addSource(SourceName::S0, slot);
  return g;
}

AsGraph wantConstant(int token) {
  AsGraph g;
  int root = g.graph.addNode("want", token);
  int s0 = g.graph.addNode("");
  int s2 = g.graph.addNode("");
  g.graph.root = root;
  g.graph.addEdge(root, s0, "agent");
  g.graph.addEdge(root, s2, "xcomp");
  AmType controlReq;
  controlReq.add(SourceName::S0);
  g.addSource(SourceName::S0, s0);
  g.addSource(SourceName::S2, s2, controlReq);
  return g;
}

AsGraph goConstant(int token) {
  AsGraph g;
  int root = g.graph.addNode("go", token);
  int s0 = g.graph.addNode("");
  g.graph.root = root;
  g.graph.addEdge(root, s0, "agent");
  g.addSource(SourceName::S0, s0);
  return g;
}

AmDepTree boyWantedTree() {
  AmDepTree tree;
  tree.constants = {{0, detConstant(0)},
                    {1, nounConstant("boy", 1)},
                    {2, wantConstant(2)},
                    {3, std::nullopt},
                    {4, goConstant(4)}};
  tree.edges = {{2, 1, Operation::apply(SourceName::S0)},
                {1, 0, Operation::modify(SourceName::S0)},
                {2, 4, Operation::apply(SourceName::S2)}};
  return tree;
}

}  // namespace

TEST_CASE("apply plugs an argument root into the head's slot") {
  AsGraph result = apply(wantConstant(2), SourceName::S0, nounConstant("boy", 1));
  CHECK(typeOf(result).str() == "[s2[s0]]");
  bool agentIntoBoy = false;
  for (const GraphEdge& e : result.graph.edges)
    if (e.label == "agent" && result.graph.node(e.to).label == "boy")
      agentIntoBoy = true;
  CHECK(agentIntoBoy);
  CHECK(result.graph.node(result.graph.root).label == "want");
}

TEST_CASE("the request merge creates the control re-entrancy in either order") {
  // s0 first, then s2
  AsGraph a = apply(wantConstant(2), SourceName::S0, nounConstant("boy", 1));
  a = apply(a, SourceName::S2, goConstant(4));
  // s2 first, then s0
  AsGraph b = apply(wantConstant(2), SourceName::S2, goConstant(4));
  b = apply(b, SourceName::S0, nounConstant("boy", 1));
  CHECK(typeOf(a).isEmpty());
  CHECK(typeOf(b).isEmpty());
  CHECK(isomorphic(a.graph, b.graph));
  // go's agent ends at the same node as want's agent.
  int agents = 0;
  std::set<int> targets;
  for (const GraphEdge& e : a.graph.edges)
    if (e.label == "agent") {
      ++agents;
      targets.insert(e.to);
    }
  CHECK(agents == 2);
  CHECK(targets.size() == 1);
}

TEST_CASE("empty-request apply is a plain plug-in") {
  AsGraph head;
  int r = head.graph.addNode("see", 1);
  int slot = head.graph.addNode("");
  head.graph.root = r;
  head.graph.addEdge(r, slot, "theme");
  head.addSource(SourceName::S1, slot);
  AsGraph result = apply(head, SourceName::S1, nounConstant("ball", 3));
  CHECK(typeOf(result).isEmpty());
  CHECK(result.graph.nodes.size() == 2);
}

TEST_CASE("apply errors: missing source, type clash, label clash") {
  CHECK_THROWS_AS(apply(nounConstant("boy", 1), SourceName::S0, nounConstant("x", 0)),
                  NoSuchSource);
  // want requests [s0] at s2; a closed graph clashes.
  CHECK_THROWS_AS(apply(wantConstant(2), SourceName::S2, nounConstant("go", 4)),
                  TypeClash);
  // two differently labeled merge partners
  AsGraph head;
  int r = head.graph.addNode("see", 1);
  int slot = head.graph.addNode("ball");
  head.graph.root = r;
  head.graph.addEdge(r, slot, "theme");
  head.addSource(SourceName::S1, slot);
  CHECK_THROWS_AS(apply(head, SourceName::S1, nounConstant("bowl", 6)), LabelClash);
}

TEST_CASE("modify attaches a determiner without changing the head's type") {
  AsGraph boy = nounConstant("boy", 1);
  AsGraph result = modify(boy, SourceName::S0, detConstant(0));
  CHECK(typeOf(result).isEmpty());
  CHECK(result.graph.node(result.graph.root).label == "boy");
  REQUIRE(result.graph.edges.size() == 1);
  CHECK(result.graph.edges[0].label == "iota");
  CHECK(result.graph.node(result.graph.edges[0].from).label == "the");
  CHECK(result.graph.node(result.graph.edges[0].to).label == "boy");
}

TEST_CASE("modify attaches a manner modifier to the verb node") {
  AsGraph sleep = nounConstant("sleep", 3);
  AsGraph soundly;  // placeholder --manner--> soundly, source on the placeholder
  int root = soundly.graph.addNode("manner-sound", 4);
  int slot = soundly.graph.addNode("");
  soundly.graph.root = root;
  soundly.graph.addEdge(slot, root, "manner");
  soundly.addSource(SourceName::S0, slot);
  AsGraph result = modify(sleep, SourceName::S0, soundly);
  REQUIRE(result.graph.edges.size() == 1);
  CHECK(result.graph.node(result.graph.edges[0].from).label == "sleep");
  CHECK(result.graph.node(result.graph.edges[0].to).label == "manner-sound");
  CHECK(result.graph.node(result.graph.root).label == "sleep");
}

TEST_CASE("modify errors: missing source, extra open sources") {
  AsGraph boy = nounConstant("boy", 1);
  AsGraph det = detConstant(0);
  CHECK_THROWS_AS(modify(boy, SourceName::S1, det), NoSuchSource);

  AsGraph bad = det;
  int extra = bad.graph.addNode("");
  bad.graph.addEdge(bad.graph.root, extra, "agent");
  bad.addSource(SourceName::S1, extra);
  CHECK_THROWS_AS(modify(boy, SourceName::S0, bad), ModifierWithOpenSources);
}

TEST_CASE("evaluating the control tree reproduces the converted graph") {
  auto ex = fixtures::boyWanted();
  SemGraph value = evaluate(boyWantedTree());
  SemGraph converted = lfToGraph(parseLf(ex.tokenized), fixtures::tokens(ex)).graph;
  CHECK(isomorphic(value, converted));
}

TEST_CASE("evaluation is independent of sibling order") {
  AmDepTree tree = boyWantedTree();
  SemGraph a = evaluate(tree);
  std::reverse(tree.edges.begin(), tree.edges.end());
  SemGraph b = evaluate(tree);
  CHECK(isomorphic(a, b));
}

TEST_CASE("a single-constant tree evaluates to its constant") {
  AmDepTree tree;
  tree.constants = {{0, nounConstant("ball", 0)}};
  SemGraph g = evaluate(tree);
  CHECK(g.nodes.size() == 1);
  CHECK(g.node(g.root).label == "ball");
}

TEST_CASE("the want/boy/sleep/soundly tree evaluates to the described value") {
  AsGraph soundly;
  int sroot = soundly.graph.addNode("manner-sound", 5);
  int sslot = soundly.graph.addNode("");
  soundly.graph.root = sroot;
  soundly.graph.addEdge(sslot, sroot, "manner");
  soundly.addSource(SourceName::S0, sslot);

  AsGraph sleepC;
  int slr = sleepC.graph.addNode("sleep", 4);
  int sls = sleepC.graph.addNode("");
  sleepC.graph.root = slr;
  sleepC.graph.addEdge(slr, sls, "agent");
  sleepC.addSource(SourceName::S0, sls);

  AmDepTree tree;
  tree.constants = {{0, detConstant(0)}, {1, nounConstant("boy", 1)},
                    {2, wantConstant(2)}, {3, std::nullopt},
                    {4, sleepC},          {5, soundly}};
  tree.edges = {{2, 1, Operation::apply(SourceName::S0)},
                {1, 0, Operation::modify(SourceName::S0)},
                {2, 4, Operation::apply(SourceName::S2)},
                {4, 5, Operation::modify(SourceName::S0)}};
  SemGraph g = evaluate(tree);
  // ARG0 of want is boy; the manner modifier sits at sleep.
  bool wantAgentBoy = false, mannerAtSleep = false, sleepAgentBoy = false;
  for (const GraphEdge& e : g.edges) {
    if (e.label == "agent" && g.node(e.from).label == "want" &&
        g.node(e.to).label == "boy")
      wantAgentBoy = true;
    if (e.label == "agent" && g.node(e.from).label == "sleep" &&
        g.node(e.to).label == "boy")
      sleepAgentBoy = true;
    if (e.label == "manner" && g.node(e.from).label == "sleep" &&
        g.node(e.to).label == "manner-sound")
      mannerAtSleep = true;
  }
  CHECK(wantAgentBoy);
  CHECK(sleepAgentBoy);
  CHECK(mannerAtSleep);
}

TEST_CASE("type bookkeeping: apply removes, modify preserves") {
  AsGraph want = wantConstant(2);
  AmType before = typeOf(want);
  AsGraph after = apply(want, SourceName::S0, nounConstant("boy", 1));
  CHECK(typeOf(after) == before.without(SourceName::S0));

  AsGraph boy = nounConstant("boy", 1);
  CHECK(typeOf(modify(boy, SourceName::S0, detConstant(0))) == typeOf(boy));
}

TEST_CASE("ill-typed trees are reported with the offending edge") {
  AmDepTree tree;
  tree.constants = {{0, nounConstant("boy", 0)}, {1, nounConstant("ball", 1)}};
  tree.edges = {{0, 1, Operation::apply(SourceName::S0)}};
  CHECK_THROWS_AS(evaluate(tree), IllTyped);

  AmDepTree open;
  open.constants = {{0, goConstant(0)}};
  CHECK_THROWS_AS(evaluate(open), NonEmptyRootType);

  AmDepTree viaBottom;
  viaBottom.constants = {{0, nounConstant("boy", 0)}, {1, std::nullopt}};
  viaBottom.edges = {{0, 1, Operation::apply(SourceName::S0)}};
  CHECK_THROWS_AS(evaluate(viaBottom), IllTyped);
}

TEST_CASE("projectivity check") {
  AmDepTree tree = boyWantedTree();
  CHECK(isProjective(tree));
  // crossing edges: 0->2 and 1->3 over four tokens
  AmDepTree bad;
  bad.constants = {{0, nounConstant("a", 0)},
                   {1, nounConstant("b", 1)},
                   {2, nounConstant("c", 2)},
                   {3, nounConstant("d", 3)}};
  bad.edges = {{0, 2, Operation::apply(SourceName::S0)},
               {2, 1, Operation::apply(SourceName::S0)},
               {1, 3, Operation::apply(SourceName::S0)}};
  CHECK_FALSE(isProjective(bad));
}
