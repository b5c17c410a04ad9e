#include <map>
#include <set>

#include "amcogs/decompose.hpp"
#include "catch2/catch_amalgamated.hpp"
#include "fixtures.hpp"

using namespace amcogs;

namespace {

AlignedGraph convert(const fixtures::Example& ex) {
  return lfToGraph(parseLf(ex.tokenized), fixtures::tokens(ex));
}

std::map<std::pair<int, int>, Operation> edgeMap(const AmDepTree& t) {
  std::map<std::pair<int, int>, Operation> out;
  for (const TreeEdge& e : t.edges) out[{e.head, e.dep}] = e.op;
  return out;
}

}  // namespace

TEST_CASE("every edge belongs to the blob of its origin") {
  AlignedGraph ag = convert(fixtures::sawBall());
  auto bs = blobs(ag.graph);
  std::size_t covered = 0;
  for (const Blob& b : bs) {
    for (const GraphEdge& e : b.edges) CHECK(e.from == b.owner);
    covered += b.edges.size();
  }
  CHECK(covered == ag.graph.edges.size());
}

TEST_CASE("decomposing the control example yields the expected tree") {
  Decomposition d = decompose(convert(fixtures::boyWanted()));
  auto em = edgeMap(d.tree);
  REQUIRE(em.size() == 3);
  CHECK(em.at({2, 1}) == Operation::apply(SourceName::S0));
  CHECK(em.at({1, 0}) == Operation::modify(SourceName::S0));
  CHECK(em.at({2, 4}) == Operation::apply(SourceName::S2));
  CHECK(d.tree.constants[3].isBottom());  // "to"
  // want's xcomp source carries the subject-control request
  const AsGraph& want = *d.tree.constants[2].graph;
  CHECK(typeOf(want).str() == "[s0, s2[s0]]");
  // evaluation gives back the original graph
  CHECK(isomorphic(evaluate(d.tree), convert(fixtures::boyWanted()).graph));
}

TEST_CASE("decomposing the PP example attaches low with modify edges") {
  Decomposition d = decompose(convert(fixtures::sawBall()));
  auto em = edgeMap(d.tree);
  // see heads Ava and ball; each noun modifies with the next preposition.
  CHECK(em.at({1, 0}) == Operation::apply(SourceName::S0));   // see -> Ava
  CHECK(em.at({1, 3}) == Operation::apply(SourceName::S1));   // see -> ball
  CHECK(em.at({3, 4}) == Operation::modify(SourceName::S0));  // ball -> in
  CHECK(em.at({4, 6}) == Operation::apply(SourceName::S1));   // in -> bowl
  CHECK(em.at({6, 7}) == Operation::modify(SourceName::S0));  // bowl -> on
  CHECK(em.at({7, 9}) == Operation::apply(SourceName::S1));   // on -> table
  CHECK(em.at({9, 8}) == Operation::modify(SourceName::S0));  // table -> the
  CHECK(em.size() == 7);
  CHECK(isomorphic(evaluate(d.tree), convert(fixtures::sawBall()).graph));
}

TEST_CASE("decompose/evaluate identity, projectivity, and source budget") {
  for (const auto& ex :
       {fixtures::boyWanted(), fixtures::lendedCookie(), fixtures::cpRecursion(),
        fixtures::sawBall(), fixtures::babyTray()}) {
    AlignedGraph ag = convert(ex);
    Decomposition d = decompose(ag);
    CHECK(isomorphic(evaluate(d.tree), ag.graph));
    CHECK(isProjective(d.tree));
    CHECK(sourcesUsed(d.tree).size() <= 3);
  }
}

TEST_CASE("non-decomposable inputs fail loudly") {
  SemGraph g;
  int a = g.addNode("ball", 0);
  g.addNode("ghost");  // no alignment
  g.root = a;
  CHECK_THROWS_AS(decompose({g, 1, false}), NonDecomposable);

  SemGraph h;
  int x = h.addNode("boy", 0);
  int y = h.addNode("dup", 0);  // same token as x
  h.addEdge(x, y, "agent");
  h.root = x;
  CHECK_THROWS_AS(decompose({h, 1, false}), NonDecomposable);
}

TEST_CASE("supertag shapes are delexicalized and counted") {
  std::vector<Decomposition> corpus;
  int bottoms = 0, tokens = 0;
  for (const auto& ex :
       {fixtures::boyWanted(), fixtures::lendedCookie(), fixtures::cpRecursion(),
        fixtures::sawBall(), fixtures::babyTray()}) {
    corpus.push_back(decompose(convert(ex)));
    for (const Constant& c : corpus.back().tree.constants) {
      ++tokens;
      if (c.isBottom()) ++bottoms;
    }
  }
  std::map<std::string, long> inv = supertagInventory(corpus);
  long total = 0;
  for (const auto& [k, v] : inv) total += v;
  CHECK(total == tokens - bottoms);  // conservation

  CHECK(inv.count("<lex>"));                                   // bare noun
  CHECK(inv.count("<lex>|agent>s0[]|theme>s1[]"));             // transitive
  CHECK(inv.count("<lex>|agent>s0[]|xcomp>s2[s0]"));           // control verb
  CHECK(inv.count("<lex>|agent>s0[]|ccomp>s2[]"));             // cp verb
  CHECK(inv.count("<lex>|nmod.op1>s0[]|nmod.op2>s1[]"));       // preposition
  CHECK(inv.count("<lex>|iota>s0[]"));                         // determiner
  CHECK(inv.count("<lex>|recipient>s2[]|theme>s1[]"));         // passive lend
  CHECK(supertagInventory({}).empty());
}

TEST_CASE("shape keys parse back into equivalent constants") {
  for (const std::string& key :
       {std::string("<lex>"), std::string("<lex>|agent>s0[]|xcomp>s2[s0]"),
        std::string("<lex>|nmod.op1>s0[]|nmod.op2>s1[]")}) {
    AsGraph g = shapeFromKey(key);
    CHECK(shapeKey(g) == key);
  }
}

TEST_CASE("the lexicon maps forms to their observed shapes") {
  std::vector<std::pair<std::vector<std::string>, Decomposition>> corpus;
  for (const auto& ex : {fixtures::boyWanted(), fixtures::sawBall()}) {
    corpus.push_back({fixtures::tokens(ex), decompose(convert(ex))});
  }
  Lexicon lex = buildLexicon(corpus);
  CHECK(lex.shapes.size() >= 4);
  int detShape = lex.shapeId("<lex>|iota>s0[]");
  REQUIRE(detShape >= 0);
  CHECK(lex.formShapes.at("The").at(detShape) == 1);
  CHECK(lex.formShapes.at("the").at(detShape) == 1);
  CHECK(lex.formBottom.at("to") == 1);
  CHECK(lex.formShapes.at("wanted").size() == 1);
}
