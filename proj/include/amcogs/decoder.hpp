// Exact projective search for the best well-typed AM dependency tree.
//
// CKY-style dynamic program over items (span, head token, remaining type of
// the head's value). Tokens choose one of their candidate supertags or ⊥;
// ⊥ tokens are absorbed into neighboring spans and stay isolated in the
// returned tree. Combination steps mirror the algebra exactly: Apply closes a
// source whose request equals the dependent's remaining type, Modify accepts
// a dependent whose type is a single empty-request source.
#pragma once

#include <array>
#include <memory>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "amcogs/algebra.hpp"
#include "amcogs/convert.hpp"
#include "amcogs/decompose.hpp"
#include "amcogs/scorer.hpp"

namespace amcogs {

struct TagCandidate {
  int shapeId = -1;   // -1 = ⊥
  double score = 0;   // supertag score (plus label score for non-⊥)
  std::string label;  // lexical label used to instantiate the shape
};

struct DecoderInput {
  std::vector<std::vector<TagCandidate>> candidates;  // per token
  const std::vector<AsGraph>* shapes = nullptr;       // indexed by shapeId
  // Net score contribution of adopting this edge (callers typically pass the
  // margin over the NO-EDGE class).
  std::function<double(int head, int dep, const Operation&)> edgeScore;
};

namespace detail {

struct ChartItem {
  int head = -1;
  int state = -1;  // interned AmType
  double score = -std::numeric_limits<double>::infinity();
  // Backpointer
  enum Kind { Leaf, Attach, Absorb } kind = Leaf;
  int split = -1;
  int leftIdx = -1, rightIdx = -1;  // item indices in the child cells
  Operation op;
  int candIdx = -1;   // Leaf: candidate index
  bool headLeft = true;
};

struct TypeInterner {
  std::vector<AmType> types;
  std::map<AmType, int> ids;
  int intern(const AmType& t) {
    auto it = ids.find(t);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(types.size());
    types.push_back(t);
    ids[t] = id;
    return id;
  }
};

}  // namespace detail

namespace detail {

// Per-pair transitions between interned type states, precomputed over the
// closure of the candidate types under source removal.
struct TransitionTable {
  TypeInterner interner;
  // (headState, depState) -> list of (operation, resulting head state)
  std::map<std::pair<int, int>, std::vector<std::pair<Operation, int>>> table;

  void build(const std::vector<AmType>& seed) {
    std::vector<AmType> todo = seed;
    for (const AmType& t : todo) interner.intern(t);
    for (std::size_t i = 0; i < interner.types.size(); ++i) {
      AmType t = interner.types[i];
      for (const auto& [s, req] : t.entries()) {
        (void)req;
        interner.intern(t.without(s));  // grows the worklist in place
      }
    }
    for (std::size_t h = 0; h < interner.types.size(); ++h)
      for (std::size_t d = 0; d < interner.types.size(); ++d) {
        const AmType headType = interner.types[h];
        const AmType depType = interner.types[d];
        std::vector<std::pair<Operation, int>> ops;
        if (depType.size() == 1 && depType.entries()[0].second.isEmpty())
          ops.push_back({Operation::modify(depType.entries()[0].first),
                         static_cast<int>(h)});
        for (const auto& [s, request] : headType.entries())
          if (request == depType)
            ops.push_back({Operation::apply(s), interner.intern(headType.without(s))});
        if (!ops.empty())
          table[{static_cast<int>(h), static_cast<int>(d)}] = std::move(ops);
      }
  }
};

}  // namespace detail

inline AmDepTree decodeChart(const DecoderInput& in) {
  const int n = static_cast<int>(in.candidates.size());
  if (n == 0) throw NoParse("empty sentence");
  if (!in.shapes) throw Error("decoder input lacks a shape inventory");

  detail::TransitionTable trans;
  {
    std::vector<AmType> seed;
    for (const auto& cands : in.candidates)
      for (const TagCandidate& c : cands)
        if (c.shapeId >= 0) seed.push_back(typeOf(in.shapes->at(c.shapeId)));
    trans.build(seed);
  }
  detail::TypeInterner& interner = trans.interner;

  // ⊥ scores and prefix sums for empty-span absorption.
  const double ninf = -std::numeric_limits<double>::infinity();
  std::vector<double> bottomScore(n, ninf);
  for (int t = 0; t < n; ++t)
    for (const TagCandidate& c : in.candidates[t])
      if (c.shapeId < 0) bottomScore[t] = std::max(bottomScore[t], c.score);
  std::vector<double> bottomPrefix(n + 1, 0.0);
  for (int t = 0; t < n; ++t)
    bottomPrefix[t + 1] =
        bottomPrefix[t] + (bottomScore[t] == ninf ? -1e30 : bottomScore[t]);
  auto emptySpan = [&](int i, int j) {  // [i, j)
    for (int t = i; t < j; ++t)
      if (bottomScore[t] == ninf) return ninf;
    return bottomPrefix[j] - bottomPrefix[i];
  };

  // cells[i][j] = vector of items, with (head, state) -> index for dedup.
  auto cellOf = [&](int i, int j) { return i * (n + 1) + j; };
  std::vector<std::vector<detail::ChartItem>> cells(
      static_cast<std::size_t>((n + 1) * (n + 1)));
  std::vector<std::map<std::pair<int, int>, int>> index(cells.size());

  auto update = [&](int i, int j, detail::ChartItem item) {
    if (item.score == ninf) return;
    auto& cell = cells[cellOf(i, j)];
    auto& idx = index[cellOf(i, j)];
    auto key = std::make_pair(item.head, item.state);
    auto it = idx.find(key);
    if (it == idx.end()) {
      idx[key] = static_cast<int>(cell.size());
      cell.push_back(item);
    } else if (item.score > cell[it->second].score) {
      cell[it->second] = item;
    }
  };

  for (int t = 0; t < n; ++t) {
    for (std::size_t ci = 0; ci < in.candidates[t].size(); ++ci) {
      const TagCandidate& c = in.candidates[t][ci];
      if (c.shapeId < 0) continue;
      detail::ChartItem item;
      item.head = t;
      item.state = interner.intern(typeOf(in.shapes->at(c.shapeId)));
      item.score = c.score;
      item.kind = detail::ChartItem::Leaf;
      item.candIdx = static_cast<int>(ci);
      update(t, t + 1, item);
    }
  }

  for (int width = 2; width <= n; ++width) {
    for (int i = 0; i + width <= n; ++i) {
      int j = i + width;
      for (int k = i + 1; k < j; ++k) {
        const auto& left = cells[cellOf(i, k)];
        const auto& right = cells[cellOf(k, j)];
        // Absorb ⊥ stretches on either side.
        double leftEmpty = emptySpan(i, k);
        if (leftEmpty != ninf)
          for (std::size_t ri = 0; ri < right.size(); ++ri) {
            detail::ChartItem item = right[ri];
            item.score += leftEmpty;
            item.kind = detail::ChartItem::Absorb;
            item.split = k;
            item.headLeft = false;
            item.rightIdx = static_cast<int>(ri);
            item.leftIdx = -1;
            update(i, j, item);
          }
        double rightEmpty = emptySpan(k, j);
        if (rightEmpty != ninf)
          for (std::size_t li = 0; li < left.size(); ++li) {
            detail::ChartItem item = left[li];
            item.score += rightEmpty;
            item.kind = detail::ChartItem::Absorb;
            item.split = k;
            item.headLeft = true;
            item.leftIdx = static_cast<int>(li);
            item.rightIdx = -1;
            update(i, j, item);
          }
        // Attach a dependent to a head, in both directions; legal operations
        // come from the precomputed transition table.
        auto attach = [&](const detail::ChartItem& headItem, int headIdx,
                          const detail::ChartItem& depItem, int depIdx, bool headLeft) {
          auto it = trans.table.find({headItem.state, depItem.state});
          if (it == trans.table.end()) return;
          for (const auto& [op, newState] : it->second) {
            detail::ChartItem item;
            item.head = headItem.head;
            item.state = newState;
            item.score = headItem.score + depItem.score +
                         in.edgeScore(headItem.head, depItem.head, op);
            item.kind = detail::ChartItem::Attach;
            item.split = k;
            item.headLeft = headLeft;
            item.leftIdx = headLeft ? headIdx : depIdx;
            item.rightIdx = headLeft ? depIdx : headIdx;
            item.op = op;
            update(i, j, item);
          }
        };
        for (std::size_t li = 0; li < left.size(); ++li)
          for (std::size_t ri = 0; ri < right.size(); ++ri) {
            attach(left[li], static_cast<int>(li), right[ri], static_cast<int>(ri), true);
            attach(right[ri], static_cast<int>(ri), left[li], static_cast<int>(li), false);
          }
      }
    }
  }

  // Goal: full span, empty type. Ties prefer the lower head index.
  const auto& goalCell = cells[cellOf(0, n)];
  int goal = -1;
  for (std::size_t gi = 0; gi < goalCell.size(); ++gi) {
    if (!interner.types[goalCell[gi].state].isEmpty()) continue;
    if (goal < 0 || goalCell[gi].score > goalCell[goal].score ||
        (goalCell[gi].score == goalCell[goal].score &&
         goalCell[gi].head < goalCell[goal].head))
      goal = static_cast<int>(gi);
  }
  if (goal < 0) throw NoParse("no well-typed projective tree over the candidates");

  AmDepTree tree;
  for (int t = 0; t < n; ++t) tree.constants.push_back({t, std::nullopt});

  std::function<void(int, int, int)> extract = [&](int i, int j, int itemIdx) {
    const detail::ChartItem& item = cells[cellOf(i, j)][itemIdx];
    switch (item.kind) {
      case detail::ChartItem::Leaf: {
        const TagCandidate& c = in.candidates[item.head][item.candIdx];
        AsGraph g = in.shapes->at(c.shapeId);
        GraphNode* root = g.graph.find(g.graph.root);
        root->label = c.label;
        root->align = item.head;
        tree.constants[item.head].graph = std::move(g);
        break;
      }
      case detail::ChartItem::Absorb:
        if (item.headLeft)
          extract(i, item.split, item.leftIdx);
        else
          extract(item.split, j, item.rightIdx);
        break;
      case detail::ChartItem::Attach: {
        extract(i, item.split, item.leftIdx);
        extract(item.split, j, item.rightIdx);
        const detail::ChartItem& depItem =
            item.headLeft ? cells[cellOf(item.split, j)][item.rightIdx]
                          : cells[cellOf(i, item.split)][item.leftIdx];
        tree.edges.push_back({item.head, depItem.head, item.op});
        break;
      }
    }
  };
  extract(0, n, goal);
  return tree;
}

// ---- model-driven decoding ----

// Per-token candidate lists: the k best-scoring shapes plus ⊥. Non-⊥
// candidates carry the best lexical label and its score.
inline DecoderInput buildDecoderInput(const LinearModel& model, const Lexicon& lexicon,
                                      const std::vector<std::string>& tokens, int k) {
  if (k < 1) throw ConfigError("k must be >= 1");
  DecoderInput in;
  in.shapes = &lexicon.shapeGraphs;
  const int n = static_cast<int>(tokens.size());
  in.candidates.resize(n);
  for (int t = 0; t < n; ++t) {
    std::vector<std::pair<double, int>> scored;
    for (std::size_t s = 0; s < lexicon.shapes.size(); ++s)
      scored.push_back({model.scoreSupertag(tokens, t, static_cast<int>(s)),
                        static_cast<int>(s)});
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    auto [label, labelScore] = model.bestLabel(tokens, t);
    for (int r = 0; r < std::min<int>(k, static_cast<int>(scored.size())); ++r)
      in.candidates[t].push_back(
          {scored[r].second, scored[r].first + labelScore, label});
    in.candidates[t].push_back({-1, model.scoreSupertag(tokens, t, -1), ""});
  }
  // Edge margins over NO-EDGE are precomputed once per ordered pair; the
  // chart probes them far too often to re-extract features on every call.
  auto margins = std::make_shared<std::vector<double>>(
      static_cast<std::size_t>(n) * n * 7, 0.0);
  for (int h = 0; h < n; ++h)
    for (int d = 0; d < n; ++d) {
      if (h == d) continue;
      std::array<double, 7> all = model.scoreEdgeAll(tokens, h, d);
      for (std::size_t c = 1; c < all.size(); ++c)
        (*margins)[(static_cast<std::size_t>(h) * n + d) * 7 + c] = all[c] - all[0];
    }
  in.edgeScore = [margins, n](int head, int dep, const Operation& op) {
    return (*margins)[(static_cast<std::size_t>(head) * n + dep) * 7 +
                      edgeClassIndex(op)];
  };
  return in;
}

inline AmDepTree decode(const LinearModel& model, const Lexicon& lexicon,
                        const std::vector<std::string>& tokens, int k) {
  return decodeChart(buildDecoderInput(model, lexicon, tokens, k));
}

inline LogicalForm parseToLf(const LinearModel& model, const Lexicon& lexicon,
                             const std::vector<std::string>& tokens, int k = 3) {
  if (tokens.empty()) throw NoParse("empty sentence");
  AmDepTree tree = decode(model, lexicon, tokens, k);
  SemGraph value = evaluate(tree);
  return graphToLf({std::move(value), static_cast<int>(tokens.size()), true}, tokens);
}

}  // namespace amcogs
