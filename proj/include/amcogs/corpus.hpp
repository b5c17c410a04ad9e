// Corpus ingestion, exact-match evaluation with per-type / per-class /
// per-depth breakdowns, and term-level error diffing.
#pragma once

#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "amcogs/decompose.hpp"
#include "amcogs/errors.hpp"
#include "amcogs/lf.hpp"
#include "amcogs/strings.hpp"

namespace amcogs {

struct CorpusItem {
  std::vector<std::string> tokens;
  std::string sentence;  // raw first column
  std::string goldLf;
  std::string genType;   // third column; "in_distribution" on non-gen splits
};

inline std::vector<CorpusItem> loadCorpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open corpus file: " + path);
  std::vector<CorpusItem> items;
  std::string line;
  long lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    std::vector<std::string> cols = splitChar(line, '\t');
    if (cols.size() != 3)
      throw FormatError("line " + std::to_string(lineNo) + ": expected 3 tab-separated columns, got " +
                        std::to_string(cols.size()));
    CorpusItem item;
    item.sentence = cols[0];
    item.tokens = splitWhitespace(cols[0]);
    item.goldLf = cols[1];
    item.genType = cols[2];
    items.push_back(std::move(item));
  }
  return items;
}

inline void writeCorpusTsv(const std::string& path, const std::vector<CorpusItem>& items) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write corpus file: " + path);
  for (const CorpusItem& it : items)
    out << it.sentence << "\t" << it.goldLf << "\t" << it.genType << "\n";
}

// String exact match. Default mode collapses whitespace runs and trims;
// strict mode compares the raw bytes. No credit for logically equivalent
// reorderings in either mode.
inline bool exactMatch(const std::string& gold, const std::string& pred,
                       bool strict = false) {
  if (strict) return gold == pred;
  return normalizeWhitespace(gold) == normalizeWhitespace(pred);
}

// The three generalization classes. Lex covers the sixteen remaining types.
inline const std::map<std::string, std::string>& genClassTable() {
  static const std::map<std::string, std::string> kTable = {
      {"obj_pp_to_subj_pp", "Struct"},
      {"cp_recursion", "Struct"},
      {"pp_recursion", "Struct"},
      {"prim_to_obj_proper", "Prop"},
      {"subj_to_obj_proper", "Prop"},
      {"subj_to_obj_common", "Lex"},
      {"obj_to_subj_common", "Lex"},
      {"obj_to_subj_proper", "Lex"},
      {"prim_to_subj_common", "Lex"},
      {"prim_to_subj_proper", "Lex"},
      {"prim_to_obj_common", "Lex"},
      {"prim_to_inf_arg", "Lex"},
      {"active_to_passive", "Lex"},
      {"passive_to_active", "Lex"},
      {"obj_omitted_transitive_to_transitive", "Lex"},
      {"unacc_to_transitive", "Lex"},
      {"do_dative_to_pp_dative", "Lex"},
      {"pp_dative_to_do_dative", "Lex"},
      {"agent_np_to_unacc_subj", "Lex"},
      {"theme_np_to_obj_omitted_transitive_subj", "Lex"},
      {"theme_np_to_unacc_subj", "Lex"},
  };
  return kTable;
}

// PP recursion depth of a formula: the longest chain of nmod terms linked
// through their arguments. 0 when the formula has no PPs.
inline int ppDepth(const LogicalForm& lf) {
  struct Nmod {
    int from, to;
  };
  std::vector<Nmod> chain;
  for (const Term& t : lf.conjuncts) {
    if (t.predicateParts.size() == 3 && t.predicateParts[1] == "nmod" && t.binary()) {
      if (t.args[0].kind != ArgKind::Variable || t.args[1].kind != ArgKind::Variable)
        continue;
      chain.push_back({t.args[0].index, t.args[1].index});
    }
  }
  std::map<int, int> memo;  // start variable -> chain length
  std::function<int(int)> depthFrom = [&](int v) -> int {
    auto it = memo.find(v);
    if (it != memo.end()) return it->second;
    memo[v] = 0;  // cycle guard
    int best = 0;
    for (const Nmod& m : chain)
      if (m.from == v) best = std::max(best, 1 + depthFrom(m.to));
    memo[v] = best;
    return best;
  };
  int best = 0;
  for (const Nmod& m : chain) best = std::max(best, depthFrom(m.from));
  return best;
}

inline int ppDepthOfText(const std::string& lfText) {
  try {
    return ppDepth(parseLf(lfText));
  } catch (const Error&) {
    return 0;
  }
}

struct Bucket {
  long correct = 0;
  long total = 0;
  double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / total; }
};

struct EvalReport {
  Bucket overall;
  std::map<std::string, Bucket> perType;
  std::map<std::string, Bucket> perClass;  // Struct / Prop / Lex
  std::map<int, Bucket> perDepth;          // gold PP chain depth (>= 1)
};

inline EvalReport evaluateCorpus(const std::vector<CorpusItem>& gold,
                                 const std::vector<std::string>& pred,
                                 bool strict = false) {
  if (gold.size() != pred.size())
    throw LengthMismatch("gold has " + std::to_string(gold.size()) +
                         " items, predictions " + std::to_string(pred.size()));
  EvalReport r;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    bool hit = exactMatch(gold[i].goldLf, pred[i], strict);
    ++r.overall.total;
    r.overall.correct += hit;
    Bucket& type = r.perType[gold[i].genType];
    ++type.total;
    type.correct += hit;
    auto cls = genClassTable().find(gold[i].genType);
    if (cls != genClassTable().end()) {
      Bucket& c = r.perClass[cls->second];
      ++c.total;
      c.correct += hit;
    }
    int depth = ppDepthOfText(gold[i].goldLf);
    if (depth > 0) {
      Bucket& d = r.perDepth[depth];
      ++d.total;
      d.correct += hit;
    }
  }
  return r;
}

// ---- term-level diffing ----

struct DiffEntry {
  std::size_t index = 0;
  std::string gold, pred;
  std::vector<std::pair<std::string, std::string>> changed;  // same predicate, different args
  std::vector<std::string> goldOnly, predOnly;
  bool parsed = true;  // false: one side failed to parse, term lists empty
};

namespace detail {

inline std::vector<std::string> termStrings(const LogicalForm& lf) {
  std::vector<std::string> out;
  for (const Term& t : lf.iotaTerms) {
    std::vector<std::string> toks{"*"};
    termTokens(t, toks);
    out.push_back(join(toks, " "));
  }
  for (const Term& t : lf.conjuncts) {
    std::vector<std::string> toks;
    termTokens(t, toks);
    out.push_back(join(toks, " "));
  }
  return out;
}

inline std::string predicateOfTermString(const std::string& s) {
  std::size_t p = s.find(" (");
  return p == std::string::npos ? s : s.substr(0, p);
}

}  // namespace detail

inline std::vector<DiffEntry> diffReport(const std::vector<CorpusItem>& gold,
                                         const std::vector<std::string>& pred,
                                         std::size_t maxEntries, bool strict = false) {
  if (gold.size() != pred.size()) throw LengthMismatch("gold/pred size mismatch");
  std::vector<DiffEntry> out;
  for (std::size_t i = 0; i < gold.size() && out.size() < maxEntries; ++i) {
    if (exactMatch(gold[i].goldLf, pred[i], strict)) continue;
    DiffEntry e;
    e.index = i;
    e.gold = gold[i].goldLf;
    e.pred = pred[i];
    std::optional<LogicalForm> g, p;
    try {
      g = parseLf(gold[i].goldLf);
      p = parseLf(pred[i]);
    } catch (const Error&) {
      e.parsed = false;
      out.push_back(std::move(e));
      continue;
    }
    std::vector<std::string> gs = detail::termStrings(*g);
    std::vector<std::string> ps = detail::termStrings(*p);
    // Drop exact common terms (multiset intersection).
    std::multiset<std::string> pset(ps.begin(), ps.end());
    std::vector<std::string> gRest;
    for (const std::string& t : gs) {
      auto it = pset.find(t);
      if (it != pset.end())
        pset.erase(it);
      else
        gRest.push_back(t);
    }
    std::vector<std::string> pRest(pset.begin(), pset.end());
    // Pair leftovers that share a predicate: those are argument changes.
    for (const std::string& t : gRest) {
      std::string predName = detail::predicateOfTermString(t);
      bool paired = false;
      for (auto it = pRest.begin(); it != pRest.end(); ++it) {
        if (detail::predicateOfTermString(*it) == predName) {
          e.changed.push_back({t, *it});
          pRest.erase(it);
          paired = true;
          break;
        }
      }
      if (!paired) e.goldOnly.push_back(t);
    }
    e.predOnly = pRest;
    out.push_back(std::move(e));
  }
  return out;
}

inline std::string formatDiff(const DiffEntry& e) {
  std::ostringstream os;
  os << "#" << e.index << "\n  gold: " << e.gold << "\n  pred: " << e.pred << "\n";
  if (!e.parsed) {
    os << "  (one side does not parse; no term diff)\n";
    return os.str();
  }
  for (const auto& [g, p] : e.changed) os << "  changed: " << g << "  ->  " << p << "\n";
  for (const std::string& t : e.goldOnly) os << "  missing: " << t << "\n";
  for (const std::string& t : e.predOnly) os << "  extra:   " << t << "\n";
  return os.str();
}

// Converts and decomposes every non-primitive item, pairing tokens with gold
// trees; the training-side pipeline. Primitives (lambda or bare forms) have
// no sentence context and are skipped.
inline std::vector<std::pair<std::vector<std::string>, Decomposition>> decomposeCorpus(
    const std::vector<CorpusItem>& items, long* skippedPrimitives = nullptr) {
  std::vector<std::pair<std::vector<std::string>, Decomposition>> out;
  long skipped = 0;
  for (const CorpusItem& it : items) {
    LogicalForm lf = parseLf(it.goldLf);
    if (lf.isPrimitive()) {
      ++skipped;
      continue;
    }
    AlignedGraph g = lfToGraph(lf, it.tokens);
    out.push_back({it.tokens, decompose(g)});
  }
  if (skippedPrimitives) *skippedPrimitives = skipped;
  return out;
}

}  // namespace amcogs
