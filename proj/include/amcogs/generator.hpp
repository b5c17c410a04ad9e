// Seeded synthetic corpus in the COGS file format, at desk scale.
//
// Sentences cover transitive / ditransitive / control / CP verbs, passives,
// definite and indefinite NPs, proper names, and right-branching PP chains
// that always attach to the noun immediately to the left. Training and dev
// splits stay at PP depth <= maxTrainPpDepth; the generalization split uses
// the deeper configured depths only. Gold formulas are built alongside the
// tokens, so every item converts and round-trips by construction.
#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "amcogs/convert.hpp"
#include "amcogs/corpus.hpp"
#include "amcogs/errors.hpp"
#include "amcogs/lf.hpp"

namespace amcogs {

struct MiniCorpusConfig {
  int trainSize = 800;
  int devSize = 200;
  int genPerDepth = 100;
  int maxTrainPpDepth = 2;
  int genDepthMin = 3;
  int genDepthMax = 6;
  std::uint64_t seed = 42;
};

struct MiniCorpus {
  std::vector<CorpusItem> train, dev, gen;
};

namespace detail {

struct VerbEntry {
  std::string surface, lemma;
};

struct MiniVocab {
  std::vector<std::string> nouns = {"ball", "bowl",   "box", "table", "cookie",
                                    "bottle", "tray", "bed", "boy",   "girl",
                                    "baby", "dog",    "cat", "hedgehog"};
  std::vector<std::string> names = {"Ava", "Ben", "Claire", "Emma",
                                    "Liam", "Mia", "Noah", "Olivia"};
  std::vector<VerbEntry> trans = {{"saw", "see"},
                                  {"touched", "touch"},
                                  {"helped", "help"},
                                  {"found", "find"},
                                  {"liked", "like"}};
  std::vector<VerbEntry> intrans = {{"slept", "sleep"}, {"smiled", "smile"}, {"danced", "dance"}};
  std::vector<VerbEntry> control = {{"wanted", "want"}, {"needed", "need"}, {"preferred", "prefer"}};
  std::vector<VerbEntry> infinitives = {{"go", "go"}, {"run", "run"}, {"jump", "jump"}};
  std::vector<VerbEntry> cp = {{"said", "say"}, {"declared", "declare"}, {"noticed", "notice"}};
  std::vector<VerbEntry> ditrans = {{"gave", "give"}, {"lended", "lend"}, {"sold", "sell"}};
  std::vector<VerbEntry> participles = {{"helped", "help"}, {"touched", "touch"}, {"found", "find"}};
  std::vector<std::string> preps = {"in", "on", "beside"};
};

class SentenceBuilder {
 public:
  // Argument handle for a generated NP.
  struct Np {
    Argument arg;
    std::string lemma;  // noun lemma; empty for names
  };

  int verbToken(const std::string& surface) {
    int idx = add(surface);
    return idx;
  }

  // kind: 0 = indefinite, 1 = definite, 2 = proper name
  Np addNp(int kind, const std::string& word) {
    if (kind == 2) {
      int idx = add(word);
      return {Argument::properName(word, idx), ""};
    }
    add(kind == 1 ? (tokens_.empty() ? "The" : "the") : (tokens_.empty() ? "A" : "a"));
    int idx = add(word);
    Term noun({word}, {Argument::variable(idx)});
    if (kind == 1)
      iotas_.push_back(noun);
    else
      terms_.push_back(noun);
    return {Argument::variable(idx), word};
  }

  // Right-branching chain: each PP modifies the noun immediately to its left.
  void addPpChain(Np head, int depth, std::mt19937_64& rng, const MiniVocab& v,
                  const std::string* forcePrep = nullptr) {
    Np prev = head;
    for (int d = 0; d < depth; ++d) {
      const std::string& prep = forcePrep ? *forcePrep : v.preps[rng() % v.preps.size()];
      add(prep);
      int defKind = rng() % 4 == 0 ? 1 : 0;
      Np next = addNp(defKind, v.nouns[rng() % v.nouns.size()]);
      terms_.push_back(Term({prev.lemma, "nmod", prep}, {prev.arg, next.arg}));
      prev = next;
    }
  }

  void addTerm(Term t) { terms_.push_back(std::move(t)); }
  int add(const std::string& token) {
    tokens_.push_back(token);
    return static_cast<int>(tokens_.size()) - 1;
  }

  CorpusItem finish(const std::string& genType) {
    add(".");
    LogicalForm lf;
    lf.iotaTerms = iotas_;
    lf.conjuncts = terms_;
    lf = canonicalOrder(alignLf(lf, tokens_));
    CorpusItem item;
    item.tokens = tokens_;
    item.sentence = join(tokens_, " ");
    item.goldLf = printLf(lf, LfFormat::Tokenized);
    item.genType = genType;
    return item;
  }

 private:
  std::vector<std::string> tokens_;
  std::vector<Term> iotas_;
  std::vector<Term> terms_;
};

class MiniGenerator {
 public:
  explicit MiniGenerator(const MiniCorpusConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
    if (cfg.trainSize < 1 || cfg.devSize < 0 || cfg.genPerDepth < 0)
      throw ConfigError("mini-corpus sizes must be positive");
    if (cfg.maxTrainPpDepth < 1 || cfg.genDepthMin > cfg.genDepthMax)
      throw ConfigError("bad PP depth configuration");
  }

  MiniCorpus generate() {
    MiniCorpus out;
    // Deterministic coverage sweep first, so every vocabulary item is seen in
    // training no matter how small trainSize is.
    coverageSweep(out.train);
    while (static_cast<int>(out.train.size()) < cfg_.trainSize)
      out.train.push_back(randomSentence("in_distribution", maxDepth()));
    out.train.resize(cfg_.trainSize);
    for (int i = 0; i < cfg_.devSize; ++i)
      out.dev.push_back(randomSentence("in_distribution", maxDepth()));
    for (int d = cfg_.genDepthMin; d <= cfg_.genDepthMax; ++d)
      for (int i = 0; i < cfg_.genPerDepth; ++i)
        out.gen.push_back(ppSentence(d, "pp_recursion"));
    return out;
  }

 private:
  int maxDepth() const { return cfg_.maxTrainPpDepth; }
  int pick(std::size_t n) { return static_cast<int>(rng_() % n); }

  // A sentence never repeats a proper name; draws rotate past used ones.
  std::string freshName(int hint = -1) {
    std::size_t i = hint >= 0 ? static_cast<std::size_t>(hint) % vocab_.names.size()
                              : static_cast<std::size_t>(pick(vocab_.names.size()));
    for (std::size_t k = 0; k < vocab_.names.size(); ++k) {
      const std::string& n = vocab_.names[(i + k) % vocab_.names.size()];
      if (!usedNames_.count(n)) {
        usedNames_.insert(n);
        return n;
      }
    }
    throw ConfigError("name pool exhausted");
  }

  SentenceBuilder::Np subject(SentenceBuilder& b) {
    int kind = pick(3);
    if (kind == 2) return b.addNp(2, freshName());
    return b.addNp(kind, vocab_.nouns[pick(vocab_.nouns.size())]);
  }

  CorpusItem ppSentence(int depth, const std::string& type,
                        const std::string* forcePrep = nullptr) {
    usedNames_.clear();
    SentenceBuilder b;
    SentenceBuilder::Np subj = subject(b);
    const detail::VerbEntry& v = vocab_.trans[pick(vocab_.trans.size())];
    int verb = b.verbToken(v.surface);
    SentenceBuilder::Np obj = b.addNp(pick(2), vocab_.nouns[pick(vocab_.nouns.size())]);
    b.addTerm(Term({v.lemma, "agent"}, {Argument::variable(verb), subj.arg}));
    b.addTerm(Term({v.lemma, "theme"}, {Argument::variable(verb), obj.arg}));
    b.addPpChain(obj, depth, rng_, vocab_, forcePrep);
    return b.finish(type);
  }

  CorpusItem intransSentence(const std::string& type, int verbIdx = -1) {
    usedNames_.clear();
    SentenceBuilder b;
    SentenceBuilder::Np subj = subject(b);
    const detail::VerbEntry& v =
        vocab_.intrans[verbIdx >= 0 ? verbIdx : pick(vocab_.intrans.size())];
    int verb = b.verbToken(v.surface);
    b.addTerm(Term({v.lemma, "agent"}, {Argument::variable(verb), subj.arg}));
    return b.finish(type);
  }

  CorpusItem controlSentence(const std::string& type, int verbIdx = -1, int infIdx = -1) {
    usedNames_.clear();
    SentenceBuilder b;
    SentenceBuilder::Np subj = subject(b);
    const detail::VerbEntry& v =
        vocab_.control[verbIdx >= 0 ? verbIdx : pick(vocab_.control.size())];
    const detail::VerbEntry& inf =
        vocab_.infinitives[infIdx >= 0 ? infIdx : pick(vocab_.infinitives.size())];
    int verb = b.verbToken(v.surface);
    b.add("to");
    int infTok = b.verbToken(inf.surface);
    b.addTerm(Term({v.lemma, "agent"}, {Argument::variable(verb), subj.arg}));
    b.addTerm(Term({v.lemma, "xcomp"}, {Argument::variable(verb), Argument::variable(infTok)}));
    b.addTerm(Term({inf.lemma, "agent"}, {Argument::variable(infTok), subj.arg}));
    return b.finish(type);
  }

  CorpusItem cpSentence(const std::string& type, int levels, int verbIdx = -1) {
    usedNames_.clear();
    SentenceBuilder b;
    SentenceBuilder::Np subj = subject(b);
    const detail::VerbEntry& v = vocab_.cp[verbIdx >= 0 ? verbIdx : pick(vocab_.cp.size())];
    int verb = b.verbToken(v.surface);
    int outer = verb;
    std::string outerLemma = v.lemma;
    for (int l = 0; l < levels; ++l) {
      b.add("that");
      SentenceBuilder::Np innerSubj = subject(b);
      if (l + 1 < levels) {
        const detail::VerbEntry& iv = vocab_.cp[pick(vocab_.cp.size())];
        int innerVerb = b.verbToken(iv.surface);
        b.addTerm(Term({outerLemma, "ccomp"},
                       {Argument::variable(outer), Argument::variable(innerVerb)}));
        b.addTerm(Term({iv.lemma, "agent"}, {Argument::variable(innerVerb), innerSubj.arg}));
        outer = innerVerb;
        outerLemma = iv.lemma;
      } else {
        const detail::VerbEntry& iv = vocab_.intrans[pick(vocab_.intrans.size())];
        int innerVerb = b.verbToken(iv.surface);
        b.addTerm(Term({outerLemma, "ccomp"},
                       {Argument::variable(outer), Argument::variable(innerVerb)}));
        b.addTerm(Term({iv.lemma, "agent"}, {Argument::variable(innerVerb), innerSubj.arg}));
      }
    }
    b.addTerm(Term({v.lemma, "agent"}, {Argument::variable(verb), subj.arg}));
    return b.finish(type);
  }

  CorpusItem ditransSentence(const std::string& type, int verbIdx = -1) {
    usedNames_.clear();
    SentenceBuilder b;
    SentenceBuilder::Np subj = subject(b);
    const detail::VerbEntry& v =
        vocab_.ditrans[verbIdx >= 0 ? verbIdx : pick(vocab_.ditrans.size())];
    int verb = b.verbToken(v.surface);
    SentenceBuilder::Np rec = b.addNp(2, freshName());
    SentenceBuilder::Np theme = b.addNp(pick(2), vocab_.nouns[pick(vocab_.nouns.size())]);
    b.addTerm(Term({v.lemma, "agent"}, {Argument::variable(verb), subj.arg}));
    b.addTerm(Term({v.lemma, "recipient"}, {Argument::variable(verb), rec.arg}));
    b.addTerm(Term({v.lemma, "theme"}, {Argument::variable(verb), theme.arg}));
    return b.finish(type);
  }

  CorpusItem passiveSentence(const std::string& type, int verbIdx = -1) {
    usedNames_.clear();
    SentenceBuilder b;
    SentenceBuilder::Np subj = subject(b);
    const detail::VerbEntry& v =
        vocab_.participles[verbIdx >= 0 ? verbIdx : pick(vocab_.participles.size())];
    b.add("was");
    int verb = b.verbToken(v.surface);
    b.addTerm(Term({v.lemma, "theme"}, {Argument::variable(verb), subj.arg}));
    if (rng_() % 2 == 0) {
      b.add("by");
      SentenceBuilder::Np agent = b.addNp(2, freshName());
      b.addTerm(Term({v.lemma, "agent"}, {Argument::variable(verb), agent.arg}));
    }
    return b.finish(type);
  }

  CorpusItem randomSentence(const std::string& type, int maxPpDepth) {
    switch (pick(8)) {
      case 0: return intransSentence(type);
      case 1: return controlSentence(type);
      case 2: return cpSentence(type, 1 + pick(2));
      case 3: return ditransSentence(type);
      case 4: return passiveSentence(type);
      default: return ppSentence(pick(maxPpDepth + 1), type);
    }
  }

  void coverageSweep(std::vector<CorpusItem>& out) {
    // One sentence per verb of each class, one per noun, name, preposition
    // and PP depth up to the training maximum.
    for (std::size_t i = 0; i < vocab_.trans.size(); ++i) {
      usedNames_.clear();
      SentenceBuilder b;
      SentenceBuilder::Np subj = b.addNp(2, vocab_.names[i % vocab_.names.size()]);
      int verb = b.verbToken(vocab_.trans[i].surface);
      SentenceBuilder::Np obj = b.addNp(i % 2, vocab_.nouns[i % vocab_.nouns.size()]);
      b.addTerm(Term({vocab_.trans[i].lemma, "agent"}, {Argument::variable(verb), subj.arg}));
      b.addTerm(Term({vocab_.trans[i].lemma, "theme"}, {Argument::variable(verb), obj.arg}));
      out.push_back(b.finish("in_distribution"));
    }
    for (std::size_t i = 0; i < vocab_.intrans.size(); ++i)
      out.push_back(intransSentence("in_distribution", static_cast<int>(i)));
    for (std::size_t i = 0; i < vocab_.control.size(); ++i)
      out.push_back(controlSentence("in_distribution", static_cast<int>(i),
                                    static_cast<int>(i % vocab_.infinitives.size())));
    for (std::size_t i = 0; i < vocab_.cp.size(); ++i)
      out.push_back(cpSentence("in_distribution", 1, static_cast<int>(i)));
    for (std::size_t i = 0; i < vocab_.ditrans.size(); ++i)
      out.push_back(ditransSentence("in_distribution", static_cast<int>(i)));
    for (std::size_t i = 0; i < vocab_.participles.size(); ++i)
      out.push_back(passiveSentence("in_distribution", static_cast<int>(i)));
    for (std::size_t i = 0; i < vocab_.nouns.size(); ++i) {
      usedNames_.clear();
      SentenceBuilder b;
      SentenceBuilder::Np subj = b.addNp(1, vocab_.nouns[i]);
      int verb = b.verbToken(vocab_.trans[i % vocab_.trans.size()].surface);
      SentenceBuilder::Np obj =
          b.addNp(0, vocab_.nouns[(i + 1) % vocab_.nouns.size()]);
      b.addTerm(Term({vocab_.trans[i % vocab_.trans.size()].lemma, "agent"},
                     {Argument::variable(verb), subj.arg}));
      b.addTerm(Term({vocab_.trans[i % vocab_.trans.size()].lemma, "theme"},
                     {Argument::variable(verb), obj.arg}));
      out.push_back(b.finish("in_distribution"));
    }
    for (std::size_t i = 0; i < vocab_.names.size(); ++i) {
      usedNames_.clear();
      SentenceBuilder b;
      SentenceBuilder::Np subj = b.addNp(2, vocab_.names[i]);
      const detail::VerbEntry& v = vocab_.intrans[i % vocab_.intrans.size()];
      int verb = b.verbToken(v.surface);
      b.addTerm(Term({v.lemma, "agent"}, {Argument::variable(verb), subj.arg}));
      out.push_back(b.finish("in_distribution"));
    }
    for (int depth = 1; depth <= cfg_.maxTrainPpDepth; ++depth)
      for (std::size_t p = 0; p < vocab_.preps.size(); ++p)
        out.push_back(ppSentence(depth, "in_distribution", &vocab_.preps[p]));
  }

  MiniCorpusConfig cfg_;
  MiniVocab vocab_;
  std::mt19937_64 rng_;
  std::set<std::string> usedNames_;
};

}  // namespace detail

inline MiniCorpus genMiniCorpus(const MiniCorpusConfig& cfg) {
  return detail::MiniGenerator(cfg).generate();
}

}  // namespace amcogs
