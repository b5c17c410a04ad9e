#include <cmath>
#include <random>

#include "amcogs/corpus.hpp"
#include "amcogs/generator.hpp"
#include "amcogs/model_io.hpp"
#include "amcogs/scorer.hpp"
#include "catch2/catch_amalgamated.hpp"

using namespace amcogs;

namespace {

// Shared small training setup (built once; training is the slow part).
struct TrainedFixture {
  std::vector<std::pair<std::vector<std::string>, Decomposition>> corpus;
  LinearModel model;

  TrainedFixture() {
    MiniCorpusConfig cfg;
    cfg.trainSize = 150;
    cfg.devSize = 0;
    cfg.genPerDepth = 0;
    cfg.seed = 7;
    MiniCorpus mini = genMiniCorpus(cfg);
    corpus = decomposeCorpus(mini.train);
    ScorerConfig sc;
    sc.epochs = 8;
    sc.seed = 3;
    model = LinearModel::train(corpus, sc);
  }
};

const TrainedFixture& trained() {
  static TrainedFixture f;
  return f;
}

}  // namespace

TEST_CASE("distance encoding matches the sine-cosine formula") {
  DistEncoding zero = distEncode(5, 5);
  for (int k = 0; k < DistEncoding::kDims; k += 2) {
    CHECK(zero.values[k] == 0.0);
    CHECK(zero.values[k + 1] == 1.0);
  }
  DistEncoding one = distEncode(3, 2);  // dist = 1
  CHECK(std::abs(one.values[0] - 0.8414709848) < 1e-9);
  for (int d : {-9, -2, 1, 7}) {
    DistEncoding enc = distEncode(d + 4, 4);
    for (int k = 0; 2 * k < DistEncoding::kDims; ++k) {
      double denom = std::pow(10000.0, (2.0 * k) / DistEncoding::kDims);
      CHECK(std::abs(enc.values[2 * k] - std::sin(d / denom)) < 1e-12);
      CHECK(std::abs(enc.values[2 * k + 1] - std::cos(d / denom)) < 1e-12);
    }
  }
}

TEST_CASE("swapping the positions flips every sine and keeps every cosine") {
  DistEncoding a = distEncode(9, 3);
  DistEncoding b = distEncode(3, 9);
  for (int k = 0; k < DistEncoding::kDims; k += 2) {
    CHECK(a.values[k] == -b.values[k]);
    CHECK(a.values[k + 1] == b.values[k + 1]);
  }
}

TEST_CASE("distance encoding is injective on |dist| <= 20") {
  for (int d1 = -20; d1 <= 20; ++d1)
    for (int d2 = d1 + 1; d2 <= 20; ++d2) {
      DistEncoding a = distEncode(d1, 0);
      DistEncoding b = distEncode(d2, 0);
      double maxDiff = 0;
      for (int k = 0; k < DistEncoding::kDims; ++k)
        maxDiff = std::max(maxDiff, std::abs(a.values[k] - b.values[k]));
      CHECK(maxDiff > 1e-9);
    }
}

TEST_CASE("a zero model scores everything as zero") {
  std::vector<std::pair<std::vector<std::string>, Decomposition>> one(
      trained().corpus.begin(), trained().corpus.begin() + 1);
  ScorerConfig cfg;
  cfg.epochs = 0;
  LinearModel zero = LinearModel::train(one, cfg);
  const std::vector<std::string>& toks = one[0].first;
  CHECK(zero.scoreSupertag(toks, 0, -1) == 0.0);
  CHECK(zero.scoreSupertag(toks, 0, 0) == 0.0);
  CHECK(zero.scoreEdge(toks, 0, 1, Operation::apply(SourceName::S0)) == 0.0);
  CHECK(zero.scoreLabel(toks, 0, zero.labelVocab[0]) == 0.0);
}

TEST_CASE("training is deterministic under a fixed seed") {
  std::vector<std::pair<std::vector<std::string>, Decomposition>> small(
      trained().corpus.begin(), trained().corpus.begin() + 30);
  ScorerConfig cfg;
  cfg.epochs = 3;
  cfg.seed = 11;
  LinearModel a = LinearModel::train(small, cfg);
  LinearModel b = LinearModel::train(small, cfg);
  const std::vector<std::string>& toks = small[0].first;
  for (int t = 0; t < static_cast<int>(toks.size()); ++t) {
    CHECK(a.scoreSupertag(toks, t, -1) == b.scoreSupertag(toks, t, -1));
    CHECK(a.bestLabel(toks, t) == b.bestLabel(toks, t));
  }
  CHECK(a.scoreEdge(toks, 0, 1, Operation::modify(SourceName::S0)) ==
        b.scoreEdge(toks, 0, 1, Operation::modify(SourceName::S0)));
}

TEST_CASE("the trained model re-derives its training decisions") {
  CHECK(trained().model.selfFit(trained().corpus) >= 0.99);
}

TEST_CASE("gold edges outscore every competing class on nearly all pairs") {
  const auto& fix = trained();
  long edges = 0, wins = 0;
  for (const auto& [tokens, d] : fix.corpus) {
    for (const TreeEdge& e : d.tree.edges) {
      ++edges;
      double gold = fix.model.scoreEdge(tokens, e.head, e.dep, e.op);
      double bestOther = fix.model.scoreEdgeNoEdge(tokens, e.head, e.dep);
      for (const std::string& cls : edgeClassNames()) {
        if (cls == "NOEDGE" || cls == e.op.str()) continue;
        bestOther = std::max(bestOther,
                             fix.model.scoreEdge(tokens, e.head, e.dep, Operation::parse(cls)));
      }
      if (gold > bestOther) ++wins;
    }
  }
  CHECK(static_cast<double>(wins) / edges >= 0.99);
}

TEST_CASE("logistic loss gradient matches central finite differences") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    int k = 2 + static_cast<int>(rng() % 3);
    std::vector<FeatureVec> classes(k);
    std::vector<std::uint64_t> hashes;
    for (int c = 0; c < k; ++c) {
      hashes.push_back(fnv1a("class" + std::to_string(c)));
      int nf = 1 + static_cast<int>(rng() % 5);
      for (int f = 0; f < nf; ++f)
        classes[c].add("f" + std::to_string(rng() % 6), val(rng));
    }
    int gold = static_cast<int>(rng() % k);
    WeightMap w;
    for (int c = 0; c < k; ++c)
      for (const auto& [id, v] : classes[c].items) {
        (void)v;
        w.update(hashCombine(hashes[c], id), val(rng));
      }

    std::map<std::uint64_t, double> grad;
    logisticLossGrad(classes, hashes, gold, w, &grad);
    for (const auto& [wid, g] : grad) {
      const double h = 1e-6;
      WeightMap wp = w, wm = w;
      wp.update(wid, h);
      wm.update(wid, -h);
      double fd = (logisticLossGrad(classes, hashes, gold, wp) -
                   logisticLossGrad(classes, hashes, gold, wm)) /
                  (2 * h);
      double rel = std::abs(g - fd) / std::max(1.0, std::max(std::abs(g), std::abs(fd)));
      CHECK(rel < 1e-5);
      ++checked;
    }
  }
  CHECK(checked >= 100);
}

TEST_CASE("logistic SGD training also converges on a small corpus") {
  std::vector<std::pair<std::vector<std::string>, Decomposition>> small(
      trained().corpus.begin(), trained().corpus.begin() + 60);
  ScorerConfig cfg;
  cfg.loss = ScorerConfig::Loss::Logistic;
  cfg.epochs = 12;
  cfg.learningRate = 0.5;
  LinearModel m = LinearModel::train(small, cfg);
  CHECK(m.selfFit(small) >= 0.97);
}

TEST_CASE("features are position-relative: padding shifts scores unchanged") {
  const auto& fix = trained();
  std::vector<std::string> sent = {"Ava", "saw", "a", "ball", "in", "a", "bowl", "."};
  std::vector<std::string> padded = {"Mia", "slept", "."};
  padded.insert(padded.end(), sent.begin(), sent.end());
  const int off = 3;
  // Tokens 3..6 sit far enough from the pad boundary that windows agree.
  for (int t = 3; t <= 5; ++t)
    CHECK(fix.model.scoreSupertag(sent, t, 0) ==
          fix.model.scoreSupertag(padded, t + off, 0));
  CHECK(fix.model.scoreEdge(sent, 3, 4, Operation::modify(SourceName::S0)) ==
        fix.model.scoreEdge(padded, 3 + off, 4 + off, Operation::modify(SourceName::S0)));
  CHECK(fix.model.scoreEdge(sent, 6, 4, Operation::apply(SourceName::S1)) ==
        fix.model.scoreEdge(padded, 6 + off, 4 + off, Operation::apply(SourceName::S1)));
}

TEST_CASE("toggling distance features changes PP-attachment edge scores") {
  std::vector<std::pair<std::vector<std::string>, Decomposition>> small(
      trained().corpus.begin(), trained().corpus.begin() + 40);
  ScorerConfig with;
  with.epochs = 3;
  ScorerConfig without = with;
  without.useDistance = false;
  LinearModel mw = LinearModel::train(small, with);
  LinearModel mo = LinearModel::train(small, without);
  std::vector<std::string> sent = {"Ava", "saw", "a", "ball", "in", "a", "bowl", "."};
  double a = mw.scoreEdge(sent, 3, 4, Operation::modify(SourceName::S0));
  double b = mo.scoreEdge(sent, 3, 4, Operation::modify(SourceName::S0));
  CHECK(a != b);
  // With repeated lexical context, only distance separates near from far.
  std::vector<std::string> deep = {"Ava", "saw", "a", "ball", "in", "a",
                                   "ball", "in", "a", "ball", "."};
  double nearScore = mw.scoreEdge(deep, 6, 7, Operation::modify(SourceName::S0));
  double farScore = mw.scoreEdge(deep, 3, 7, Operation::modify(SourceName::S0));
  CHECK(nearScore != farScore);
}

TEST_CASE("vocabulary threshold 1 keeps single-occurrence lemmas") {
  const auto& fix = trained();
  CHECK(fix.model.config.vocabThreshold == 1);
  // A form seen once still gets form-specific features: scores differ from
  // an unseen form in the same context.
  std::vector<std::string> seen = {"Ava", "smiled", "."};
  std::vector<std::string> unseen = {"Zorp", "smiled", "."};
  bool anyDiff = false;
  for (std::size_t s = 0; s < fix.model.lexicon.shapes.size(); ++s)
    if (fix.model.scoreSupertag(seen, 0, static_cast<int>(s)) !=
        fix.model.scoreSupertag(unseen, 0, static_cast<int>(s)))
      anyDiff = true;
  CHECK(anyDiff);
}

TEST_CASE("high vocabulary thresholds collapse rare forms to <unk>") {
  std::vector<std::pair<std::vector<std::string>, Decomposition>> small(
      trained().corpus.begin(), trained().corpus.begin() + 30);
  ScorerConfig cfg;
  cfg.epochs = 2;
  cfg.vocabThreshold = 1000000;  // everything rare
  LinearModel m = LinearModel::train(small, cfg);
  std::vector<std::string> a = {"Ava", "slept", "."};
  std::vector<std::string> b = {"Ben", "slept", "."};
  for (std::size_t s = 0; s < m.lexicon.shapes.size(); ++s)
    CHECK(m.scoreSupertag(a, 0, static_cast<int>(s)) ==
          m.scoreSupertag(b, 0, static_cast<int>(s)));
}

TEST_CASE("training on an empty corpus is rejected") {
  CHECK_THROWS_AS(LinearModel::train({}, ScorerConfig{}), EmptyCorpus);
}

TEST_CASE("model save/load round-trips scores exactly") {
  const auto& fix = trained();
  std::string path = "test_model_roundtrip.json";
  fix.model.save(path);
  LinearModel loaded = LinearModel::load(path);
  const std::vector<std::string>& toks = fix.corpus[0].first;
  for (int t = 0; t < static_cast<int>(toks.size()); ++t) {
    CHECK(loaded.scoreSupertag(toks, t, -1) == fix.model.scoreSupertag(toks, t, -1));
    CHECK(loaded.bestLabel(toks, t) == fix.model.bestLabel(toks, t));
  }
  CHECK(loaded.scoreEdge(toks, 1, 0, Operation::apply(SourceName::S0)) ==
        fix.model.scoreEdge(toks, 1, 0, Operation::apply(SourceName::S0)));
  std::remove(path.c_str());
}
