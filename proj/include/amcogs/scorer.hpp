// Feature-based scorers for supertags, operation-labeled tree edges, and
// lexical labels, plus the sine-cosine relative-distance encoding.
//
// All three sub-models are linear over hashed features. Every feature is
// relative (token forms, windows, distances); nothing references absolute
// sentence positions. Training is an averaged perceptron or logistic SGD,
// seeded and fully deterministic.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "amcogs/algebra.hpp"
#include "amcogs/decompose.hpp"
#include "amcogs/errors.hpp"
#include "amcogs/strings.hpp"

namespace amcogs {

struct DistEncoding {
  static constexpr int kDims = 64;
  std::array<double, kDims> values{};
};

// values[2k] = sin(dist / 10000^(2k/64)), values[2k+1] = cos(dist / 10000^(2k/64))
// with dist(i,j) = i - j.
inline DistEncoding distEncode(int i, int j) {
  DistEncoding enc;
  const double dist = static_cast<double>(i) - static_cast<double>(j);
  for (int k = 0; 2 * k < DistEncoding::kDims; ++k) {
    double denom = std::pow(10000.0, (2.0 * k) / DistEncoding::kDims);
    enc.values[2 * k] = std::sin(dist / denom);
    enc.values[2 * k + 1] = std::cos(dist / denom);
  }
  return enc;
}

struct ScorerConfig {
  enum class Loss { Perceptron, Logistic };
  int epochs = 10;
  double learningRate = 0.1;
  Loss loss = Loss::Perceptron;
  int vocabThreshold = 1;  // forms seen fewer times than this become <unk>
  bool useDistance = true;
  std::uint64_t seed = 1;
};

struct FeatureVec {
  std::vector<std::pair<std::uint64_t, double>> items;
  void add(std::uint64_t id, double v = 1.0) { items.push_back({id, v}); }
  void add(std::string_view name, double v = 1.0) { items.push_back({fnv1a(name), v}); }
};

class WeightMap {
 public:
  double get(std::uint64_t id) const {
    auto it = w_.find(id);
    return it == w_.end() ? 0.0 : it->second;
  }
  double dot(const FeatureVec& f, std::uint64_t classHash) const {
    double s = 0;
    for (const auto& [id, v] : f.items) s += get(hashCombine(classHash, id)) * v;
    return s;
  }
  void update(std::uint64_t id, double delta) {
    if (averaging_) {
      acc_[id] += w_[id] * static_cast<double>(time_ - last_[id]);
      last_[id] = time_;
    }
    w_[id] += delta;
  }
  void tick() { ++time_; }
  void beginAveraging() { averaging_ = true; }
  void finishAveraging() {
    if (!averaging_ || time_ == 0) return;
    for (auto& [id, w] : w_) {
      acc_[id] += w * static_cast<double>(time_ - last_[id]);
      last_[id] = time_;
      w = acc_[id] / static_cast<double>(time_);
    }
    averaging_ = false;
    acc_.clear();
    last_.clear();
  }

  std::map<std::uint64_t, double> snapshot() const {
    std::map<std::uint64_t, double> out;
    for (const auto& [id, w] : w_)
      if (w != 0.0) out[id] = w;
    return out;
  }
  void assign(const std::map<std::uint64_t, double>& weights) {
    w_.clear();
    for (const auto& [id, w] : weights) w_[id] = w;
  }
  std::size_t size() const { return w_.size(); }

 private:
  std::unordered_map<std::uint64_t, double> w_;
  std::unordered_map<std::uint64_t, double> acc_;
  std::unordered_map<std::uint64_t, long> last_;
  long time_ = 0;
  bool averaging_ = false;
};

// Multiclass logistic loss for one decision, with the analytic gradient in
// the per-(class,feature) weight space. Factored out so tests can check it
// against finite differences.
inline double logisticLossGrad(const std::vector<FeatureVec>& classes,
                               const std::vector<std::uint64_t>& classHashes,
                               int gold, const WeightMap& w,
                               std::map<std::uint64_t, double>* grad = nullptr) {
  const std::size_t k = classes.size();
  std::vector<double> scores(k);
  for (std::size_t c = 0; c < k; ++c) scores[c] = w.dot(classes[c], classHashes[c]);
  double mx = *std::max_element(scores.begin(), scores.end());
  double z = 0;
  std::vector<double> p(k);
  for (std::size_t c = 0; c < k; ++c) z += std::exp(scores[c] - mx);
  for (std::size_t c = 0; c < k; ++c) p[c] = std::exp(scores[c] - mx) / z;
  if (grad) {
    for (std::size_t c = 0; c < k; ++c) {
      double coef = p[c] - (static_cast<int>(c) == gold ? 1.0 : 0.0);
      for (const auto& [id, v] : classes[c].items)
        (*grad)[hashCombine(classHashes[c], id)] += coef * v;
    }
  }
  return -(scores[gold] - mx) + std::log(z);
}

namespace feat {

inline const std::string kBoundaryLeft = "<s>";
inline const std::string kBoundaryRight = "</s>";
inline const std::string kUnknown = "<unk>";
inline const std::string kBottomClass = "<bot>";
inline const std::string kNoEdgeClass = "NOEDGE";

using FormFn = std::function<const std::string&(int)>;

// Window features shared by all three models. Everything is offset-relative.
inline void tokenFeatures(const FormFn& form, int n, int t, const std::string& prefix,
                          FeatureVec& out) {
  auto at = [&](int p) -> const std::string& {
    if (p < 0) return kBoundaryLeft;
    if (p >= n) return kBoundaryRight;
    return form(p);
  };
  out.add(prefix + "b");
  out.add(prefix + "f=" + at(t));
  for (int o : {-2, -1, 1, 2})
    out.add(prefix + "w" + std::to_string(o) + "=" + at(t + o));
  const std::string& f = at(t);
  if (f.size() >= 2) out.add(prefix + "suf2=" + f.substr(f.size() - 2));
  if (f.size() >= 3) out.add(prefix + "suf3=" + f.substr(f.size() - 3));
}

inline FeatureVec supertagFeatures(const FormFn& form, int n, int t) {
  FeatureVec v;
  tokenFeatures(form, n, t, "t:", v);
  return v;
}

inline FeatureVec labelFeatures(const FormFn& form, int n, int t) {
  FeatureVec v;
  tokenFeatures(form, n, t, "l:", v);
  return v;
}

// Class-dependent copy indicators for the label model: these fire only for
// the candidate label that matches the token's surface form (or a crude
// de-inflection of it), so one shared weight covers the whole vocabulary.
inline void labelCopyFeatures(const std::string& surface, const std::string& label,
                              FeatureVec& out) {
  if (label == surface) out.add("l:copy");
  if (label == toLower(surface)) out.add("l:copyLower");
  if (label.size() >= 2 &&
      (label + "ed" == surface || label + "d" == surface || label + "s" == surface))
    out.add("l:copyStem");
  if (label.size() > 2 && surface.size() > 2 && label.substr(0, 2) == surface.substr(0, 2))
    out.add("l:copyPrefix2");
}

inline FeatureVec edgeFeatures(const FormFn& form, int n, int head, int dep,
                               bool useDistance) {
  FeatureVec v;
  auto at = [&](int p) -> const std::string& {
    if (p < 0) return kBoundaryLeft;
    if (p >= n) return kBoundaryRight;
    return form(p);
  };
  v.add("e:b");
  v.add("e:hf=" + at(head));
  v.add("e:df=" + at(dep));
  v.add("e:pair=" + at(head) + "|" + at(dep));
  for (int o : {-2, -1, 1, 2}) {
    v.add("e:hw" + std::to_string(o) + "=" + at(head + o));
    v.add("e:dw" + std::to_string(o) + "=" + at(dep + o));
  }
  if (useDistance) {
    int d = head - dep;
    int clamped = std::max(-6, std::min(6, d));
    v.add("e:db=" + std::to_string(clamped) + (d < -6 ? "<" : d > 6 ? ">" : ""));
    static const std::array<std::uint64_t, DistEncoding::kDims> kDenseIds = [] {
      std::array<std::uint64_t, DistEncoding::kDims> ids{};
      for (int k = 0; k < DistEncoding::kDims; ++k)
        ids[k] = fnv1a("e:denc" + std::to_string(k));
      return ids;
    }();
    DistEncoding enc = distEncode(head, dep);
    for (int k = 0; k < DistEncoding::kDims; ++k)
      v.add(kDenseIds[k], enc.values[k]);
  }
  return v;
}

}  // namespace feat

class LinearModel {
 public:
  ScorerConfig config;
  Lexicon lexicon;
  std::vector<std::string> labelVocab;      // sorted
  std::map<std::string, long> formCounts;   // training-corpus form counts

  // ---- scoring ----

  double scoreSupertag(const std::vector<std::string>& tokens, int t, int shapeId) const {
    FeatureVec v = feat::supertagFeatures(formFn(tokens), size(tokens), t);
    return tagW_.dot(v, tagClassHash(shapeId));
  }
  double scoreLabel(const std::vector<std::string>& tokens, int t,
                    const std::string& label) const {
    FeatureVec v = feat::labelFeatures(formFn(tokens), size(tokens), t);
    feat::labelCopyFeatures(tokens[t], label, v);
    return labelW_.dot(v, fnv1a("L#" + label));
  }
  double scoreEdge(const std::vector<std::string>& tokens, int head, int dep,
                   const Operation& op) const {
    return scoreEdgeClass(tokens, head, dep, op.str());
  }
  double scoreEdgeNoEdge(const std::vector<std::string>& tokens, int head, int dep) const {
    return scoreEdgeClass(tokens, head, dep, feat::kNoEdgeClass);
  }
  // All seven edge-class scores from a single feature extraction; index 0 is
  // NO-EDGE, the rest follow edgeClassNames().
  std::array<double, 7> scoreEdgeAll(const std::vector<std::string>& tokens, int head,
                                     int dep) const {
    FeatureVec v =
        feat::edgeFeatures(formFn(tokens), size(tokens), head, dep, config.useDistance);
    std::array<double, 7> out{};
    for (std::size_t c = 0; c < edgeClassHashes().size(); ++c)
      out[c] = edgeW_.dot(v, edgeClassHashes()[c]);
    return out;
  }
  static const std::vector<std::uint64_t>& edgeClassHashes();

  // Best label for a token, deterministic (score desc, then vocab order).
  std::pair<std::string, double> bestLabel(const std::vector<std::string>& tokens,
                                           int t) const {
    if (labelVocab.empty()) throw Error("label vocabulary is empty");
    FeatureVec base = feat::labelFeatures(formFn(tokens), size(tokens), t);
    std::string best;
    double bestScore = 0;
    bool first = true;
    for (const std::string& label : labelVocab) {
      FeatureVec v = base;
      feat::labelCopyFeatures(tokens[t], label, v);
      double s = labelW_.dot(v, fnv1a("L#" + label));
      if (first || s > bestScore) {
        best = label;
        bestScore = s;
        first = false;
      }
    }
    return {best, bestScore};
  }

  // ---- training ----

  static LinearModel train(
      const std::vector<std::pair<std::vector<std::string>, Decomposition>>& corpus,
      const ScorerConfig& cfg);

  // Fraction of training decisions (tags, edges, labels) the trained model
  // re-derives correctly; the self-fit statistic used by tests.
  double selfFit(
      const std::vector<std::pair<std::vector<std::string>, Decomposition>>& corpus) const;

  void save(const std::string& path) const;
  static LinearModel load(const std::string& path);

 private:
  friend struct ModelSerde;

  static int size(const std::vector<std::string>& tokens) {
    return static_cast<int>(tokens.size());
  }

  // Vocabulary-thresholded view of the sentence.
  feat::FormFn formFn(const std::vector<std::string>& tokens) const {
    return [this, &tokens](int p) -> const std::string& {
      const std::string& f = tokens[p];
      auto it = formCounts.find(f);
      if (it == formCounts.end() || it->second < config.vocabThreshold)
        return feat::kUnknown;
      return f;
    };
  }

  std::uint64_t tagClassHash(int shapeId) const {
    if (shapeId < 0) return fnv1a("T#" + feat::kBottomClass);
    return fnv1a("T#" + lexicon.shapes.at(shapeId));
  }

  double scoreEdgeClass(const std::vector<std::string>& tokens, int head, int dep,
                        const std::string& cls) const {
    FeatureVec v =
        feat::edgeFeatures(formFn(tokens), size(tokens), head, dep, config.useDistance);
    return edgeW_.dot(v, fnv1a("E#" + cls));
  }

  WeightMap tagW_, edgeW_, labelW_;
};

namespace detail {

// One classification decision: a shared base vector plus per-class extras.
struct Decision {
  FeatureVec base;
  std::vector<std::uint64_t> classHashes;
  std::vector<FeatureVec> classExtras;  // may be empty (no class-specific feats)
  int gold = -1;
};

inline void trainDecision(WeightMap& w, const Decision& d, const ScorerConfig& cfg) {
  const std::size_t k = d.classHashes.size();
  auto scoreOf = [&](std::size_t c) {
    double s = w.dot(d.base, d.classHashes[c]);
    if (!d.classExtras.empty()) s += w.dot(d.classExtras[c], d.classHashes[c]);
    return s;
  };
  w.tick();
  if (cfg.loss == ScorerConfig::Loss::Perceptron) {
    std::size_t pred = 0;
    double best = scoreOf(0);
    for (std::size_t c = 1; c < k; ++c) {
      double s = scoreOf(c);
      if (s > best) {
        best = s;
        pred = c;
      }
    }
    if (static_cast<int>(pred) == d.gold) return;
    auto bump = [&](std::size_t c, double sign) {
      for (const auto& [id, v] : d.base.items)
        w.update(hashCombine(d.classHashes[c], id), sign * cfg.learningRate * v);
      if (!d.classExtras.empty())
        for (const auto& [id, v] : d.classExtras[c].items)
          w.update(hashCombine(d.classHashes[c], id), sign * cfg.learningRate * v);
    };
    bump(static_cast<std::size_t>(d.gold), +1.0);
    bump(pred, -1.0);
  } else {
    std::vector<double> scores(k);
    for (std::size_t c = 0; c < k; ++c) scores[c] = scoreOf(c);
    double mx = *std::max_element(scores.begin(), scores.end());
    double z = 0;
    for (double s : scores) z += std::exp(s - mx);
    for (std::size_t c = 0; c < k; ++c) {
      double coef = (static_cast<int>(c) == d.gold ? 1.0 : 0.0) -
                    std::exp(scores[c] - mx) / z;
      if (coef == 0.0) continue;
      for (const auto& [id, v] : d.base.items)
        w.update(hashCombine(d.classHashes[c], id), cfg.learningRate * coef * v);
      if (!d.classExtras.empty())
        for (const auto& [id, v] : d.classExtras[c].items)
          w.update(hashCombine(d.classHashes[c], id), cfg.learningRate * coef * v);
    }
  }
}

inline int argmaxDecision(const WeightMap& w, const Decision& d) {
  const std::size_t k = d.classHashes.size();
  int best = 0;
  double bestScore = 0;
  bool first = true;
  for (std::size_t c = 0; c < k; ++c) {
    double s = w.dot(d.base, d.classHashes[c]);
    if (!d.classExtras.empty()) s += w.dot(d.classExtras[c], d.classHashes[c]);
    if (first || s > bestScore) {
      best = static_cast<int>(c);
      bestScore = s;
      first = false;
    }
  }
  return best;
}

}  // namespace detail

inline const std::vector<std::string>& edgeClassNames() {
  static const std::vector<std::string> kClasses = {
      feat::kNoEdgeClass, "APP_s0", "APP_s1", "APP_s2", "MOD_s0", "MOD_s1", "MOD_s2"};
  return kClasses;
}

inline const std::vector<std::uint64_t>& LinearModel::edgeClassHashes() {
  static const std::vector<std::uint64_t> kHashes = [] {
    std::vector<std::uint64_t> out;
    for (const std::string& cls : edgeClassNames()) out.push_back(fnv1a("E#" + cls));
    return out;
  }();
  return kHashes;
}

inline int edgeClassIndex(const Operation& op) {
  int base = op.kind == OpKind::Apply ? 1 : 4;
  return base + static_cast<int>(op.src);
}

namespace detail {

struct TrainingViews {
  std::vector<std::uint64_t> tagHashes;    // per shape id, then ⊥ at the end
  std::vector<std::uint64_t> edgeHashes;   // aligned with edgeClassNames()
  std::vector<std::uint64_t> labelHashes;  // aligned with labelVocab
};

}  // namespace detail

inline LinearModel LinearModel::train(
    const std::vector<std::pair<std::vector<std::string>, Decomposition>>& corpus,
    const ScorerConfig& cfg) {
  if (corpus.empty()) throw EmptyCorpus("cannot train on an empty corpus");
  LinearModel m;
  m.config = cfg;
  m.lexicon = buildLexicon(corpus);

  std::set<std::string> labels;
  for (const auto& [tokens, d] : corpus) {
    for (const std::string& f : tokens) ++m.formCounts[f];
    for (const Constant& c : d.tree.constants)
      if (!c.isBottom()) labels.insert(c.graph->graph.node(c.graph->graph.root).label);
  }
  m.labelVocab.assign(labels.begin(), labels.end());

  detail::TrainingViews views;
  for (std::size_t sid = 0; sid < m.lexicon.shapes.size(); ++sid)
    views.tagHashes.push_back(m.tagClassHash(static_cast<int>(sid)));
  views.tagHashes.push_back(m.tagClassHash(-1));
  for (const std::string& cls : edgeClassNames())
    views.edgeHashes.push_back(fnv1a("E#" + cls));
  for (const std::string& l : m.labelVocab) views.labelHashes.push_back(fnv1a("L#" + l));

  if (cfg.loss == ScorerConfig::Loss::Perceptron) {
    m.tagW_.beginAveraging();
    m.edgeW_.beginAveraging();
    m.labelW_.beginAveraging();
  }

  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(cfg.seed);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t idx : order) {
      const auto& [tokens, d] = corpus[idx];
      const int n = static_cast<int>(tokens.size());
      feat::FormFn form = m.formFn(tokens);

      // supertags
      for (int t = 0; t < n; ++t) {
        detail::Decision dec;
        dec.base = feat::supertagFeatures(form, n, t);
        dec.classHashes = views.tagHashes;
        const Constant& c = d.tree.constants[t];
        dec.gold = c.isBottom() ? static_cast<int>(m.lexicon.shapes.size())
                                : m.lexicon.shapeId(shapeKey(*c.graph));
        detail::trainDecision(m.tagW_, dec, cfg);
      }
      // labels
      for (int t = 0; t < n; ++t) {
        const Constant& c = d.tree.constants[t];
        if (c.isBottom()) continue;
        detail::Decision dec;
        dec.base = feat::labelFeatures(form, n, t);
        dec.classHashes = views.labelHashes;
        const std::string& gold = c.graph->graph.node(c.graph->graph.root).label;
        for (std::size_t li = 0; li < m.labelVocab.size(); ++li) {
          FeatureVec extra;
          feat::labelCopyFeatures(tokens[t], m.labelVocab[li], extra);
          dec.classExtras.push_back(std::move(extra));
          if (m.labelVocab[li] == gold) dec.gold = static_cast<int>(li);
        }
        if (dec.gold < 0) throw Error("gold label missing from vocabulary");
        detail::trainDecision(m.labelW_, dec, cfg);
      }
      // edges over all ordered pairs
      std::map<std::pair<int, int>, int> goldEdge;
      for (const TreeEdge& e : d.tree.edges)
        goldEdge[{e.head, e.dep}] = edgeClassIndex(e.op);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          detail::Decision dec;
          dec.base = feat::edgeFeatures(form, n, i, j, cfg.useDistance);
          dec.classHashes = views.edgeHashes;
          auto it = goldEdge.find({i, j});
          dec.gold = it == goldEdge.end() ? 0 : it->second;
          detail::trainDecision(m.edgeW_, dec, cfg);
        }
    }
  }

  if (cfg.loss == ScorerConfig::Loss::Perceptron) {
    m.tagW_.finishAveraging();
    m.edgeW_.finishAveraging();
    m.labelW_.finishAveraging();
  }
  return m;
}

inline double LinearModel::selfFit(
    const std::vector<std::pair<std::vector<std::string>, Decomposition>>& corpus) const {
  long total = 0, correct = 0;
  for (const auto& [tokens, d] : corpus) {
    const int n = static_cast<int>(tokens.size());
    for (int t = 0; t < n; ++t) {
      const Constant& c = d.tree.constants[t];
      int gold = c.isBottom() ? -1 : lexicon.shapeId(shapeKey(*c.graph));
      int best = -1;
      double bestScore = scoreSupertag(tokens, t, -1);
      for (std::size_t s = 0; s < lexicon.shapes.size(); ++s) {
        double sc = scoreSupertag(tokens, t, static_cast<int>(s));
        if (sc > bestScore) {
          bestScore = sc;
          best = static_cast<int>(s);
        }
      }
      ++total;
      if (best == gold) ++correct;
      if (!c.isBottom()) {
        ++total;
        if (bestLabel(tokens, t).first == c.graph->graph.node(c.graph->graph.root).label)
          ++correct;
      }
    }
    std::map<std::pair<int, int>, int> goldEdge;
    for (const TreeEdge& e : d.tree.edges) goldEdge[{e.head, e.dep}] = edgeClassIndex(e.op);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        auto it = goldEdge.find({i, j});
        int gold = it == goldEdge.end() ? 0 : it->second;
        std::array<double, 7> all = scoreEdgeAll(tokens, i, j);
        int best = 0;
        for (std::size_t c = 1; c < all.size(); ++c)
          if (all[c] > all[best]) best = static_cast<int>(c);
        ++total;
        if (best == gold) ++correct;
      }
  }
  if (total == 0) return 1.0;
  return static_cast<double>(correct) / static_cast<double>(total);
}

}  // namespace amcogs
