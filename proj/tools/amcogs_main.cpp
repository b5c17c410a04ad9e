// Command-line front end: conversion checks, gold-tree decomposition,
// training, parsing, evaluation, error diffing, syntax evaluation, and the
// synthetic mini-corpus generator.
#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "amcogs/convert.hpp"
#include "amcogs/corpus.hpp"
#include "amcogs/decoder.hpp"
#include "amcogs/decompose.hpp"
#include "amcogs/generator.hpp"
#include "amcogs/model_io.hpp"
#include "amcogs/scorer.hpp"
#include "amcogs/syntax.hpp"

using namespace amcogs;

namespace {

LfFormat formatFromString(const std::string& s) {
  if (s == "compact") return LfFormat::Compact;
  if (s == "tokenized") return LfFormat::Tokenized;
  throw ConfigError("unknown format: " + s + " (expected compact|tokenized)");
}

int runConvert(const std::string& input, bool check, const std::string& dumpPath,
               const std::string& format) {
  std::vector<CorpusItem> items = loadCorpus(input);
  if (items.empty()) std::cerr << "warning: no items in " << input << "\n";
  std::ofstream dump;
  if (!dumpPath.empty()) dump.open(dumpPath);
  long ok = 0, primitives = 0, failures = 0;
  auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < items.size(); ++i) {
    const CorpusItem& it = items[i];
    try {
      LogicalForm lf = parseLf(it.goldLf);
      if (lf.isPrimitive()) {
        ++primitives;
        // Primitives have no sentence context: check the parse/print
        // round-trip and that the conversion accepts them.
        AsGraph g = primitiveToGraph(lf);
        if (!exactMatch(printLf(lf, LfFormat::Tokenized), it.goldLf))
          throw ConvertError("primitive print mismatch");
        if (dump) dump << "# " << it.sentence << "\n" << toText(g) << "\n";
        ++ok;
        continue;
      }
      AlignedGraph g = lfToGraph(lf, it.tokens);
      if (dump) dump << "# " << it.sentence << "\n" << toText(g.graph) << "\n";
      if (check) {
        std::string back = printLf(graphToLf(g, it.tokens), formatFromString(format));
        if (!exactMatch(back, it.goldLf)) throw ConvertError("round-trip mismatch");
      }
      ++ok;
    } catch (const Error& e) {
      ++failures;
      if (failures <= 10)
        std::cerr << "item " << i << ": " << e.what() << "\n  " << it.goldLf << "\n";
    }
  }
  double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "items: " << items.size() << "  ok: " << ok
            << "  primitives: " << primitives << "  failures: " << failures << "  ("
            << secs << " s)\n";
  return failures == 0 ? 0 : 1;
}

int runDecompose(const std::string& input, const std::string& treesPath,
                 const std::string& lexiconPath) {
  std::vector<CorpusItem> items = loadCorpus(input);
  long skipped = 0;
  auto pairs = decomposeCorpus(items, &skipped);
  if (!treesPath.empty()) {
    std::ofstream out(treesPath);
    if (!out) throw FormatError("cannot write " + treesPath);
    for (const auto& [tokens, d] : pairs) {
      out << "# " << join(tokens, " ") << "\n";
      for (const Constant& c : d.tree.constants) {
        out << "const " << c.token << " ";
        if (c.isBottom())
          out << "BOT\n";
        else
          out << shapeKey(*c.graph) << " "
              << c.graph->graph.node(c.graph->graph.root).label << "\n";
      }
      out << d.tree.toText() << "\n";
    }
  }
  std::vector<Decomposition> ds;
  for (auto& [tokens, d] : pairs) ds.push_back(d);
  std::map<std::string, long> inventory = supertagInventory(ds);
  if (!lexiconPath.empty()) {
    std::ofstream out(lexiconPath);
    if (!out) throw FormatError("cannot write " + lexiconPath);
    for (const auto& [shape, count] : inventory) out << shape << "\t" << count << "\n";
  }
  std::cout << "sentences: " << pairs.size() << "  primitives skipped: " << skipped
            << "  shapes: " << inventory.size() << "\n";
  return 0;
}

int runTrain(const std::string& input, const std::string& modelPath, int epochs,
             double lr, const std::string& loss, int vocabThreshold, bool useDist,
             std::uint64_t seed) {
  std::vector<CorpusItem> items = loadCorpus(input);
  long skipped = 0;
  auto pairs = decomposeCorpus(items, &skipped);
  ScorerConfig cfg;
  cfg.epochs = epochs;
  cfg.learningRate = lr;
  if (loss == "perceptron")
    cfg.loss = ScorerConfig::Loss::Perceptron;
  else if (loss == "logistic")
    cfg.loss = ScorerConfig::Loss::Logistic;
  else
    throw ConfigError("unknown loss: " + loss);
  cfg.vocabThreshold = vocabThreshold;
  cfg.useDistance = useDist;
  cfg.seed = seed;
  auto start = std::chrono::steady_clock::now();
  LinearModel model = LinearModel::train(pairs, cfg);
  double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  model.save(modelPath);
  std::cout << "trained on " << pairs.size() << " sentences (" << skipped
            << " primitives skipped) in " << secs << " s\n"
            << "shapes: " << model.lexicon.shapes.size()
            << "  labels: " << model.labelVocab.size()
            << "  self-fit: " << model.selfFit(pairs) << "\n"
            << "model written to " << modelPath << "\n";
  return 0;
}

// Fallback when no well-typed tree exists within the k budget: the
// most-probable-supertag left-branching tree; if that is ill-typed, a unary
// formula over the first token's best label.
std::string fallbackPrediction(const LinearModel& model,
                               const std::vector<std::string>& tokens) {
  try {
    AmDepTree tree;
    int prev = -1;
    for (int t = 0; t < static_cast<int>(tokens.size()); ++t) {
      int best = -1;
      double bestScore = model.scoreSupertag(tokens, t, -1);
      for (std::size_t s = 0; s < model.lexicon.shapes.size(); ++s) {
        double sc = model.scoreSupertag(tokens, t, static_cast<int>(s));
        if (sc > bestScore) {
          bestScore = sc;
          best = static_cast<int>(s);
        }
      }
      if (best < 0) {
        tree.constants.push_back({t, std::nullopt});
        continue;
      }
      AsGraph g = model.lexicon.shapeGraphs[best];
      GraphNode* root = g.graph.find(g.graph.root);
      root->label = model.bestLabel(tokens, t).first;
      root->align = t;
      tree.constants.push_back({t, std::move(g)});
      if (prev >= 0) tree.edges.push_back({prev, t, Operation::apply(SourceName::S0)});
      prev = t;
    }
    SemGraph g = evaluate(tree);
    return printLf(graphToLf({g, static_cast<int>(tokens.size()), true}, tokens),
                   LfFormat::Tokenized);
  } catch (const Error&) {
  }
  for (int t = 0; t < static_cast<int>(tokens.size()); ++t) {
    try {
      return model.bestLabel(tokens, t).first + " ( x _ " + std::to_string(t) + " )";
    } catch (const Error&) {
    }
  }
  return "";
}

int runParse(const std::string& modelPath, const std::string& input,
             const std::string& output, int k, int maxK, const std::string& format,
             unsigned threads) {
  LinearModel model = LinearModel::load(modelPath);
  std::vector<CorpusItem> items = loadCorpus(input);
  std::ofstream out(output);
  if (!out) throw FormatError("cannot write " + output);
  auto start = std::chrono::steady_clock::now();
  std::vector<int> budgets;
  for (int kk = k; kk < maxK; kk *= 2) budgets.push_back(kk);
  budgets.push_back(maxK);

  // Sentences decode independently; results are written in input order, so
  // the output is identical for any thread count.
  std::vector<std::string> preds(items.size());
  std::vector<char> usedFallback(items.size(), 0);
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (std::size_t i = cursor.fetch_add(1); i < items.size();
         i = cursor.fetch_add(1)) {
      const CorpusItem& it = items[i];
      bool done = false;
      for (int kk : budgets) {
        try {
          LogicalForm lf = parseToLf(model, model.lexicon, it.tokens, kk);
          preds[i] = printLf(lf, formatFromString(format));
          done = true;
          break;
        } catch (const Error&) {
        }
      }
      if (!done) {
        preds[i] = fallbackPrediction(model, it.tokens);
        usedFallback[i] = 1;
      }
    }
  };
  if (threads == 0) threads = 1;
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  long fallbacks = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    out << items[i].sentence << "\t" << preds[i] << "\t" << items[i].genType << "\n";
    fallbacks += usedFallback[i];
  }
  double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "parsed " << items.size() << " sentences in " << secs << " s ("
            << fallbacks << " fallbacks, " << threads << " threads)\n"
            << "predictions written to " << output << "\n";
  return 0;
}

int runEval(const std::string& goldPath, const std::string& predPath,
            const std::string& reportPath, const std::string& csvPath,
            const std::string& depthCsvPath, bool strict) {
  std::vector<CorpusItem> gold = loadCorpus(goldPath);
  std::vector<CorpusItem> predItems = loadCorpus(predPath);
  std::vector<std::string> preds;
  for (const CorpusItem& it : predItems) preds.push_back(it.goldLf);
  EvalReport r = evaluateCorpus(gold, preds, strict);

  std::cout << "overall: " << r.overall.accuracy() << " (" << r.overall.correct << "/"
            << r.overall.total << ")\n";
  for (const auto& [cls, b] : r.perClass)
    std::cout << "class " << cls << ": " << b.accuracy() << " (" << b.correct << "/"
              << b.total << ")\n";
  for (const auto& [type, b] : r.perType)
    std::cout << "type " << type << ": " << b.accuracy() << " (" << b.correct << "/"
              << b.total << ")\n";
  for (const auto& [depth, b] : r.perDepth)
    std::cout << "pp-depth " << depth << ": " << b.accuracy() << " (" << b.correct
              << "/" << b.total << ")\n";

  if (!reportPath.empty()) {
    nlohmann::json j;
    j["overall"] = {{"accuracy", r.overall.accuracy()},
                    {"correct", r.overall.correct},
                    {"total", r.overall.total}};
    for (const auto& [t, b] : r.perType)
      j["perType"][t] = {
          {"accuracy", b.accuracy()}, {"correct", b.correct}, {"total", b.total}};
    for (const auto& [c, b] : r.perClass)
      j["perClass"][c] = {
          {"accuracy", b.accuracy()}, {"correct", b.correct}, {"total", b.total}};
    for (const auto& [d, b] : r.perDepth)
      j["perDepth"][std::to_string(d)] = {
          {"accuracy", b.accuracy()}, {"correct", b.correct}, {"total", b.total}};
    std::ofstream out(reportPath);
    out << j.dump(1) << "\n";
  }
  if (!csvPath.empty()) {
    std::ofstream out(csvPath);
    out << "kind,key,accuracy,correct,total\n";
    out << "overall,," << r.overall.accuracy() << "," << r.overall.correct << ","
        << r.overall.total << "\n";
    for (const auto& [c, b] : r.perClass)
      out << "class," << c << "," << b.accuracy() << "," << b.correct << "," << b.total
          << "\n";
    for (const auto& [t, b] : r.perType)
      out << "type," << t << "," << b.accuracy() << "," << b.correct << "," << b.total
          << "\n";
  }
  if (!depthCsvPath.empty()) {
    std::ofstream out(depthCsvPath);
    out << "depth,accuracy,count\n";
    for (const auto& [d, b] : r.perDepth)
      out << d << "," << b.accuracy() << "," << b.total << "\n";
  }
  return 0;
}

int runDiff(const std::string& goldPath, const std::string& predPath, int n,
            bool strict) {
  std::vector<CorpusItem> gold = loadCorpus(goldPath);
  std::vector<CorpusItem> predItems = loadCorpus(predPath);
  std::vector<std::string> preds;
  for (const CorpusItem& it : predItems) preds.push_back(it.goldLf);
  std::vector<DiffEntry> diffs = diffReport(gold, preds, n, strict);
  for (const DiffEntry& e : diffs) std::cout << formatDiff(e);
  std::cout << diffs.size() << " mismatches shown\n";
  return 0;
}

int runGenMini(const std::string& outDir, const MiniCorpusConfig& cfg) {
  MiniCorpus mc = genMiniCorpus(cfg);
  writeCorpusTsv(outDir + "/train.tsv", mc.train);
  writeCorpusTsv(outDir + "/dev.tsv", mc.dev);
  writeCorpusTsv(outDir + "/gen.tsv", mc.gen);
  std::cout << "wrote " << mc.train.size() << " train / " << mc.dev.size() << " dev / "
            << mc.gen.size() << " gen items to " << outDir << "\n";
  return 0;
}

int runSyntaxEval(const std::string& goldPath, const std::string& predPath,
                  const std::string& mapPath) {
  std::vector<ConstTree> gold = loadTrees(goldPath);
  std::vector<ConstTree> pred = loadTrees(predPath);
  if (!mapPath.empty()) {
    std::map<std::string, std::string> map = loadLabelMap(mapPath);
    for (ConstTree& t : gold) t = coarsen(t, map);
    for (ConstTree& t : pred) t = coarsen(t, map);
  }
  std::cout << "labeled exact match:   " << bracketExactMatch(gold, pred, true) << "\n";
  std::cout << "unlabeled exact match: " << bracketExactMatch(gold, pred, false)
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "COGS semantic-parsing toolkit (graph conversion, AM algebra, "
      "decomposition, training, decoding, evaluation)"};
  app.require_subcommand(1);

  // convert
  std::string input, dumpPath, format = "tokenized";
  bool check = false;
  CLI::App* convert = app.add_subcommand("convert", "convert formulas to graphs");
  convert->add_option("--input", input, "corpus TSV")->required();
  convert->add_flag("--check", check, "verify the graph round-trip per item");
  convert->add_option("--dump", dumpPath, "write graph dumps to this file");
  convert->add_option("--format", format, "compact|tokenized (round-trip surface)");

  // decompose
  std::string treesPath, lexiconPath;
  CLI::App* dec = app.add_subcommand("decompose", "gold trees and supertag lexicon");
  dec->add_option("--input", input, "corpus TSV")->required();
  dec->add_option("--trees", treesPath, "write tree dumps here");
  dec->add_option("--lexicon", lexiconPath, "write the shape inventory here");

  // train
  std::string modelPath = "model.json", loss = "perceptron";
  int epochs = 10, vocabThreshold = 1;
  double lr = 0.1;
  std::uint64_t seed = 1;
  bool dist = true;
  CLI::App* train = app.add_subcommand("train", "train the feature scorer");
  train->add_option("--input", input, "training TSV")->required();
  train->add_option("--model", modelPath, "output model file");
  train->add_option("--epochs", epochs, "training epochs");
  train->add_option("--lr", lr, "learning rate");
  train->add_option("--loss", loss, "perceptron|logistic");
  train->add_option("--vocab-threshold", vocabThreshold,
                    "forms seen fewer times become <unk>");
  train->add_flag("--dist,!--no-dist", dist, "use relative-distance features");
  train->add_option("--seed", seed, "training seed");

  // parse
  std::string output = "predictions.tsv";
  int k = 3, maxK = 24;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  CLI::App* parse = app.add_subcommand("parse", "parse sentences to formulas");
  parse->add_option("--model", modelPath, "model file")->required();
  parse->add_option("--input", input, "input TSV")->required();
  parse->add_option("--output", output, "predictions TSV");
  parse->add_option("--k", k, "supertag candidates per token");
  parse->add_option("--max-k", maxK, "cap for the k-doubling fallback");
  parse->add_option("--format", format, "compact|tokenized output");
  parse->add_option("--threads", threads, "worker threads (output is order-stable)");

  // eval
  std::string goldPath, predPath, reportPath, csvPath, depthCsvPath;
  bool strict = false;
  CLI::App* eval = app.add_subcommand("eval", "exact-match evaluation report");
  eval->add_option("--gold", goldPath, "gold TSV")->required();
  eval->add_option("--pred", predPath, "predictions TSV")->required();
  eval->add_option("--report", reportPath, "write JSON report");
  eval->add_option("--csv", csvPath, "write CSV report");
  eval->add_option("--depth-csv", depthCsvPath, "write depth-curve CSV");
  eval->add_flag("--strict-match", strict, "bit-strict string comparison");

  // diff
  int diffN = 10;
  CLI::App* diff = app.add_subcommand("diff", "term-level error report");
  diff->add_option("--gold", goldPath, "gold TSV")->required();
  diff->add_option("--pred", predPath, "predictions TSV")->required();
  diff->add_option("-n", diffN, "max mismatches to show");
  diff->add_flag("--strict-match", strict, "bit-strict string comparison");

  // gen-mini
  std::string outDir = ".";
  MiniCorpusConfig mini;
  CLI::App* gen = app.add_subcommand("gen-mini", "generate the synthetic corpus");
  gen->add_option("--out-dir", outDir, "output directory");
  gen->add_option("--seed", mini.seed, "generation seed");
  gen->add_option("--train-size", mini.trainSize, "training items");
  gen->add_option("--dev-size", mini.devSize, "dev items");
  gen->add_option("--gen-per-depth", mini.genPerDepth, "gen items per depth");
  gen->add_option("--max-train-pp-depth", mini.maxTrainPpDepth, "training depth bound");
  gen->add_option("--gen-depth-min", mini.genDepthMin, "smallest gen depth");
  gen->add_option("--gen-depth-max", mini.genDepthMax, "largest gen depth");

  // syntax-eval
  std::string mapPath;
  CLI::App* syn = app.add_subcommand("syntax-eval", "bracket exact match");
  syn->add_option("--gold", goldPath, "gold trees (one per line)")->required();
  syn->add_option("--pred", predPath, "predicted trees")->required();
  syn->add_option("--coarsen", mapPath, "fine-to-coarse label map file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (convert->parsed()) return runConvert(input, check, dumpPath, format);
    if (dec->parsed()) return runDecompose(input, treesPath, lexiconPath);
    if (train->parsed())
      return runTrain(input, modelPath, epochs, lr, loss, vocabThreshold, dist, seed);
    if (parse->parsed())
      return runParse(modelPath, input, output, k, maxK, format, threads);
    if (eval->parsed())
      return runEval(goldPath, predPath, reportPath, csvPath, depthCsvPath, strict);
    if (diff->parsed()) return runDiff(goldPath, predPath, diffN, strict);
    if (gen->parsed()) return runGenMini(outDir, mini);
    if (syn->parsed()) return runSyntaxEval(goldPath, predPath, mapPath);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
