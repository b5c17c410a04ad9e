// Versioned JSON persistence for trained models (weights, lexicon, config).
#pragma once

#include <fstream>
#include <string>

#include "json.hpp"

#include "amcogs/scorer.hpp"

namespace amcogs {

struct ModelSerde {
  static constexpr const char* kVersion = "amcogs-model-v1";

  static nlohmann::json weightsToJson(const WeightMap& w) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [id, weight] : w.snapshot()) j[std::to_string(id)] = weight;
    return j;
  }
  static void weightsFromJson(const nlohmann::json& j, WeightMap& w) {
    std::map<std::uint64_t, double> weights;
    for (auto it = j.begin(); it != j.end(); ++it)
      weights[std::stoull(it.key())] = it.value().get<double>();
    w.assign(weights);
  }

  static nlohmann::json toJson(const LinearModel& m) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["config"] = {
        {"epochs", m.config.epochs},
        {"learningRate", m.config.learningRate},
        {"loss", m.config.loss == ScorerConfig::Loss::Perceptron ? "perceptron" : "logistic"},
        {"vocabThreshold", m.config.vocabThreshold},
        {"useDistance", m.config.useDistance},
        {"seed", m.config.seed},
    };
    j["shapes"] = m.lexicon.shapes;
    j["shapeCounts"] = m.lexicon.shapeCounts;
    nlohmann::json formShapes = nlohmann::json::object();
    for (const auto& [form, byId] : m.lexicon.formShapes) {
      nlohmann::json entry = nlohmann::json::object();
      for (const auto& [id, count] : byId) entry[m.lexicon.shapes.at(id)] = count;
      formShapes[form] = entry;
    }
    j["formShapes"] = formShapes;
    j["formBottom"] = m.lexicon.formBottom;
    j["labelVocab"] = m.labelVocab;
    j["formCounts"] = m.formCounts;
    j["weights"] = {{"tag", weightsToJson(m.tagW_)},
                    {"edge", weightsToJson(m.edgeW_)},
                    {"label", weightsToJson(m.labelW_)}};
    return j;
  }

  static LinearModel fromJson(const nlohmann::json& j) {
    if (!j.contains("version") || j["version"] != kVersion)
      throw FormatError("unsupported model file version");
    LinearModel m;
    const auto& c = j["config"];
    m.config.epochs = c["epochs"].get<int>();
    m.config.learningRate = c["learningRate"].get<double>();
    m.config.loss = c["loss"] == "perceptron" ? ScorerConfig::Loss::Perceptron
                                              : ScorerConfig::Loss::Logistic;
    m.config.vocabThreshold = c["vocabThreshold"].get<int>();
    m.config.useDistance = c["useDistance"].get<bool>();
    m.config.seed = c["seed"].get<std::uint64_t>();
    m.lexicon.shapes = j["shapes"].get<std::vector<std::string>>();
    for (const std::string& key : m.lexicon.shapes)
      m.lexicon.shapeGraphs.push_back(shapeFromKey(key));
    m.lexicon.shapeCounts = j["shapeCounts"].get<std::map<std::string, long>>();
    for (auto it = j["formShapes"].begin(); it != j["formShapes"].end(); ++it) {
      std::map<int, long>& byId = m.lexicon.formShapes[it.key()];
      for (auto e = it.value().begin(); e != it.value().end(); ++e) {
        int id = m.lexicon.shapeId(e.key());
        if (id < 0) throw FormatError("form references unknown shape: " + e.key());
        byId[id] = e.value().get<long>();
      }
    }
    m.lexicon.formBottom = j["formBottom"].get<std::map<std::string, long>>();
    m.labelVocab = j["labelVocab"].get<std::vector<std::string>>();
    m.formCounts = j["formCounts"].get<std::map<std::string, long>>();
    weightsFromJson(j["weights"]["tag"], m.tagW_);
    weightsFromJson(j["weights"]["edge"], m.edgeW_);
    weightsFromJson(j["weights"]["label"], m.labelW_);
    return m;
  }
};

inline void LinearModel::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write model file: " + path);
  out << ModelSerde::toJson(*this).dump(1) << "\n";
}

inline LinearModel LinearModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open model file: " + path);
  nlohmann::json j;
  in >> j;
  return ModelSerde::fromJson(j);
}

}  // namespace amcogs
