/*
 * Copyright 2026 The frs-select Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <optional>
#include <variant>

#include "frs/forest.hpp"
#include "frs/mlp.hpp"
#include "frs/smo.hpp"

namespace frs {

enum class ClassifierKind { majority, random_forest, mlp, smo };

constexpr std::string_view to_string(ClassifierKind k) noexcept {
  switch (k) {
    case ClassifierKind::majority: return "majority";
    case ClassifierKind::random_forest: return "rf";
    case ClassifierKind::mlp: return "mlp";
    case ClassifierKind::smo: return "smo";
  }
  return "unknown";
}

inline std::optional<ClassifierKind> parse_classifier_kind(std::string_view s) {
  if (s == "majority") return ClassifierKind::majority;
  if (s == "rf" || s == "random_forest") return ClassifierKind::random_forest;
  if (s == "mlp") return ClassifierKind::mlp;
  if (s == "smo" || s == "svm") return ClassifierKind::smo;
  return std::nullopt;
}

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::random_forest;
  ForestParams forest;
  MlpParams mlp;
  SmoParams smo;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0 = default_threads(); never changes the result
};

/// Predicts the most frequent training class. Ties go to the later class.
struct MajorityModel {
  std::size_t label = 0;
};

inline constexpr int kModelFormatVersion = 1;

struct Model {
  ClassifierSpec spec;
  /// Training columns, sorted by name.
  std::vector<std::string> features;
  std::vector<std::string> labels;
  std::variant<MajorityModel, RandomForest, Mlp, SmoClassifier> params;

  ClassifierKind kind() const noexcept { return spec.kind; }

  /// `row` holds values for `features`, in that order.
  std::size_t predict_code(std::span<const double> row) const {
    if (row.size() != features.size())
      throw Error(Errc::ArityMismatch, "model expects " + std::to_string(features.size()) + " values, got " +
                                           std::to_string(row.size()));
    for (double v : row)
      if (!std::isfinite(v)) throw Error(Errc::NonFiniteValue, "non-finite input to predict");
    return std::visit(
        [&](const auto& m) -> std::size_t {
          if constexpr (std::is_same_v<std::decay_t<decltype(m)>, MajorityModel>)
            return m.label;
          else
            return m.predict(row);
        },
        params);
  }

  const std::string& predict(std::span<const double> row) const { return labels.at(predict_code(row)); }

  /// Predicted label names for every sample of `ds`, columns matched by name.
  std::vector<std::string> predict_all(const NormalizedDataset& ds) const {
    std::vector<std::size_t> idx;
    for (const auto& f : features) {
      auto j = ds.feature_index(f);
      if (!j) throw Error(Errc::FeatureUniverseMismatch, "dataset '" + ds.name() + "' lacks feature '" + f + "'");
      idx.push_back(*j);
    }
    std::vector<std::string> out(ds.n_samples());
    std::vector<double> row(idx.size());
    for (std::size_t i = 0; i < ds.n_samples(); ++i) {
      for (std::size_t k = 0; k < idx.size(); ++k) row[k] = ds.value(i, idx[k]);
      out[i] = predict(row);
    }
    return out;
  }
};

inline Model train(const ClassifierSpec& spec, const NormalizedDataset& ds, std::span<const std::string> subset) {
  std::vector<std::string> names(subset.begin(), subset.end());
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end())
    throw Error(Errc::InvalidArgument, "duplicate feature in training subset");
  TrainingSet ts = make_training_set(ds, names);
  std::vector<std::size_t> counts(ts.classes, 0);
  for (auto c : ts.y) ++counts[c];
  if (std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }) < 2)
    throw Error(Errc::DegenerateLabels, "training data for '" + ds.name() + "' has fewer than two classes");

  Model m{spec, names, ts.label_names, MajorityModel{}};
  const unsigned threads = spec.threads ? spec.threads : default_threads();
  switch (spec.kind) {
    case ClassifierKind::majority: {
      std::size_t best = 0;
      for (std::size_t c = 1; c < counts.size(); ++c)
        if (counts[c] >= counts[best]) best = c;
      m.params = MajorityModel{best};
      break;
    }
    case ClassifierKind::random_forest:
      m.params = RandomForest::fit(ts, spec.forest, spec.seed, threads);
      break;
    case ClassifierKind::mlp:
      m.params = Mlp::fit(ts, spec.mlp, spec.seed);
      break;
    case ClassifierKind::smo:
      m.params = SmoClassifier::fit(ts, spec.smo, spec.seed);
      break;
  }
  return m;
}

inline nlohmann::json hyperparameters_json(const ClassifierSpec& s) {
  switch (s.kind) {
    case ClassifierKind::majority: return nlohmann::json::object();
    case ClassifierKind::random_forest:
      return {{"trees", s.forest.trees},
              {"mtry", s.forest.mtry},
              {"max_depth", s.forest.max_depth},
              {"bootstrap", s.forest.bootstrap}};
    case ClassifierKind::mlp:
      return {{"hidden", s.mlp.hidden},
              {"learning_rate", s.mlp.learning_rate},
              {"momentum", s.mlp.momentum},
              {"epochs", s.mlp.epochs},
              {"init_range", s.mlp.init_range}};
    case ClassifierKind::smo:
      return {{"c", s.smo.c}, {"tolerance", s.smo.tolerance}, {"max_steps", s.smo.max_steps}};
  }
  return nlohmann::json::object();
}

inline void apply_hyperparameters(ClassifierSpec& s, const nlohmann::json& h) {
  auto get = [&](const char* key, auto& field) {
    if (h.contains(key)) field = h.at(key).get<std::decay_t<decltype(field)>>();
  };
  switch (s.kind) {
    case ClassifierKind::majority: break;
    case ClassifierKind::random_forest:
      get("trees", s.forest.trees);
      get("mtry", s.forest.mtry);
      get("max_depth", s.forest.max_depth);
      get("bootstrap", s.forest.bootstrap);
      break;
    case ClassifierKind::mlp:
      get("hidden", s.mlp.hidden);
      get("learning_rate", s.mlp.learning_rate);
      get("momentum", s.mlp.momentum);
      get("epochs", s.mlp.epochs);
      get("init_range", s.mlp.init_range);
      break;
    case ClassifierKind::smo:
      get("c", s.smo.c);
      get("tolerance", s.smo.tolerance);
      get("max_steps", s.smo.max_steps);
      break;
  }
}

inline nlohmann::json to_json(const Model& m) {
  nlohmann::json params = std::visit(
      [](const auto& p) -> nlohmann::json {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, MajorityModel>)
          return {{"label", p.label}};
        else
          return p.to_json();
      },
      m.params);
  return {{"format", "frs-model"},
          {"version", kModelFormatVersion},
          {"kind", std::string(to_string(m.spec.kind))},
          {"seed", m.spec.seed},
          {"hyperparameters", hyperparameters_json(m.spec)},
          {"features", m.features},
          {"labels", m.labels},
          {"parameters", params}};
}

inline Model model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "frs-model") throw Error(Errc::MalformedDocument, "not a model document");
    if (j.at("version").get<int>() != kModelFormatVersion)
      throw Error(Errc::MalformedDocument, "unsupported model version " + j.at("version").dump());
    auto kind = parse_classifier_kind(j.at("kind").get<std::string>());
    if (!kind) throw Error(Errc::MalformedDocument, "unknown model kind");
    Model m;
    m.spec.kind = *kind;
    m.spec.seed = j.at("seed").get<std::uint64_t>();
    apply_hyperparameters(m.spec, j.at("hyperparameters"));
    m.features = j.at("features").get<std::vector<std::string>>();
    m.labels = j.at("labels").get<std::vector<std::string>>();
    const auto& p = j.at("parameters");
    const std::size_t k = m.labels.size(), f = m.features.size();
    switch (*kind) {
      case ClassifierKind::majority:
        m.params = MajorityModel{p.at("label").get<std::size_t>()};
        if (std::get<MajorityModel>(m.params).label >= k) throw Error(Errc::MalformedDocument, "label out of range");
        break;
      case ClassifierKind::random_forest: m.params = RandomForest::from_json(p, k, f); break;
      case ClassifierKind::mlp: {
        auto net = Mlp::from_json(p);
        if (net.inputs() != f || net.outputs() != k) throw Error(Errc::MalformedDocument, "mlp shape mismatch");
        m.params = std::move(net);
        break;
      }
      case ClassifierKind::smo: m.params = SmoClassifier::from_json(p, k, f); break;
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::MalformedDocument, std::string("model document: ") + e.what());
  }
}

}  // namespace frs
