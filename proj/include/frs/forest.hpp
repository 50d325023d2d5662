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

#include <cmath>

#include "frs/parallel.hpp"
#include "frs/tree.hpp"

namespace frs {

struct ForestParams {
  std::size_t trees = 100;
  std::size_t mtry = 0;  // 0 = floor(sqrt(features))
  std::size_t max_depth = 0;
  bool bootstrap = true;
};

inline std::size_t resolved_mtry(const ForestParams& p, std::size_t features) {
  if (p.mtry != 0) return std::min(p.mtry, features);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(features))));
}

class RandomForest {
 public:
  RandomForest() = default;

  /// Tree t draws its randomness from derive_seed(seed, t), so the fitted
  /// forest does not depend on the worker count.
  static RandomForest fit(const TrainingSet& ts, const ForestParams& p, std::uint64_t seed, unsigned threads) {
    if (p.trees == 0) throw Error(Errc::InvalidArgument, "forest needs at least one tree");
    RandomForest rf;
    rf.classes_ = ts.classes;
    rf.trees_.resize(p.trees);
    std::vector<std::vector<double>> imp(p.trees, std::vector<double>(ts.f, 0.0));
    DecisionTree::Params tp{resolved_mtry(p, ts.f), p.max_depth, 2};
    parallel_for(p.trees, threads, [&](std::size_t t) {
      Rng rng(derive_seed(seed, t));
      std::vector<std::uint32_t> rows(ts.n);
      for (std::size_t i = 0; i < ts.n; ++i)
        rows[i] = static_cast<std::uint32_t>(p.bootstrap ? rng.below(ts.n) : i);
      rf.trees_[t] = DecisionTree::fit(ts, std::move(rows), tp, rng, &imp[t]);
    });
    rf.importance_.assign(ts.f, 0.0);
    for (const auto& v : imp)
      for (std::size_t j = 0; j < ts.f; ++j) rf.importance_[j] += v[j] / static_cast<double>(ts.n * p.trees);
    return rf;
  }

  /// Mean of the trees' leaf distributions; argmax with ties to the lower code.
  std::size_t predict(std::span<const double> x) const {
    std::vector<double> acc(classes_, 0.0);
    for (const auto& t : trees_) {
      auto d = t.distribution(x);
      for (std::size_t c = 0; c < classes_; ++c) acc[c] += d[c];
    }
    return argmax_first(acc);
  }

  /// Mean impurity decrease per feature, in training column order.
  const std::vector<double>& importance() const noexcept { return importance_; }
  const std::vector<DecisionTree>& trees() const noexcept { return trees_; }

  nlohmann::json to_json() const {
    auto arr = nlohmann::json::array();
    for (const auto& t : trees_) arr.push_back(t.to_json());
    return {{"trees", arr}, {"importance", importance_}};
  }

  static RandomForest from_json(const nlohmann::json& j, std::size_t classes, std::size_t features) {
    RandomForest rf;
    rf.classes_ = classes;
    for (const auto& t : j.at("trees")) rf.trees_.push_back(DecisionTree::from_json(t, classes, features));
    rf.importance_ = j.at("importance").get<std::vector<double>>();
    if (rf.trees_.empty() || rf.importance_.size() != features)
      throw Error(Errc::MalformedDocument, "forest parameters have wrong shape");
    return rf;
  }

 private:
  std::size_t classes_ = 0;
  std::vector<DecisionTree> trees_;
  std::vector<double> importance_;
};

}  // namespace frs
