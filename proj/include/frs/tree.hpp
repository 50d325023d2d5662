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

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "frs/dataset.hpp"
#include "frs/error.hpp"
#include "frs/rng.hpp"
#include "json.hpp"

namespace frs {

/// Dense row-major design matrix with integer class codes.
struct TrainingSet {
  std::size_t n = 0;
  std::size_t f = 0;
  std::size_t classes = 0;
  std::vector<double> x;
  std::vector<std::size_t> y;
  std::vector<std::string> feature_names;
  std::vector<std::string> label_names;

  std::span<const double> row(std::size_t i) const { return {x.data() + i * f, f}; }
};

/// Copies the named columns of `ds`, in the order given.
inline TrainingSet make_training_set(const NormalizedDataset& ds, std::span<const std::string> names) {
  if (names.empty()) throw Error(Errc::EmptySubset, "no features to train on");
  auto idx = ds.indices_of(names);
  TrainingSet ts;
  ts.n = ds.n_samples();
  ts.f = idx.size();
  ts.classes = ds.n_labels();
  ts.feature_names.assign(names.begin(), names.end());
  ts.label_names = ds.label_names();
  ts.y = ds.label_codes();
  ts.x.resize(ts.n * ts.f);
  for (std::size_t i = 0; i < ts.n; ++i)
    for (std::size_t j = 0; j < ts.f; ++j) ts.x[i * ts.f + j] = ds.value(i, idx[j]);
  return ts;
}

inline std::size_t argmax_first(std::span<const double> v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

/// CART classification tree, Gini impurity, binary splits `x[f] <= t`.
class DecisionTree {
 public:
  struct Params {
    std::size_t mtry = 0;       // features tried per node; 0 = all
    std::size_t max_depth = 0;  // 0 = unlimited
    std::size_t min_split = 2;
  };

  struct Node {
    int feature = -1;  // -1 for leaves
    double threshold = 0.0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::vector<double> dist;  // class proportions at the node
  };

  DecisionTree() = default;

  /// Grows a tree on `rows` (repeats allowed). Adds each split's weighted
  /// impurity decrease to `importance` when given.
  static DecisionTree fit(const TrainingSet& ts, std::vector<std::uint32_t> rows, const Params& p, Rng& rng,
                          std::vector<double>* importance = nullptr) {
    DecisionTree tree;
    tree.classes_ = ts.classes;
    Grower g{ts, p, rng, importance, tree.nodes_, {}, {}};
    g.grow(std::move(rows));
    return tree;
  }

  std::span<const double> distribution(std::span<const double> x) const {
    std::uint32_t k = 0;
    while (nodes_[k].feature >= 0)
      k = x[static_cast<std::size_t>(nodes_[k].feature)] <= nodes_[k].threshold ? nodes_[k].left : nodes_[k].right;
    return nodes_[k].dist;
  }

  std::size_t predict(std::span<const double> x) const { return argmax_first(distribution(x)); }

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::size_t classes() const noexcept { return classes_; }

  nlohmann::json to_json() const {
    auto arr = nlohmann::json::array();
    for (const auto& nd : nodes_) {
      if (nd.feature < 0)
        arr.push_back({{"dist", nd.dist}});
      else
        arr.push_back({{"f", nd.feature}, {"t", nd.threshold}, {"l", nd.left}, {"r", nd.right}, {"dist", nd.dist}});
    }
    return arr;
  }

  static DecisionTree from_json(const nlohmann::json& j, std::size_t classes, std::size_t features) {
    DecisionTree tree;
    tree.classes_ = classes;
    if (!j.is_array() || j.empty()) throw Error(Errc::MalformedDocument, "tree must be a nonempty node array");
    for (const auto& e : j) {
      Node nd;
      nd.dist = e.at("dist").get<std::vector<double>>();
      if (nd.dist.size() != classes) throw Error(Errc::MalformedDocument, "leaf distribution has wrong arity");
      if (e.contains("f")) {
        nd.feature = e.at("f").get<int>();
        nd.threshold = e.at("t").get<double>();
        nd.left = e.at("l").get<std::uint32_t>();
        nd.right = e.at("r").get<std::uint32_t>();
        if (nd.feature < 0 || static_cast<std::size_t>(nd.feature) >= features || nd.left >= j.size() ||
            nd.right >= j.size())
          throw Error(Errc::MalformedDocument, "tree node out of range");
      }
      tree.nodes_.push_back(std::move(nd));
    }
    return tree;
  }

 private:
  struct Grower {
    const TrainingSet& ts;
    const Params& p;
    Rng& rng;
    std::vector<double>* importance;
    std::vector<Node>& nodes;
    std::vector<std::pair<double, std::uint32_t>> buf;
    std::vector<std::size_t> order;

    struct Task {
      std::uint32_t node;
      std::vector<std::uint32_t> rows;
      std::size_t depth;
    };

    static double sum_sq_ratio(const std::vector<double>& counts, double total) {
      double s = 0.0;
      for (double c : counts) s += c * c;
      return s / total;
    }

    void grow(std::vector<std::uint32_t> rows) {
      order.resize(ts.f);
      std::vector<Task> stack;
      nodes.emplace_back();
      stack.push_back({0, std::move(rows), 0});
      while (!stack.empty()) {
        Task t = std::move(stack.back());
        stack.pop_back();
        split(std::move(t), stack);
      }
    }

    void split(Task t, std::vector<Task>& stack) {
      const std::size_t k = ts.classes;
      const double n = static_cast<double>(t.rows.size());
      std::vector<double> counts(k, 0.0);
      for (auto r : t.rows) counts[ts.y[r]] += 1.0;
      {
        auto& d = nodes[t.node].dist;
        d.resize(k);
        for (std::size_t c = 0; c < k; ++c) d[c] = counts[c] / n;
      }
      const bool pure = std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0; }) <= 1;
      if (pure || t.rows.size() < p.min_split || (p.max_depth > 0 && t.depth >= p.max_depth)) return;

      // Candidate order: natural when every feature is tried, sampled otherwise.
      for (std::size_t j = 0; j < ts.f; ++j) order[j] = j;
      const std::size_t mtry = p.mtry == 0 ? ts.f : std::min(p.mtry, ts.f);
      const bool sample = mtry < ts.f;

      const double parent = sum_sq_ratio(counts, n);
      double best = parent + 1e-12;
      int best_f = -1;
      double best_t = 0.0;
      std::vector<double> left(k), right(k);
      for (std::size_t tried = 0; tried < ts.f; ++tried) {
        if (sample) {
          std::size_t pick = tried + static_cast<std::size_t>(rng.below(ts.f - tried));
          std::swap(order[tried], order[pick]);
        }
        if (tried >= mtry && best_f >= 0) break;
        const std::size_t f = order[tried];
        buf.clear();
        for (auto r : t.rows) buf.emplace_back(ts.x[r * ts.f + f], static_cast<std::uint32_t>(ts.y[r]));
        std::sort(buf.begin(), buf.end());
        if (buf.front().first == buf.back().first) continue;
        std::fill(left.begin(), left.end(), 0.0);
        right = counts;
        double nl = 0.0;
        for (std::size_t i = 0; i + 1 < buf.size(); ++i) {
          left[buf[i].second] += 1.0;
          right[buf[i].second] -= 1.0;
          nl += 1.0;
          if (buf[i].first == buf[i + 1].first) continue;
          double score = sum_sq_ratio(left, nl) + sum_sq_ratio(right, n - nl);
          if (score > best) {
            best = score;
            best_f = static_cast<int>(f);
            best_t = buf[i].first + (buf[i + 1].first - buf[i].first) / 2.0;
          }
        }
      }
      if (best_f < 0) return;

      std::vector<std::uint32_t> lrows, rrows;
      for (auto r : t.rows) (ts.x[r * ts.f + static_cast<std::size_t>(best_f)] <= best_t ? lrows : rrows).push_back(r);
      if (importance) (*importance)[static_cast<std::size_t>(best_f)] += best - parent;
      const auto li = static_cast<std::uint32_t>(nodes.size());
      nodes.emplace_back();
      nodes.emplace_back();
      nodes[t.node].feature = best_f;
      nodes[t.node].threshold = best_t;
      nodes[t.node].left = li;
      nodes[t.node].right = li + 1;
      stack.push_back({li + 1, std::move(rrows), t.depth + 1});
      stack.push_back({li, std::move(lrows), t.depth + 1});
    }
  };

  std::size_t classes_ = 0;
  std::vector<Node> nodes_;
};

}  // namespace frs
