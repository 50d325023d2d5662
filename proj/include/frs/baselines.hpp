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
#include <map>
#include <numeric>

#include "frs/classifier.hpp"
#include "frs/folds.hpp"

namespace frs {

struct RankedFeatures {
  std::string method;
  /// Descending score; equal scores keep dataset order.
  std::vector<std::pair<std::string, double>> entries;
};

namespace detail {

/// Column j as small integer symbols: level index for coded features,
/// equal-width bin over the observed range for continuous and wide
/// discrete ones.
inline std::vector<std::uint32_t> symbolize(const Dataset& ds, std::size_t j, std::size_t bins) {
  const auto& fd = ds.feature(j);
  std::vector<std::uint32_t> out(ds.n_samples());
  std::vector<double> distinct = ds.column(j);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (fd.kind != FeatureKind::continuous && distinct.size() <= bins) {
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = static_cast<std::uint32_t>(std::lower_bound(distinct.begin(), distinct.end(), ds.value(i, j)) -
                                          distinct.begin());
    return out;
  }
  const double lo = distinct.front(), hi = distinct.back();
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (hi == lo) {
      out[i] = 0;
      continue;
    }
    auto b = static_cast<std::size_t>((ds.value(i, j) - lo) / (hi - lo) * static_cast<double>(bins));
    out[i] = static_cast<std::uint32_t>(std::min(b, bins - 1));
  }
  return out;
}

inline double entropy_of_counts(const std::vector<double>& counts, double n) {
  double h = 0.0;
  for (double c : counts)
    if (c > 0) h -= c / n * std::log2(c / n);
  return h;
}

inline double entropy(std::span<const std::uint32_t> a) {
  std::vector<double> counts;
  for (auto v : a) {
    if (v >= counts.size()) counts.resize(v + 1, 0.0);
    counts[v] += 1.0;
  }
  return entropy_of_counts(counts, static_cast<double>(a.size()));
}

inline double joint_entropy(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> counts;
  for (std::size_t i = 0; i < a.size(); ++i) counts[{a[i], b[i]}] += 1.0;
  double h = 0.0;
  const double n = static_cast<double>(a.size());
  for (const auto& [k, c] : counts) h -= c / n * std::log2(c / n);
  return h;
}

inline std::vector<std::uint32_t> label_symbols(const Dataset& ds) {
  std::vector<std::uint32_t> y(ds.n_samples());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<std::uint32_t>(ds.label_code(i));
  return y;
}

inline void require_labels(const Dataset& ds) {
  if (ds.label_set().size() < 2) throw Error(Errc::DegenerateLabels, "dataset '" + ds.name() + "' has one class");
}

inline RankedFeatures rank(std::string method, std::vector<std::string> names, const std::vector<double>& score) {
  std::vector<std::size_t> order(names.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  RankedFeatures r{std::move(method), {}};
  for (auto j : order) r.entries.emplace_back(names[j], score[j]);
  return r;
}

}  // namespace detail

/// H(label) - H(label | f) in bits per feature.
inline RankedFeatures info_gain_rank(const Dataset& ds, std::size_t bins = 10) {
  detail::require_labels(ds);
  if (bins < 2) throw Error(Errc::InvalidArgument, "need at least two bins");
  auto y = detail::label_symbols(ds);
  const double hy = detail::entropy(y);
  std::vector<double> score(ds.n_features());
  for (std::size_t j = 0; j < ds.n_features(); ++j) {
    auto x = detail::symbolize(ds, j, bins);
    double gain = hy + detail::entropy(x) - detail::joint_entropy(x, y);
    score[j] = std::clamp(gain, 0.0, hy);
  }
  return detail::rank("ig", ds.feature_names(), score);
}

/// Features scoring strictly above the mean score, in rank order.
inline std::vector<std::string> ig_select(const RankedFeatures& r) {
  if (r.entries.empty()) return {};
  double mean = 0.0;
  for (const auto& e : r.entries) mean += e.second;
  mean /= static_cast<double>(r.entries.size());
  std::vector<std::string> out;
  for (const auto& e : r.entries)
    if (e.second > mean) out.push_back(e.first);
  return out;
}

/// Symmetrical-uncertainty tables for correlation-based subset merit.
class CfsEvaluator {
 public:
  explicit CfsEvaluator(const Dataset& ds, std::size_t bins = 10) : names_(ds.feature_names()) {
    detail::require_labels(ds);
    const std::size_t d = ds.n_features();
    std::vector<std::vector<std::uint32_t>> x(d);
    std::vector<double> h(d);
    for (std::size_t j = 0; j < d; ++j) {
      x[j] = detail::symbolize(ds, j, bins);
      h[j] = detail::entropy(x[j]);
    }
    auto y = detail::label_symbols(ds);
    const double hy = detail::entropy(y);
    auto su = [](double ha, double hb, double hab) {
      return ha + hb == 0.0 ? 0.0 : std::clamp(2.0 * (ha + hb - hab) / (ha + hb), 0.0, 1.0);
    };
    rcf_.resize(d);
    rff_.assign(d, std::vector<double>(d, 1.0));
    for (std::size_t a = 0; a < d; ++a) {
      rcf_[a] = su(h[a], hy, detail::joint_entropy(x[a], y));
      for (std::size_t b = 0; b < a; ++b) rff_[a][b] = rff_[b][a] = su(h[a], h[b], detail::joint_entropy(x[a], x[b]));
    }
  }

  /// sum(r_cf) / sqrt(k + 2 * sum_{i<j} r_ff); 0 for the empty set.
  double merit(std::span<const std::size_t> subset) const {
    if (subset.empty()) return 0.0;
    double num = 0.0, ff = 0.0;
    for (std::size_t a = 0; a < subset.size(); ++a) {
      num += rcf_.at(subset[a]);
      for (std::size_t b = 0; b < a; ++b) ff += rff_[subset[a]][subset[b]];
    }
    const double den = std::sqrt(static_cast<double>(subset.size()) + 2.0 * ff);
    return den == 0.0 ? 0.0 : num / den;
  }

  double class_correlation(std::size_t j) const { return rcf_.at(j); }
  double feature_correlation(std::size_t a, std::size_t b) const { return rff_.at(a).at(b); }
  const std::vector<std::string>& names() const noexcept { return names_; }

 private:
  std::vector<std::string> names_;
  std::vector<double> rcf_;
  std::vector<std::vector<double>> rff_;
};

struct CfsResult {
  std::vector<std::string> selected;  // dataset order
  double merit = 0.0;
};

/// Forward best-first search over subsets, stopping after `patience`
/// consecutive expansions that fail to beat the best merit so far.
inline CfsResult cfs_select(const Dataset& ds, std::size_t bins = 10, std::size_t patience = 5) {
  if (ds.n_features() < 2) throw Error(Errc::InvalidArgument, "subset search needs at least two features");
  CfsEvaluator ev(ds, bins);
  const std::size_t d = ds.n_features();
  using Subset = std::vector<bool>;
  struct Open {
    double merit;
    std::size_t serial;
    Subset set;
  };
  auto indices = [](const Subset& s) {
    std::vector<std::size_t> v;
    for (std::size_t j = 0; j < s.size(); ++j)
      if (s[j]) v.push_back(j);
    return v;
  };
  std::vector<Open> open{{0.0, 0, Subset(d, false)}};
  std::set<Subset> seen{open[0].set};
  Subset best = open[0].set;
  double best_merit = 0.0;
  std::size_t stale = 0, serial = 1;
  while (!open.empty() && stale < patience) {
    // Highest merit first; earlier insertion wins ties.
    auto it = std::min_element(open.begin(), open.end(), [](const Open& a, const Open& b) {
      return a.merit != b.merit ? a.merit > b.merit : a.serial < b.serial;
    });
    Open node = std::move(*it);
    open.erase(it);
    bool improved = false;
    for (std::size_t j = 0; j < d; ++j) {
      if (node.set[j]) continue;
      Subset child = node.set;
      child[j] = true;
      if (!seen.insert(child).second) continue;
      auto idx = indices(child);
      double m = ev.merit(idx);
      open.push_back({m, serial++, child});
      if (m > best_merit + 1e-12) {
        best_merit = m;
        best = child;
        improved = true;
      }
    }
    stale = improved ? 0 : stale + 1;
  }
  CfsResult r;
  for (auto j : indices(best)) r.selected.push_back(ev.names()[j]);
  r.merit = best_merit;
  return r;
}

struct DwOptions {
  ClassifierSpec evaluator;  // default: random forest
  double delta = 0.005;
  std::size_t folds = 3;
  std::uint64_t seed = 1;
};

struct DwStep {
  std::string removed;
  double accuracy;
  bool accepted;
};

struct DwResult {
  RankedFeatures importance;
  std::vector<std::string> selected;  // importance order
  double accuracy = 0.0;
  std::vector<DwStep> trace;
};

/// Cross-validated accuracy of `spec` on `names`.
inline double cv_accuracy(const ClassifierSpec& spec, const NormalizedDataset& nd, std::span<const std::string> names,
                          std::size_t folds, std::uint64_t seed) {
  auto fold = stratified_folds(nd.label_codes(), folds, seed);
  std::size_t correct = 0;
  for (std::size_t f = 0; f < folds; ++f) {
    auto [tr, te] = split_fold(fold, f);
    auto train_part = nd.select_rows(tr);
    auto test_part = nd.select_rows(te);
    auto m = train(spec, train_part, names);
    auto pred = m.predict_all(test_part);
    for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == test_part.label_name(i);
  }
  return static_cast<double>(correct) / static_cast<double>(nd.n_samples());
}

/// Decision-tree importance ranking, then backward elimination of the
/// weakest feature while cross-validated accuracy falls by less than delta.
inline DwResult dw_select(const Dataset& ds, const DwOptions& opt = {}) {
  detail::require_labels(ds);
  if (!(opt.delta >= 0.0)) throw Error(Errc::InvalidArgument, "delta must be non-negative");
  auto nd = normalize(ds);
  auto all = nd.feature_names();
  auto ts = make_training_set(nd, all);
  std::vector<double> imp(ts.f, 0.0);
  std::vector<std::uint32_t> rows(ts.n);
  std::iota(rows.begin(), rows.end(), 0u);
  Rng rng(derive_seed(opt.seed, 0x7ee));
  DecisionTree::fit(ts, rows, {}, rng, &imp);

  DwResult r;
  r.importance = detail::rank("dw", all, imp);
  for (const auto& e : r.importance.entries) r.selected.push_back(e.first);
  r.accuracy = cv_accuracy(opt.evaluator, nd, r.selected, opt.folds, opt.seed);
  while (r.selected.size() > 1) {
    std::vector<std::string> trial(r.selected.begin(), r.selected.end() - 1);
    double acc = cv_accuracy(opt.evaluator, nd, trial, opt.folds, opt.seed);
    bool accept = std::max(0.0, r.accuracy - acc) < opt.delta;
    r.trace.push_back({r.selected.back(), acc, accept});
    if (!accept) break;
    r.selected = std::move(trial);
    r.accuracy = acc;
  }
  return r;
}

}  // namespace frs
