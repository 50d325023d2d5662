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
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "frs/dataset.hpp"
#include "frs/error.hpp"
#include "frs/fuzzy.hpp"
#include "frs/parallel.hpp"

namespace frs {

/// Exact equality margin for tie-breaking between candidate dependencies.
inline constexpr double kTieTolerance = 1e-12;

/// Lower-approximation memberships for arbitrary feature subsets.
///
/// Uses mu_L(s) = min over differently labelled t of min(1, D_B(s,t) + R_L(s,t)),
/// with D_B the sum of squared differences over B, which is the Lukasiewicz
/// fold and implicator written in closed form. Pairs with equal labels
/// contribute 1 and are skipped. Samples sharing feature row and label are
/// merged into one cell. The empty subset gives D = 0 (everything
/// indistinguishable).
class LowerApproximation {
 public:
  explicit LowerApproximation(const NormalizedDataset& ds, unsigned threads = default_threads())
      : ds_(&ds), threads_(std::max(1u, threads)) {
    const std::size_t n = ds.n_samples();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (ds.label_code(a) != ds.label_code(b)) return ds.label_code(a) < ds.label_code(b);
      auto ra = ds.row(a), rb = ds.row(b);
      return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    });
    cell_of_.assign(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t s = order[k];
      bool same = k > 0 && ds.label_code(order[k - 1]) == ds.label_code(s) &&
                  std::equal(ds.row(s).begin(), ds.row(s).end(), ds.row(order[k - 1]).begin());
      if (!same) {
        cell_label_.push_back(ds.label_code(s));
        auto r = ds.row(s);
        cell_values_.insert(cell_values_.end(), r.begin(), r.end());
      }
      cell_of_[s] = cell_label_.size() - 1;
    }
    const std::size_t cells = cell_label_.size();
    group_end_.assign(cells, cells);
    for (std::size_t c = cells; c-- > 0;)
      group_end_[c] = (c + 1 < cells && cell_label_[c + 1] == cell_label_[c]) ? group_end_[c + 1] : c + 1;
    const std::size_t k = ds.n_labels();
    label_sim_.assign(k * k, 1.0);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b)
        if (a != b) label_sim_[a * k + b] = per_feature_similarity(ds.scaled_label(a), ds.scaled_label(b));
  }

  const NormalizedDataset& dataset() const noexcept { return *ds_; }
  std::size_t n_cells() const noexcept { return cell_label_.size(); }
  unsigned threads() const noexcept { return threads_; }

  /// Per-sample mu_L under the subset (feature indices, any order).
  std::vector<double> sample_lower(std::span<const std::size_t> subset) const {
    auto base = sorted(subset);
    auto cells = run(base, {}, nullptr).base;
    return expand(cells);
  }

  /// Dependency degree: mean mu_L, summed in ascending sample order.
  double gamma(std::span<const std::size_t> subset) const { return mean(sample_lower(subset)); }

  /// Per-cell memberships for a base subset and for base + each candidate.
  struct StepResult {
    std::vector<double> base;
    std::vector<std::vector<double>> with_candidate;
  };

  /// Surviving (unsaturated) partner lists for incremental search.
  struct PairState {
    bool materialized = false;
    std::vector<std::vector<std::uint32_t>> partners;
  };

  /// Evaluates `base` and every `base + candidate`. When `state` is given,
  /// pairs already saturated under `base` are dropped from it, and it is
  /// used in place of the full pair set; pass the same state only with
  /// growing bases.
  StepResult run(std::span<const std::size_t> base, std::span<const std::size_t> candidates,
                 PairState* state) const {
    const std::size_t cells = n_cells(), d = ds_->n_features(), nc = candidates.size();
    const std::size_t k = ds_->n_labels();
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads_, std::max<std::size_t>(cells, 1)));
    std::vector<std::vector<double>> local(workers, std::vector<double>((nc + 1) * cells, 1.0));
    const bool use_state = state != nullptr && state->materialized;
    const bool materialize = state != nullptr && !state->materialized && !base.empty();
    if (materialize) state->partners.assign(cells, {});

    parallel_for(workers, workers, [&](std::size_t w) {
      double* mu = local[w].data();
      std::vector<std::uint32_t> keep;
      for (std::size_t a = w; a < cells; a += workers) {
        const double* xa = &cell_values_[a * d];
        const std::size_t la = cell_label_[a];
        auto visit = [&](std::size_t b) -> bool {
          const double* xb = &cell_values_[b * d];
          const double rl = label_sim_[la * k + cell_label_[b]];
          const double thr = 1.0 - rl;
          double dist = 0.0;
          for (auto j : base) {
            const double t = xa[j] - xb[j];
            dist += t * t;
          }
          if (dist >= thr) return false;
          const double v0 = dist + rl;
          mu[a] = std::min(mu[a], v0);
          mu[b] = std::min(mu[b], v0);
          for (std::size_t c = 0; c < nc; ++c) {
            const std::size_t j = candidates[c];
            const double t = xa[j] - xb[j];
            const double v = dist + t * t;
            if (v < thr) {
              double* m = mu + (c + 1) * cells;
              const double val = v + rl;
              m[a] = std::min(m[a], val);
              m[b] = std::min(m[b], val);
            }
          }
          return true;
        };
        if (use_state) {
          auto& list = state->partners[a];
          std::size_t out = 0;
          for (std::size_t i = 0; i < list.size(); ++i)
            if (visit(list[i])) list[out++] = list[i];
          list.resize(out);
        } else {
          keep.clear();
          for (std::size_t b = group_end_[a]; b < cells; ++b)
            if (visit(b) && materialize) keep.push_back(static_cast<std::uint32_t>(b));
          if (materialize) state->partners[a] = keep;
        }
      }
    });
    if (materialize) state->materialized = true;

    StepResult res;
    res.base.assign(cells, 1.0);
    res.with_candidate.assign(nc, std::vector<double>(cells, 1.0));
    for (const auto& buf : local) {
      for (std::size_t a = 0; a < cells; ++a) res.base[a] = std::min(res.base[a], buf[a]);
      for (std::size_t c = 0; c < nc; ++c)
        for (std::size_t a = 0; a < cells; ++a)
          res.with_candidate[c][a] = std::min(res.with_candidate[c][a], buf[(c + 1) * cells + a]);
    }
    return res;
  }

  /// Expands per-cell values to per-sample values.
  std::vector<double> expand(std::span<const double> cell_values) const {
    std::vector<double> out(cell_of_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = cell_values[cell_of_[i]];
    return out;
  }

  /// Mean of per-cell values over samples, in ascending sample order.
  double mean_over_samples(std::span<const double> cell_values) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < cell_of_.size(); ++i) sum += cell_values[cell_of_[i]];
    return sum / static_cast<double>(cell_of_.size());
  }

  static std::vector<std::size_t> sorted(std::span<const std::size_t> subset) {
    std::vector<std::size_t> out(subset.begin(), subset.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  static double mean(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
  }

  const NormalizedDataset* ds_;
  unsigned threads_;
  std::vector<std::size_t> cell_of_;
  std::vector<std::size_t> cell_label_;
  std::vector<double> cell_values_;
  std::vector<std::size_t> group_end_;
  std::vector<double> label_sim_;
};

// ---------------------------------------------------------------------------

enum class ReductMode { quickreduct, core, exhaustive };

constexpr std::string_view to_string(ReductMode m) noexcept {
  switch (m) {
    case ReductMode::quickreduct: return "quickreduct";
    case ReductMode::core: return "core";
    case ReductMode::exhaustive: return "exhaustive";
  }
  return "quickreduct";
}

struct ReductStep {
  std::string feature;
  double gamma = 0.0;
  /// No single feature raised the dependency at this step.
  bool plateau = false;
};

struct Reduct {
  std::string dataset;
  ReductMode mode = ReductMode::quickreduct;
  std::vector<std::string> selected;
  double gamma = 0.0;
  double gamma_full = 0.0;
  std::vector<ReductStep> trace;
  /// All features of the dataset the reduct was computed on.
  std::vector<std::string> universe;
};

struct SearchOptions {
  double epsilon = kEpsilon;
  unsigned threads = default_threads();
};

namespace detail {

inline void require_labels(const NormalizedDataset& ds) {
  if (ds.n_labels() < 2)
    throw Error(Errc::DegenerateLabels, "dataset '" + ds.name() + "' has a single decision class");
}

inline void require_subset(const NormalizedDataset& ds, std::span<const std::size_t> subset) {
  if (subset.empty()) throw Error(Errc::EmptySubset, "empty feature subset");
  for (auto j : subset)
    if (j >= ds.n_features()) throw Error(Errc::ArityMismatch, "feature index out of range");
}

inline std::vector<std::size_t> all_features(const NormalizedDataset& ds) {
  std::vector<std::size_t> all(ds.n_features());
  std::iota(all.begin(), all.end(), 0);
  return all;
}

inline std::vector<std::string> names_of(const NormalizedDataset& ds, std::span<const std::size_t> idx) {
  std::vector<std::string> out;
  for (auto j : idx) out.push_back(ds.feature(j).name);
  return out;
}

}  // namespace detail

/// Mean lower-approximation membership over the universe.
inline double dependency_degree(const NormalizedDataset& ds, std::span<const std::size_t> subset,
                                unsigned threads = default_threads()) {
  detail::require_subset(ds, subset);
  return LowerApproximation(ds, threads).gamma(subset);
}

inline double dependency_degree(const NormalizedDataset& ds, std::span<const std::string> subset,
                                unsigned threads = default_threads()) {
  auto idx = ds.indices_of(subset);
  return dependency_degree(ds, std::span<const std::size_t>(idx), threads);
}

/// Samples whose lower membership exceeds epsilon.
inline std::vector<std::size_t> positive_samples(const NormalizedDataset& ds, std::span<const std::size_t> subset,
                                                 double epsilon = kEpsilon, unsigned threads = default_threads()) {
  detail::require_subset(ds, subset);
  auto mu = LowerApproximation(ds, threads).sample_lower(subset);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mu[i] > epsilon) out.push_back(i);
  return out;
}

/// Greedy forward search. Each step adds the feature with the largest
/// dependency (first in feature order on ties) until the dependency of the
/// full feature set is reached within epsilon. Steps where nothing improves
/// still add the best candidate and are marked as plateaus.
inline Reduct quickreduct(const NormalizedDataset& ds, const SearchOptions& opt = {}) {
  detail::require_labels(ds);
  if (ds.n_features() == 0) throw Error(Errc::EmptySubset, "dataset has no features");
  LowerApproximation engine(ds, opt.threads);
  const auto all = detail::all_features(ds);

  Reduct r;
  r.dataset = ds.name();
  r.mode = ReductMode::quickreduct;
  r.universe = ds.feature_names();
  r.gamma_full = engine.gamma(all);

  LowerApproximation::PairState state;
  std::vector<std::size_t> chosen;
  std::vector<bool> used(ds.n_features(), false);
  double current = engine.gamma({});
  while (current < r.gamma_full - opt.epsilon && chosen.size() < ds.n_features()) {
    std::vector<std::size_t> candidates;
    for (auto j : all)
      if (!used[j]) candidates.push_back(j);
    auto base = LowerApproximation::sorted(chosen);
    auto step = engine.run(base, candidates, &state);
    std::size_t best = candidates.front();
    double best_gamma = -1.0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const double g = engine.mean_over_samples(step.with_candidate[c]);
      if (g > best_gamma + kTieTolerance) {
        best_gamma = g;
        best = candidates[c];
      }
    }
    const bool plateau = best_gamma <= current + opt.epsilon;
    used[best] = true;
    chosen.push_back(best);
    current = best_gamma;
    r.trace.push_back({ds.feature(best).name, best_gamma, plateau});
  }
  r.selected = detail::names_of(ds, chosen);
  r.gamma = current;
  return r;
}

/// Features whose removal from the full set drops at least one sample's
/// lower membership to epsilon or below. Returned in feature order.
inline std::vector<std::string> core_features(const NormalizedDataset& ds, const SearchOptions& opt = {}) {
  detail::require_labels(ds);
  LowerApproximation engine(ds, opt.threads);
  const auto all = detail::all_features(ds);
  auto count_positive = [&](std::span<const std::size_t> subset) {
    auto mu = engine.sample_lower(subset);
    return std::count_if(mu.begin(), mu.end(), [&](double v) { return v > opt.epsilon; });
  };
  const auto full = count_positive(all);
  std::vector<std::string> core;
  for (auto f : all) {
    std::vector<std::size_t> rest;
    for (auto j : all)
      if (j != f) rest.push_back(j);
    if (count_positive(rest) < full) core.push_back(ds.feature(f).name);
  }
  return core;
}

/// Reduct made of the core features, with the cumulative dependency traced in
/// feature order.
inline Reduct core_reduct(const NormalizedDataset& ds, const SearchOptions& opt = {}) {
  Reduct r;
  r.dataset = ds.name();
  r.mode = ReductMode::core;
  r.universe = ds.feature_names();
  r.selected = core_features(ds, opt);
  LowerApproximation engine(ds, opt.threads);
  r.gamma_full = engine.gamma(detail::all_features(ds));
  std::vector<std::size_t> prefix;
  r.gamma = engine.gamma({});
  for (const auto& name : r.selected) {
    prefix.push_back(*ds.feature_index(name));
    r.gamma = engine.gamma(prefix);
    r.trace.push_back({name, r.gamma, false});
  }
  return r;
}

inline constexpr std::size_t kExhaustiveLimit = 14;

/// Smallest subset reaching the full dependency within epsilon, first in
/// lexicographic feature order among equal sizes.
inline Reduct exhaustive_reduct(const NormalizedDataset& ds, std::size_t max_features = kExhaustiveLimit,
                                const SearchOptions& opt = {}) {
  detail::require_labels(ds);
  if (max_features > kExhaustiveLimit || ds.n_features() > max_features)
    throw Error(Errc::TooManyFeatures, std::to_string(ds.n_features()) + " features exceed the exhaustive limit " +
                                           std::to_string(std::min(max_features, kExhaustiveLimit)));
  LowerApproximation engine(ds, opt.threads);
  const std::size_t d = ds.n_features();
  Reduct r;
  r.dataset = ds.name();
  r.mode = ReductMode::exhaustive;
  r.universe = ds.feature_names();
  r.gamma_full = engine.gamma(detail::all_features(ds));

  std::vector<std::size_t> found;
  bool done = engine.gamma({}) >= r.gamma_full - opt.epsilon;
  for (std::size_t k = 1; k <= d && !done; ++k) {
    std::vector<std::size_t> comb(k);
    std::iota(comb.begin(), comb.end(), 0);
    for (;;) {
      if (engine.gamma(comb) >= r.gamma_full - opt.epsilon) {
        found = comb;
        done = true;
        break;
      }
      std::size_t i = k;
      while (i > 0 && comb[i - 1] == d - k + i - 1) --i;
      if (i == 0) break;
      ++comb[i - 1];
      for (std::size_t t = i; t < k; ++t) comb[t] = comb[t - 1] + 1;
    }
  }
  r.selected = detail::names_of(ds, found);
  std::vector<std::size_t> prefix;
  r.gamma = engine.gamma({});
  for (auto j : found) {
    prefix.push_back(j);
    r.gamma = engine.gamma(prefix);
    r.trace.push_back({ds.feature(j).name, r.gamma, false});
  }
  return r;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const Reduct& r) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& s : r.trace) trace.push_back({{"feature", s.feature}, {"gamma", s.gamma}, {"plateau", s.plateau}});
  return {{"dataset", r.dataset}, {"mode", std::string(to_string(r.mode))},
          {"selected", r.selected}, {"gamma", r.gamma},
          {"gamma_full", r.gamma_full}, {"trace", trace},
          {"universe", r.universe}};
}

/// Any subset report: reducts and baseline selections share this shape.
struct SelectionDocument {
  std::string dataset;
  std::string mode;
  std::vector<std::string> selected;
  /// Empty when the document does not list the dataset's features.
  std::vector<std::string> universe;
};

inline SelectionDocument parse_selection_document(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("selected") || !j["selected"].is_array())
    throw Error(Errc::MalformedDocument, "subset report needs a 'selected' array");
  SelectionDocument doc;
  try {
    doc.dataset = j.value("dataset", std::string{});
    doc.mode = j.value("mode", std::string{});
    doc.selected = j["selected"].get<std::vector<std::string>>();
    if (j.contains("universe") && !j["universe"].is_null())
      doc.universe = j["universe"].get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::MalformedDocument, e.what());
  }
  return doc;
}

inline Reduct reduct_from_json(const nlohmann::json& j) {
  Reduct r;
  try {
    r.dataset = j.at("dataset").get<std::string>();
    auto mode = j.at("mode").get<std::string>();
    if (mode == "quickreduct") r.mode = ReductMode::quickreduct;
    else if (mode == "core") r.mode = ReductMode::core;
    else if (mode == "exhaustive") r.mode = ReductMode::exhaustive;
    else throw Error(Errc::MalformedDocument, "unknown reduct mode '" + mode + "'");
    r.selected = j.at("selected").get<std::vector<std::string>>();
    r.gamma = j.at("gamma").get<double>();
    r.gamma_full = j.at("gamma_full").get<double>();
    for (const auto& s : j.at("trace"))
      r.trace.push_back({s.at("feature").get<std::string>(), s.at("gamma").get<double>(), s.value("plateau", false)});
    if (j.contains("universe")) r.universe = j["universe"].get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::MalformedDocument, e.what());
  }
  return r;
}

}  // namespace frs
