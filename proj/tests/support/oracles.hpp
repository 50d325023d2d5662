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

// Brute-force reference implementations used only by tests. Everything here
// is written straight from the definitions and shares no code with the
// library beyond the dataset containers.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "frs/dataset.hpp"

namespace frs::oracle {

inline double similarity(double x, double y) {
  double d = (x - y) * (x - y);
  return 1.0 - d < 0.0 ? 0.0 : 1.0 - d;
}

inline double tnorm(double x, double y) {
  double v = x + y - 1.0;
  return v > 0.0 ? v : 0.0;
}

inline double implication(double q, double s) {
  double v = 1.0 - q + s;
  return v < 1.0 ? v : 1.0;
}

/// Fold over features by repeated application, in the given order.
inline double feature_relation(const NormalizedDataset& ds, std::size_t m, std::size_t n,
                               const std::vector<std::size_t>& subset) {
  if (subset.empty()) return 1.0;
  double acc = similarity(ds.value(m, subset[0]), ds.value(n, subset[0]));
  for (std::size_t t = 1; t < subset.size(); ++t) acc = tnorm(acc, similarity(ds.value(m, subset[t]), ds.value(n, subset[t])));
  return acc;
}

inline double label_relation(const NormalizedDataset& ds, std::size_t m, std::size_t n) {
  if (ds.label_code(m) == ds.label_code(n)) return 1.0;
  const double k = static_cast<double>(ds.n_labels() - 1);
  return similarity(static_cast<double>(ds.label_code(m)) / k, static_cast<double>(ds.label_code(n)) / k);
}

struct Memberships {
  std::vector<double> lower, upper;
};

inline Memberships memberships(const NormalizedDataset& ds, const std::vector<std::size_t>& subset) {
  Memberships out;
  const std::size_t n = ds.n_samples();
  for (std::size_t m = 0; m < n; ++m) {
    double lo = 1.0, up = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == m) continue;
      double rf = feature_relation(ds, m, k, subset);
      double rl = label_relation(ds, m, k);
      lo = std::min(lo, implication(rf, rl));
      up = std::max(up, tnorm(rf, rl));
    }
    out.lower.push_back(lo);
    out.upper.push_back(up);
  }
  return out;
}

inline double gamma(const NormalizedDataset& ds, const std::vector<std::size_t>& subset) {
  auto mu = memberships(ds, subset).lower;
  double s = 0.0;
  for (double v : mu) s += v;
  return s / static_cast<double>(mu.size());
}

/// Smallest subset (lexicographic among equal sizes) with gamma >= full - eps.
inline std::vector<std::size_t> minimal_reduct(const NormalizedDataset& ds, double eps) {
  const std::size_t d = ds.n_features();
  std::vector<std::size_t> all(d);
  std::iota(all.begin(), all.end(), 0);
  const double full = gamma(ds, all);
  std::vector<std::vector<std::size_t>> by_size[16];
  for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t j = 0; j < d; ++j)
      if (mask & (1u << j)) s.push_back(j);
    by_size[s.size()].push_back(s);
  }
  for (std::size_t k = 0; k <= d; ++k) {
    auto& group = by_size[k];
    std::sort(group.begin(), group.end());
    for (const auto& s : group)
      if (gamma(ds, s) >= full - eps) return s;
  }
  return all;
}

/// Random normalized dataset; values snap to a grid of `levels` points when
/// levels > 1, otherwise uniform in [0,1].
inline NormalizedDataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t d, std::size_t labels,
                                        int levels = 0, const std::string& name = "random") {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> level(0, std::max(1, levels - 1));
  std::uniform_int_distribution<std::size_t> lab(0, labels - 1);
  std::vector<FeatureDescriptor> feats(d);
  for (std::size_t j = 0; j < d; ++j) {
    feats[j].name = "f" + std::to_string(j);
    feats[j].kind = levels > 1 ? FeatureKind::categorical : FeatureKind::continuous;
    feats[j].observed_min = 0.0;
    feats[j].observed_max = 1.0;
  }
  std::vector<double> vals(n * d);
  for (auto& v : vals) v = levels > 1 ? static_cast<double>(level(rng)) / (levels - 1) : unit(rng);
  std::vector<std::size_t> codes(n);
  for (std::size_t i = 0; i < n; ++i) codes[i] = i < labels ? i : lab(rng);
  std::vector<std::string> names;
  for (std::size_t c = 0; c < labels; ++c) names.push_back("L" + std::to_string(c));
  return NormalizedDataset(name, std::move(feats), std::move(vals), std::move(codes), std::move(names));
}

/// Builds a normalized dataset from explicit rows and label codes.
inline NormalizedDataset make_dataset(const std::vector<std::vector<double>>& rows, const std::vector<std::size_t>& codes,
                                      std::size_t n_labels = 2, const std::string& name = "fixture") {
  const std::size_t d = rows.empty() ? 0 : rows[0].size();
  std::vector<FeatureDescriptor> feats(d);
  for (std::size_t j = 0; j < d; ++j) {
    feats[j].name = "f" + std::to_string(j);
    feats[j].kind = FeatureKind::continuous;
    feats[j].observed_max = 1.0;
  }
  std::vector<double> vals;
  for (const auto& r : rows) vals.insert(vals.end(), r.begin(), r.end());
  std::vector<std::string> names;
  for (std::size_t c = 0; c < n_labels; ++c) names.push_back("L" + std::to_string(c));
  return NormalizedDataset(name, std::move(feats), std::move(vals), codes, std::move(names));
}

}  // namespace frs::oracle
