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
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "frs/dataset.hpp"
#include "frs/error.hpp"

namespace frs {

/// Tolerance for "greater than zero" and dependency comparisons.
inline constexpr double kEpsilon = 1e-9;

namespace detail {

inline void require_unit(double x, const char* op) {
  if (!(x >= 0.0 && x <= 1.0))
    throw Error(Errc::OutOfRange, std::string(op) + " argument " + std::to_string(x) + " outside [0,1]");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Crisp rough sets

/// 1 when every feature value agrees, 0 otherwise.
inline int crisp_relation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw Error(Errc::ArityMismatch, "rows of arity " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  return std::equal(a.begin(), a.end(), b.begin()) ? 1 : 0;
}

/// Equivalence classes of the crisp relation with the lower and upper
/// approximations of the region {s : f(s) <= 0}.
struct CrispPartition {
  /// Sample indices per class, classes ordered by their first member.
  std::vector<std::vector<std::size_t>> classes;
  /// Indices into `classes` lying wholly inside the region.
  std::vector<std::size_t> lower;
  /// Indices into `classes` touching the region.
  std::vector<std::size_t> upper;
};

/// `decision[i]` is f(s_i); a sample is inside the region when it is <= 0.
inline CrispPartition crisp_approximations(const Dataset& ds, std::span<const double> decision) {
  if (decision.size() != ds.n_samples())
    throw Error(Errc::DimensionMismatch, "decision values do not match sample count");
  for (const auto& f : ds.features())
    if (!f.is_discrete_kind()) throw Error(Errc::NonDiscreteFeature, "feature '" + f.name + "' is continuous");

  CrispPartition out;
  std::vector<std::size_t> order(ds.n_samples());
  std::iota(order.begin(), order.end(), 0);
  // lexicographic row order groups equal rows; stable keeps members ascending
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto ra = ds.row(a), rb = ds.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });
  for (std::size_t k = 0; k < order.size();) {
    std::vector<std::size_t> cls{order[k]};
    std::size_t j = k + 1;
    while (j < order.size() && crisp_relation(ds.row(order[k]), ds.row(order[j])) == 1) cls.push_back(order[j++]);
    out.classes.push_back(std::move(cls));
    k = j;
  }
  std::sort(out.classes.begin(), out.classes.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (std::size_t c = 0; c < out.classes.size(); ++c) {
    const auto& cls = out.classes[c];
    bool all = std::all_of(cls.begin(), cls.end(), [&](std::size_t i) { return decision[i] <= 0.0; });
    bool any = std::any_of(cls.begin(), cls.end(), [&](std::size_t i) { return decision[i] <= 0.0; });
    if (all) out.lower.push_back(c);
    if (any) out.upper.push_back(c);
  }
  return out;
}

template <class Decision>
  requires std::invocable<Decision, std::size_t>
CrispPartition crisp_approximations(const Dataset& ds, Decision&& f) {
  std::vector<double> decision(ds.n_samples());
  for (std::size_t i = 0; i < decision.size(); ++i) decision[i] = static_cast<double>(f(i));
  return crisp_approximations(ds, std::span<const double>(decision));
}

// ---------------------------------------------------------------------------
// Fuzzy operators

/// max(0, 1 - (x - y)^2)
inline double per_feature_similarity(double x, double y) {
  detail::require_unit(x, "similarity");
  detail::require_unit(y, "similarity");
  const double d = x - y;
  return std::max(0.0, 1.0 - d * d);
}

/// Lukasiewicz t-norm max(0, x + y - 1).
inline double lukasiewicz_tnorm(double x, double y) {
  detail::require_unit(x, "t-norm");
  detail::require_unit(y, "t-norm");
  return std::max(0.0, x + y - 1.0);
}

/// Lukasiewicz implicator min(1, 1 - q + s).
inline double implicator(double q, double s) {
  detail::require_unit(q, "implicator");
  detail::require_unit(s, "implicator");
  return std::min(1.0, 1.0 - q + s);
}

/// Left fold of the t-norm over the values, in order.
inline double tnorm_fold(std::span<const double> values) {
  if (values.empty()) throw Error(Errc::EmptyInput, "t-norm fold over no values");
  double acc = values[0];
  detail::require_unit(acc, "t-norm");
  for (std::size_t i = 1; i < values.size(); ++i) acc = lukasiewicz_tnorm(acc, values[i]);
  return acc;
}

/// max(0, sum(v) - (k - 1)); equal to tnorm_fold for values in [0,1].
inline double tnorm_closed_form(std::span<const double> values) {
  if (values.empty()) throw Error(Errc::EmptyInput, "t-norm fold over no values");
  double sum = 0.0;
  for (double v : values) {
    detail::require_unit(v, "t-norm");
    sum += v;
  }
  return std::max(0.0, sum - static_cast<double>(values.size() - 1));
}

/// Operator pair used by the relation and membership code.
struct Lukasiewicz {
  static double tnorm(double x, double y) { return lukasiewicz_tnorm(x, y); }
  static double implication(double q, double s) { return implicator(q, s); }
};

// ---------------------------------------------------------------------------
// Relations and memberships

/// Dense symmetric n x n similarity matrix.
struct SimilarityMatrix {
  std::size_t n = 0;
  std::vector<double> values;
  /// Feature indices the relation was built over (empty for labels).
  std::vector<std::size_t> subset;
  bool over_labels = false;

  double operator()(std::size_t m, std::size_t k) const { return values[m * n + k]; }
};

/// Tag selecting the label relation.
struct LabelsTag {};
inline constexpr LabelsTag kLabels{};

/// R_B(m, n): t-norm fold of per-feature similarities over `subset`.
/// Dense and O(n^2 |subset|); meant for modest sample counts.
inline SimilarityMatrix relation_matrix(const NormalizedDataset& ds, std::span<const std::size_t> subset) {
  if (subset.empty()) throw Error(Errc::EmptySubset, "relation over an empty feature subset");
  for (auto j : subset)
    if (j >= ds.n_features()) throw Error(Errc::ArityMismatch, "feature index out of range");
  SimilarityMatrix r;
  r.n = ds.n_samples();
  r.subset.assign(subset.begin(), subset.end());
  r.values.assign(r.n * r.n, 1.0);
  std::vector<double> sims(subset.size());
  for (std::size_t m = 0; m < r.n; ++m) {
    for (std::size_t k = m + 1; k < r.n; ++k) {
      for (std::size_t t = 0; t < subset.size(); ++t)
        sims[t] = per_feature_similarity(ds.value(m, subset[t]), ds.value(k, subset[t]));
      const double v = tnorm_fold(sims);
      r.values[m * r.n + k] = v;
      r.values[k * r.n + m] = v;
    }
  }
  return r;
}

/// R_L(m, n): 1 for equal labels, otherwise the similarity of the evenly
/// spaced label codes (0 for two-class problems).
inline SimilarityMatrix relation_matrix(const NormalizedDataset& ds, LabelsTag) {
  SimilarityMatrix r;
  r.n = ds.n_samples();
  r.over_labels = true;
  r.values.assign(r.n * r.n, 1.0);
  for (std::size_t m = 0; m < r.n; ++m) {
    for (std::size_t k = m + 1; k < r.n; ++k) {
      const auto a = ds.label_code(m), b = ds.label_code(k);
      const double v = a == b ? 1.0 : per_feature_similarity(ds.scaled_label(a), ds.scaled_label(b));
      r.values[m * r.n + k] = v;
      r.values[k * r.n + m] = v;
    }
  }
  return r;
}

struct MembershipVector {
  std::vector<double> mu_lower;
  std::vector<double> mu_upper;
  std::vector<std::size_t> subset;
};

/// mu_U(m) = sup_{n != m} T(R_F, R_L) and mu_L(m) = inf_{n != m} I(R_F, R_L).
/// An empty supremum is 0 and an empty infimum is 1.
template <class Ops = Lukasiewicz>
MembershipVector memberships(const SimilarityMatrix& rf, const SimilarityMatrix& rl) {
  if (rf.n != rl.n) throw Error(Errc::DimensionMismatch, "relations over different universes");
  if (!rl.over_labels || rf.over_labels)
    throw Error(Errc::InvalidArgument, "memberships expects a feature relation and a label relation");
  MembershipVector mv;
  mv.subset = rf.subset;
  mv.mu_lower.assign(rf.n, 1.0);
  mv.mu_upper.assign(rf.n, 0.0);
  for (std::size_t m = 0; m < rf.n; ++m) {
    double lo = 1.0, up = 0.0;
    for (std::size_t k = 0; k < rf.n; ++k) {
      if (k == m) continue;
      lo = std::min(lo, Ops::implication(rf(m, k), rl(m, k)));
      up = std::max(up, Ops::tnorm(rf(m, k), rl(m, k)));
    }
    mv.mu_lower[m] = lo;
    mv.mu_upper[m] = up;
  }
  return mv;
}

}  // namespace frs
