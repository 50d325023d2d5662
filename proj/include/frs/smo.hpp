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

#include "frs/tree.hpp"

namespace frs {

struct SmoParams {
  double c = 1.0;
  double tolerance = 1e-3;
  std::size_t max_steps = 2'000'000;
};

/// Linear two-class SVM, f(x) = w.x - b.
struct LinearMachine {
  std::vector<double> w;
  double b = 0.0;
  std::vector<double> alpha;  // training multipliers; not persisted
  std::size_t steps = 0;
  bool converged = false;

  double decision(std::span<const double> x) const {
    double s = -b;
    for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * x[j];
    return s;
  }
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

/// Platt's sequential minimal optimization for a linear kernel. Errors are
/// cached for unbounded multipliers and recomputed from w for the rest.
class SmoSolver {
 public:
  SmoSolver(const TrainingSet& ts, std::vector<int> y, const SmoParams& p, std::uint64_t seed)
      : ts_(ts), y_(std::move(y)), p_(p), rng_(seed), alpha_(ts.n, 0.0), err_(ts.n, 0.0), w_(ts.f, 0.0) {}

  LinearMachine solve() {
    bool examine_all = true;
    std::size_t changed = 0;
    for (int round = 0; round < 8; ++round) {
      while ((changed > 0 || examine_all) && steps_ < p_.max_steps) {
        changed = 0;
        for (std::size_t i = 0; i < ts_.n; ++i)
          if (examine_all || unbounded(i)) changed += examine(i);
        if (examine_all)
          examine_all = false;
        else if (changed == 0)
          examine_all = true;
      }
      // Rebuild w from the multipliers so drift from incremental updates
      // cannot hide a violation, then recheck every sample exactly.
      std::fill(w_.begin(), w_.end(), 0.0);
      for (std::size_t i = 0; i < ts_.n; ++i)
        if (alpha_[i] > 0.0)
          for (std::size_t j = 0; j < ts_.f; ++j) w_[j] += alpha_[i] * y_[i] * ts_.x[i * ts_.f + j];
      refresh_cache();
      bool clean = true;
      for (std::size_t i = 0; i < ts_.n && clean; ++i) clean = !violates(i);
      if (clean || steps_ >= p_.max_steps) {
        converged_ = clean;
        break;
      }
      examine_all = true;
    }
    return {w_, b_, alpha_, steps_, converged_};
  }

 private:
  static constexpr double kStepEps = 1e-12;

  bool unbounded(std::size_t i) const { return alpha_[i] > 0.0 && alpha_[i] < p_.c; }

  double error(std::size_t i) const {
    if (unbounded(i)) return err_[i];
    return detail::dot(w_, ts_.row(i)) - b_ - y_[i];
  }

  bool violates(std::size_t i) const {
    double r = error(i) * y_[i];
    return (r < -p_.tolerance && alpha_[i] < p_.c) || (r > p_.tolerance && alpha_[i] > 0.0);
  }

  void refresh_cache() {
    for (std::size_t i = 0; i < ts_.n; ++i)
      if (unbounded(i)) err_[i] = detail::dot(w_, ts_.row(i)) - b_ - y_[i];
  }

  std::size_t examine(std::size_t i2) {
    if (!violates(i2)) return 0;
    const double e2 = error(i2);
    std::size_t n_unbounded = 0, best = i2;
    double gap = -1.0;
    for (std::size_t i = 0; i < ts_.n; ++i) {
      if (!unbounded(i)) continue;
      ++n_unbounded;
      double g = std::fabs(err_[i] - e2);
      if (g > gap) {
        gap = g;
        best = i;
      }
    }
    if (n_unbounded > 1 && take_step(best, i2)) return 1;
    const std::size_t n = ts_.n;
    std::size_t start = static_cast<std::size_t>(rng_.below(n));
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t i1 = (start + k) % n;
      if (unbounded(i1) && take_step(i1, i2)) return 1;
    }
    start = static_cast<std::size_t>(rng_.below(n));
    for (std::size_t k = 0; k < n; ++k)
      if (take_step((start + k) % n, i2)) return 1;
    return 0;
  }

  bool take_step(std::size_t i1, std::size_t i2) {
    if (i1 == i2 || steps_ >= p_.max_steps) return false;
    const double c = p_.c;
    const double a1 = alpha_[i1], a2 = alpha_[i2];
    const double y1 = y_[i1], y2 = y_[i2], s = y1 * y2;
    const double e1 = error(i1), e2 = error(i2);
    double lo, hi;
    if (s < 0) {
      lo = std::max(0.0, a2 - a1);
      hi = std::min(c, c + a2 - a1);
    } else {
      lo = std::max(0.0, a1 + a2 - c);
      hi = std::min(c, a1 + a2);
    }
    if (lo >= hi) return false;
    const auto x1 = ts_.row(i1), x2 = ts_.row(i2);
    const double k11 = detail::dot(x1, x1), k12 = detail::dot(x1, x2), k22 = detail::dot(x2, x2);
    const double eta = k11 + k22 - 2.0 * k12;
    double a2n;
    if (eta > 0.0) {
      a2n = std::clamp(a2 + y2 * (e1 - e2) / eta, lo, hi);
    } else {
      const double f1 = y1 * (e1 + b_) - a1 * k11 - s * a2 * k12;
      const double f2 = y2 * (e2 + b_) - s * a1 * k12 - a2 * k22;
      const double l1 = a1 + s * (a2 - lo), h1 = a1 + s * (a2 - hi);
      const double lobj = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 + 0.5 * lo * lo * k22 + s * lo * l1 * k12;
      const double hobj = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 + 0.5 * hi * hi * k22 + s * hi * h1 * k12;
      if (lobj < hobj - kStepEps)
        a2n = lo;
      else if (lobj > hobj + kStepEps)
        a2n = hi;
      else
        a2n = a2;
    }
    if (std::fabs(a2n - a2) < kStepEps * (a2n + a2 + kStepEps)) return false;
    double a1n = a1 + s * (a2 - a2n);
    const double snap = kStepEps * c;
    if (a1n < snap) a1n = 0.0;
    if (a1n > c - snap) a1n = c;
    if (a2n < snap) a2n = 0.0;
    if (a2n > c - snap) a2n = c;

    const double d1 = y1 * (a1n - a1), d2 = y2 * (a2n - a2);
    const double b1 = e1 + d1 * k11 + d2 * k12 + b_;
    const double b2 = e2 + d1 * k12 + d2 * k22 + b_;
    if (a1n > 0.0 && a1n < c)
      b_ = b1;
    else if (a2n > 0.0 && a2n < c)
      b_ = b2;
    else
      b_ = (b1 + b2) / 2.0;
    for (std::size_t j = 0; j < ts_.f; ++j) w_[j] += d1 * x1[j] + d2 * x2[j];
    alpha_[i1] = a1n;
    alpha_[i2] = a2n;
    refresh_cache();
    ++steps_;
    return true;
  }

  const TrainingSet& ts_;
  std::vector<int> y_;
  SmoParams p_;
  Rng rng_;
  std::vector<double> alpha_, err_, w_;
  double b_ = 0.0;
  std::size_t steps_ = 0;
  bool converged_ = false;
};

}  // namespace detail

/// Trains `target` against the rest.
inline LinearMachine train_linear_machine(const TrainingSet& ts, std::size_t target, const SmoParams& p,
                                          std::uint64_t seed) {
  if (!(p.c > 0.0) || !(p.tolerance > 0.0)) throw Error(Errc::InvalidArgument, "smo needs C > 0 and tolerance > 0");
  std::vector<int> y(ts.n);
  for (std::size_t i = 0; i < ts.n; ++i) y[i] = ts.y[i] == target ? 1 : -1;
  return detail::SmoSolver(ts, std::move(y), p, seed).solve();
}

/// Per-sample KKT violation of a trained machine: how far y*f(x) sits from
/// the side of 1 its multiplier requires.
inline std::vector<double> kkt_residuals(const LinearMachine& m, const TrainingSet& ts, std::size_t target, double c) {
  std::vector<double> out(ts.n);
  for (std::size_t i = 0; i < ts.n; ++i) {
    const double y = ts.y[i] == target ? 1.0 : -1.0;
    const double r = y * m.decision(ts.row(i)) - 1.0;
    const double a = m.alpha.at(i);
    if (a <= 0.0)
      out[i] = std::max(0.0, -r);
    else if (a >= c)
      out[i] = std::max(0.0, r);
    else
      out[i] = std::fabs(r);
  }
  return out;
}

/// One machine for two classes (class 1 positive), one per class otherwise.
class SmoClassifier {
 public:
  SmoClassifier() = default;

  static SmoClassifier fit(const TrainingSet& ts, const SmoParams& p, std::uint64_t seed) {
    SmoClassifier clf;
    clf.classes_ = ts.classes;
    if (ts.classes == 2) {
      clf.machines_.push_back(train_linear_machine(ts, 1, p, derive_seed(seed, 1)));
    } else {
      for (std::size_t k = 0; k < ts.classes; ++k)
        clf.machines_.push_back(train_linear_machine(ts, k, p, derive_seed(seed, k)));
    }
    return clf;
  }

  std::size_t predict(std::span<const double> x) const {
    if (machines_.size() == 1) return machines_[0].decision(x) > 0.0 ? 1 : 0;
    std::vector<double> d(machines_.size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = machines_[k].decision(x);
    return argmax_first(d);
  }

  const std::vector<LinearMachine>& machines() const noexcept { return machines_; }

  nlohmann::json to_json() const {
    auto arr = nlohmann::json::array();
    for (const auto& m : machines_) arr.push_back({{"w", m.w}, {"b", m.b}});
    return {{"machines", arr}};
  }

  static SmoClassifier from_json(const nlohmann::json& j, std::size_t classes, std::size_t features) {
    SmoClassifier clf;
    clf.classes_ = classes;
    for (const auto& m : j.at("machines")) {
      LinearMachine lm;
      lm.w = m.at("w").get<std::vector<double>>();
      lm.b = m.at("b").get<double>();
      lm.converged = true;
      if (lm.w.size() != features) throw Error(Errc::MalformedDocument, "smo weight arity mismatch");
      clf.machines_.push_back(std::move(lm));
    }
    if (clf.machines_.size() != (classes == 2 ? 1u : classes))
      throw Error(Errc::MalformedDocument, "smo machine count mismatch");
    return clf;
  }

 private:
  std::size_t classes_ = 0;
  std::vector<LinearMachine> machines_;
};

}  // namespace frs
