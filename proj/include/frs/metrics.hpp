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

#include <cstdint>
#include <span>
#include <string>

#include "frs/error.hpp"

namespace frs {

/// Binary confusion counts with phishing as the positive class.
struct ConfusionCounts {
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;

  std::uint64_t total() const noexcept { return tp + fp + tn + fn; }

  /// Counts with the roles of the two classes exchanged.
  ConfusionCounts swapped() const noexcept { return {tn, fn, tp, fp}; }

  ConfusionCounts& operator+=(const ConfusionCounts& o) noexcept {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
  }

  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

// 0/0 ratios are defined as 0.

inline double precision(const ConfusionCounts& c) noexcept {
  return c.tp + c.fp == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

inline double recall(const ConfusionCounts& c) noexcept {
  return c.tp + c.fn == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

inline double f_measure(const ConfusionCounts& c) noexcept {
  const double p = precision(c), r = recall(c);
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

inline double accuracy(const ConfusionCounts& c) noexcept {
  return c.total() == 0 ? 0.0 : static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

/// True when any of precision, recall, F-measure fell back to the 0/0 rule.
inline bool has_degenerate_ratio(const ConfusionCounts& c) noexcept {
  return c.tp + c.fp == 0 || c.tp + c.fn == 0 || precision(c) + recall(c) == 0.0;
}

/// Tallies predictions against truth; `positive` decides which labels count
/// as the positive class.
template <class IsPositive>
ConfusionCounts confusion(std::span<const std::string> truth, std::span<const std::string> predicted,
                          IsPositive&& positive) {
  if (truth.size() != predicted.size()) throw Error(Errc::DimensionMismatch, "truth and predictions differ in length");
  ConfusionCounts c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool t = positive(truth[i]), p = positive(predicted[i]);
    if (t && p)
      ++c.tp;
    else if (!t && p)
      ++c.fp;
    else if (!t && !p)
      ++c.tn;
    else
      ++c.fn;
  }
  return c;
}

}  // namespace frs
