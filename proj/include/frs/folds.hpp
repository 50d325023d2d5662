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

#include <span>
#include <vector>

#include "frs/error.hpp"
#include "frs/rng.hpp"

namespace frs {

/// Fold index per sample. Each class is shuffled on its own stream, the
/// classes are laid end to end and dealt round-robin, so every fold gets a
/// near-equal share of each class. Pure function of (codes, k, seed).
inline std::vector<std::size_t> stratified_folds(std::span<const std::size_t> codes, std::size_t k,
                                                 std::uint64_t seed) {
  if (k < 2 || k > codes.size())
    throw Error(Errc::InvalidArgument, "fold count must lie in [2, samples], got " + std::to_string(k));
  std::size_t classes = 0;
  for (auto c : codes) classes = std::max(classes, c + 1);
  std::vector<std::vector<std::size_t>> by_class(classes);
  for (std::size_t i = 0; i < codes.size(); ++i) by_class[codes[i]].push_back(i);
  std::vector<std::size_t> fold(codes.size());
  std::size_t pos = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    Rng rng(derive_seed(seed, c));
    rng.shuffle(by_class[c]);
    for (auto i : by_class[c]) fold[i] = pos++ % k;
  }
  return fold;
}

/// Indices of samples in / out of fold f.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_fold(std::span<const std::size_t> fold,
                                                                                 std::size_t f) {
  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < fold.size(); ++i) (fold[i] == f ? out.second : out.first).push_back(i);
  return out;
}

}  // namespace frs
