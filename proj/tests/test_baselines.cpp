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

#include <gtest/gtest.h>

#include <random>

#include "frs/baselines.hpp"
#include "frs/io.hpp"

namespace frs {
namespace {

Dataset table(const std::string& csv) { return parse_csv_dataset(csv, "t"); }

double score_of(const RankedFeatures& r, const std::string& name) {
  for (const auto& [n, s] : r.entries)
    if (n == name) return s;
  ADD_FAILURE() << "missing " << name;
  return -1;
}

/// n samples: "sig" decides the label, the rest are uniform noise.
Dataset planted(std::size_t n, std::size_t noise, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::string csv = "sig";
  for (std::size_t k = 0; k < noise; ++k) csv += ",n" + std::to_string(k);
  csv += ",y\n";
  for (std::size_t i = 0; i < n; ++i) {
    double s = u(rng);
    csv += std::to_string(s);
    for (std::size_t k = 0; k < noise; ++k) csv += "," + std::to_string(u(rng));
    csv += s > 0.5 ? ",phish\n" : ",legit\n";
  }
  return table(csv);
}

TEST(InfoGain, HandComputedEntropies) {
  auto ds = table("f1,f2,y\n0,0,p\n0,0,p\n1,0,p\n1,1,n\n");
  auto r = info_gain_rank(ds);
  const double hy = 2.0 - 0.75 * std::log2(3.0);
  EXPECT_NEAR(score_of(r, "f2"), hy, 1e-12);
  EXPECT_NEAR(score_of(r, "f1"), hy - 0.5, 1e-12);
  EXPECT_EQ(r.entries.front().first, "f2");
  EXPECT_EQ(r.method, "ig");
}

TEST(InfoGain, CopyOfLabelAndConstant) {
  auto ds = table("copy,flat,y\n0,5,a\n1,5,b\n2,5,c\n0,5,a\n");
  auto r = info_gain_rank(ds);
  const double hy = 1.5;
  EXPECT_NEAR(score_of(r, "copy"), hy, 1e-12);
  EXPECT_EQ(score_of(r, "flat"), 0.0);
}

TEST(InfoGain, BoundsAndPermutation) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    auto ds = planted(80, 4, rng());
    auto r = info_gain_rank(ds);
    auto ys = detail::label_symbols(ds);
    const double hy = detail::entropy(ys);
    for (const auto& [n, s] : r.entries) {
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, hy);
    }
    std::vector<std::string> rev = ds.feature_names();
    std::reverse(rev.begin(), rev.end());
    auto r2 = info_gain_rank(ds.select(rev));
    for (const auto& [n, s] : r.entries) EXPECT_EQ(score_of(r2, n), s);
  }
}

TEST(InfoGain, SelectAboveMean) {
  RankedFeatures r{"ig", {{"a", 0.9}, {"b", 0.5}, {"c", 0.1}, {"d", 0.1}}};
  EXPECT_EQ(ig_select(r), (std::vector<std::string>{"a", "b"}));
  EXPECT_THROW(info_gain_rank(table("x,y\n0,a\n1,a\n")), Error);
}

TEST(InfoGain, ContinuousIsBinned) {
  auto ds = table("v,y\n0.0,a\n0.05,a\n0.95,b\n1.0,b\n");
  auto r2 = info_gain_rank(ds, 2);
  EXPECT_NEAR(score_of(r2, "v"), 1.0, 1e-12);
}

TEST(Cfs, SingletonMeritIsClassCorrelation) {
  auto ds = planted(100, 3, 9);
  CfsEvaluator ev(ds);
  for (std::size_t j = 0; j < ds.n_features(); ++j) {
    std::vector<std::size_t> s{j};
    EXPECT_NEAR(ev.merit(s), ev.class_correlation(j), 1e-15);
  }
}

TEST(Cfs, IdenticalCopiesKeepOne) {
  auto base = planted(150, 2, 4);
  std::string csv = "sig,copy,n0,n1,y\n";
  for (std::size_t i = 0; i < base.n_samples(); ++i)
    csv += std::to_string(base.value(i, 0)) + "," + std::to_string(base.value(i, 0)) + "," +
           std::to_string(base.value(i, 1)) + "," + std::to_string(base.value(i, 2)) + "," + base.label(i) + "\n";
  auto r = cfs_select(table(csv));
  auto has = [&](const char* n) { return std::count(r.selected.begin(), r.selected.end(), n); };
  EXPECT_EQ(has("sig") + has("copy"), 1);
}

TEST(Cfs, FindsPlantedFeatureLikeBruteForce) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto ds = planted(200, 7, seed);
    CfsEvaluator ev(ds);
    double best = -1;
    std::vector<std::size_t> arg;
    for (unsigned mask = 1; mask < (1u << 8); ++mask) {
      std::vector<std::size_t> s;
      for (std::size_t j = 0; j < 8; ++j)
        if (mask & (1u << j)) s.push_back(j);
      double m = ev.merit(s);
      if (m > best) {
        best = m;
        arg = s;
      }
    }
    EXPECT_TRUE(std::count(arg.begin(), arg.end(), 0u));
    auto r = cfs_select(ds);
    EXPECT_TRUE(std::count(r.selected.begin(), r.selected.end(), "sig"));
    EXPECT_LE(r.merit, best + 1e-12);
    EXPECT_GE(r.merit, ev.class_correlation(0) - 1e-12);
  }
}

TEST(Cfs, Errors) {
  EXPECT_THROW(cfs_select(table("x,y\n0,a\n1,b\n")), Error);
  EXPECT_THROW(cfs_select(table("x,z,y\n0,1,a\n1,0,a\n")), Error);
}

DwOptions quick_dw(double delta) {
  DwOptions o;
  o.evaluator.forest.trees = 15;
  o.evaluator.threads = 1;
  o.delta = delta;
  return o;
}

TEST(Dw, PlantedSignalSurvivesAlone) {
  auto r = dw_select(planted(150, 4, 11), quick_dw(0.005));
  EXPECT_EQ(r.selected, (std::vector<std::string>{"sig"}));
  EXPECT_EQ(r.importance.entries.front().first, "sig");
}

TEST(Dw, DeltaExtremes) {
  auto ds = planted(90, 3, 12);
  EXPECT_EQ(dw_select(ds, quick_dw(1.0)).selected.size(), 1u);
  auto full = dw_select(ds, quick_dw(0.0)).selected;
  std::sort(full.begin(), full.end());
  auto names = ds.feature_names();
  std::sort(names.begin(), names.end());
  EXPECT_EQ(full, names);
}

TEST(Dw, Deterministic) {
  auto ds = planted(90, 3, 13);
  auto a = dw_select(ds, quick_dw(0.005));
  auto b = dw_select(ds, quick_dw(0.005));
  EXPECT_EQ(a.selected, b.selected);
  EXPECT_EQ(a.accuracy, b.accuracy);
}

TEST(Folds, StratifiedAndPure) {
  std::vector<std::size_t> codes;
  for (int i = 0; i < 103; ++i) codes.push_back(i % 3 == 0 ? 1 : 0);
  auto f1 = stratified_folds(codes, 10, 5);
  EXPECT_EQ(f1, stratified_folds(codes, 10, 5));
  EXPECT_NE(f1, stratified_folds(codes, 10, 6));
  std::vector<std::size_t> pos(10, 0), size(10, 0);
  for (std::size_t i = 0; i < codes.size(); ++i) {
    ++size[f1[i]];
    pos[f1[i]] += codes[i];
  }
  for (std::size_t f = 0; f < 10; ++f) {
    EXPECT_GE(size[f], 10u);
    EXPECT_LE(size[f], 11u);
    EXPECT_GE(pos[f], 3u);
    EXPECT_LE(pos[f], 4u);
  }
  EXPECT_THROW(stratified_folds(codes, 1, 0), Error);
}

}  // namespace
}  // namespace frs
