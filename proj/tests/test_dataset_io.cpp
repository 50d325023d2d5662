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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "frs/io.hpp"
#include "support/oracles.hpp"

namespace frs {
namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::InvalidArgument;
}

TEST(Csv, MinimalFile) {
  auto ds = parse_csv_dataset("f,label\n0.5,1\n", "tiny");
  EXPECT_EQ(ds.n_samples(), 1u);
  EXPECT_EQ(ds.n_features(), 1u);
  EXPECT_EQ(ds.label(0), "1");
}

TEST(Csv, InfersKinds) {
  auto ds = parse_csv_dataset(
      "bin,cat,disc,cont,y\n"
      "-1,-1,0,0.5,a\n"
      "1,0,20,0.25,b\n"
      "1,1,40,1.5,a\n",
      "kinds");
  EXPECT_EQ(ds.feature(0).kind, FeatureKind::binary);
  EXPECT_EQ(ds.feature(1).kind, FeatureKind::categorical);
  EXPECT_EQ(ds.feature(1).levels, (std::vector<double>{-1, 0, 1}));
  EXPECT_EQ(ds.feature(3).kind, FeatureKind::continuous);
  EXPECT_EQ(ds.feature(3).observed_min, 0.25);
  EXPECT_EQ(ds.feature(3).observed_max, 1.5);
}

TEST(Csv, IntegerWideRangeIsDiscrete) {
  std::string text = "n,y\n";
  for (int i = 0; i < 15; ++i) text += std::to_string(i * 3) + "," + (i % 2 ? "p" : "q") + "\n";
  auto ds = parse_csv_dataset(text, "d");
  EXPECT_EQ(ds.feature(0).kind, FeatureKind::discrete);
}

TEST(Csv, SchemaHintsOverrideInference) {
  LoadOptions opt;
  opt.schema_hints["a"] = FeatureKind::continuous;
  auto ds = parse_csv_dataset("a,y\n0,p\n1,q\n", "h", opt);
  EXPECT_EQ(ds.feature(0).kind, FeatureKind::continuous);
}

TEST(Csv, LabelColumnAndDrops) {
  LoadOptions opt;
  opt.label_column = "cls";
  opt.drop_columns = {"id"};
  auto ds = parse_csv_dataset("id,cls,x\n1,a,0.1\n2,b,0.9\n", "l", opt);
  EXPECT_EQ(ds.feature_names(), (std::vector<std::string>{"x"}));
  EXPECT_EQ(ds.labels(), (std::vector<std::string>{"a", "b"}));
}

TEST(Csv, QuotedFieldsAndCrlf) {
  auto ds = parse_csv_dataset("\"a,b\",y\r\n\"1\",\"x \"\"q\"\"\"\r\n2,z\r\n", "q");
  EXPECT_EQ(ds.feature(0).name, "a,b");
  EXPECT_EQ(ds.label(0), "x \"q\"");
}

TEST(Csv, Errors) {
  EXPECT_EQ(code_of([] { parse_csv_dataset("", "e"); }), Errc::EmptyFile);
  EXPECT_EQ(code_of([] { parse_csv_dataset("a,y\n", "e"); }), Errc::EmptyFile);
  EXPECT_EQ(code_of([] { parse_csv_dataset("a,y\n1,p\n?,q\n", "e"); }), Errc::MissingValue);
  EXPECT_EQ(code_of([] { parse_csv_dataset("a,y\n1,p\n,q\n", "e"); }), Errc::MissingValue);
  EXPECT_EQ(code_of([] { parse_csv_dataset("a,y\n1,p\n2\n", "e"); }), Errc::RaggedRow);
  LoadOptions opt;
  opt.label_column = "nope";
  EXPECT_EQ(code_of([&] { parse_csv_dataset("a,y\n1,p\n", "e", opt); }), Errc::UnknownLabelColumn);
  EXPECT_EQ(code_of([] { load_csv("/definitely/not/here.csv"); }), Errc::FileNotFound);
  EXPECT_TRUE(is_input_error(Errc::MissingValue));
  EXPECT_FALSE(is_input_error(Errc::DegenerateLabels));
}

TEST(Csv, RoundTrip) {
  std::mt19937_64 rng(5);
  std::ostringstream src;
  src << "a,b,c,label\n";
  for (int i = 0; i < 50; ++i)
    src << (rng() % 2 ? -1 : 1) << ',' << (rng() % 3) << ',' << std::uniform_real_distribution<>(-3, 3)(rng) << ','
        << (rng() % 2 ? "phish" : "legit") << '\n';
  auto first = parse_csv_dataset(src.str(), "rt");
  std::ostringstream out;
  write_csv(out, first);
  auto second = parse_csv_dataset(out.str(), "rt");
  EXPECT_EQ(first, second);
  std::ostringstream again;
  write_csv(again, second);
  EXPECT_EQ(out.str(), again.str());
}

TEST(Csv, RoundTripStringLevels) {
  auto first = parse_csv_dataset("color,y\nred,1\nblue,0\nred,0\n", "s");
  EXPECT_EQ(first.feature(0).kind, FeatureKind::binary);
  std::ostringstream out;
  write_csv(out, first);
  EXPECT_EQ(parse_csv_dataset(out.str(), "s"), first);
}

TEST(Arff, NominalAndNumeric) {
  const char* text =
      "% comment\n"
      "@relation demo\n"
      "@attribute SFH {-1,0,1}\n"
      "@attribute 'pop up' {0,1}\n"
      "@attribute score real\n"
      "@attribute count integer\n"
      "@attribute Result {-1,1}\n"
      "@data\n"
      "-1,0,0.0,3,1\n"
      "1,1,1.0,4,-1\n"
      "0,1,0.5,5,1\n";
  auto ds = parse_arff_dataset(text, "");
  EXPECT_EQ(ds.name(), "demo");
  EXPECT_EQ(ds.n_features(), 4u);
  EXPECT_EQ(ds.feature(0).kind, FeatureKind::categorical);
  EXPECT_EQ(ds.feature(0).levels, (std::vector<double>{-1, 0, 1}));
  EXPECT_EQ(ds.feature(1).name, "pop up");
  EXPECT_EQ(ds.feature(1).kind, FeatureKind::binary);
  EXPECT_EQ(ds.feature(2).kind, FeatureKind::continuous);
  EXPECT_EQ(ds.feature(2).observed_min, 0.0);
  EXPECT_EQ(ds.feature(2).observed_max, 1.0);
  EXPECT_EQ(ds.feature(3).kind, FeatureKind::discrete);
  EXPECT_EQ(ds.value(0, 0), -1.0);
  EXPECT_EQ(ds.labels(), (std::vector<std::string>{"1", "-1", "1"}));
}

TEST(Arff, ClassNamedAttributeIsLabelEvenIfNotLast) {
  auto ds = parse_arff_dataset("@relation r\n@attribute class {a,b}\n@attribute x real\n@data\na,0.1\nb,0.2\n", "r");
  EXPECT_EQ(ds.feature_names(), (std::vector<std::string>{"x"}));
  EXPECT_EQ(ds.label(1), "b");
}

TEST(Arff, Errors) {
  EXPECT_EQ(code_of([] { parse_arff_dataset("@relation r\n@attribute s string\n@attribute y {0,1}\n@data\n", "r"); }),
            Errc::UnsupportedAttributeType);
  EXPECT_EQ(code_of([] { parse_arff_dataset("@relation r\n@attribute d date\n@attribute y {0,1}\n@data\n", "r"); }),
            Errc::UnsupportedAttributeType);
  EXPECT_EQ(code_of([] { parse_arff_dataset("@relation r\n@attribute x real\n@attribute y {0,1}\n", "r"); }),
            Errc::MalformedHeader);
  EXPECT_EQ(code_of([] { parse_arff_dataset("@relation r\n@attribute x blob\n@data\n", "r"); }),
            Errc::MalformedHeader);
  EXPECT_EQ(code_of([] { parse_arff_dataset("@relation r\n@attribute x real\n@attribute y {0,1}\n@data\n?,1\n", "r"); }),
            Errc::MissingValue);
  EXPECT_EQ(code_of([] { parse_arff_dataset("@relation r\n@attribute x {0,1}\n@attribute y {0,1}\n@data\n7,1\n", "r"); }),
            Errc::MalformedHeader);
}

TEST(Normalize, MinMaxAndCodes) {
  auto ds = parse_csv_dataset("raw,cat,const,y\n2,-1,7,p\n4,0,7,q\n6,1,7,r\n", "n");
  auto nd = normalize(ds);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_DOUBLE_EQ(nd.value(i, 0), 0.5 * static_cast<double>(i));
    EXPECT_DOUBLE_EQ(nd.value(i, 1), 0.5 * static_cast<double>(i));
    EXPECT_EQ(nd.value(i, 2), 0.0);
  }
  EXPECT_EQ(nd.n_labels(), 3u);
  EXPECT_EQ(nd.scaled_label(0), 0.0);
  EXPECT_EQ(nd.scaled_label(1), 0.5);
  EXPECT_EQ(nd.scaled_label(2), 1.0);
}

TEST(Normalize, NumericLabelsInNumericOrder) {
  auto nd = normalize(parse_csv_dataset("a,y\n0,1\n1,-1\n2,0\n", "n"));
  EXPECT_EQ(nd.label_names(), (std::vector<std::string>{"-1", "0", "1"}));
  EXPECT_EQ(nd.label_code(0), 2u);
}

TEST(Normalize, RangeExtremesAndIdempotence) {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 30; ++t) {
    std::ostringstream src;
    src << "a,b,c,y\n";
    for (int i = 0; i < 25; ++i)
      src << std::uniform_real_distribution<>(-50, 50)(rng) << ',' << (rng() % 5) << ',' << (rng() % 2 ? 3 : 9)
          << ',' << (rng() % 2) << '\n';
    auto ds = parse_csv_dataset(src.str(), "r");
    auto once = normalize(ds);
    for (std::size_t j = 0; j < ds.n_features(); ++j) {
      auto col = ds.column(j);
      auto [mn, mx] = std::minmax_element(col.begin(), col.end());
      for (std::size_t i = 0; i < ds.n_samples(); ++i) {
        double v = once.value(i, j);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
        if (*mn != *mx && col[i] == *mn) {
          EXPECT_EQ(v, 0.0);
        }
        if (*mn != *mx && col[i] == *mx) {
          EXPECT_EQ(v, 1.0);
        }
      }
    }
    auto twice = normalize(once);
    ASSERT_EQ(twice.values().size(), once.values().size());
    for (std::size_t k = 0; k < once.values().size(); ++k) EXPECT_EQ(twice.values()[k], once.values()[k]);
    EXPECT_EQ(twice.label_codes(), once.label_codes());
  }
}

TEST(Align, IdentityAndDisjoint) {
  std::vector<std::vector<std::string>> same{{"a", "b", "c"}, {"a", "b", "c"}};
  EXPECT_EQ(align(std::span<const std::vector<std::string>>(same), AliasMap{}).canonical,
            (std::vector<std::string>{"a", "b", "c"}));
  std::vector<std::vector<std::string>> disjoint{{"a", "b"}, {"c", "d"}};
  EXPECT_TRUE(align(std::span<const std::vector<std::string>>(disjoint), AliasMap{}).canonical.empty());
}

TEST(Align, ThroughAliases) {
  AliasMap m;
  m.add("UrlLen", "UrlLength");
  m.add("SFH", "ExtFormAct");
  m.add("SFH", "AbnormFormAct");
  std::vector<std::vector<std::string>> u{{"UrlLen", "SFH", "Port"}, {"UrlLength", "ExtFormAct", "AbnormFormAct", "X"}};
  auto s = align(std::span<const std::vector<std::string>>(u), m);
  EXPECT_EQ(s.canonical, (std::vector<std::string>{"SFH", "UrlLen"}));
  EXPECT_EQ(s.members[1], (std::vector<std::string>{"UrlLength", "ExtFormAct", "AbnormFormAct"}));
}

TEST(Align, CommutativeAndAssociative) {
  AliasMap m;
  m.add("k", "k2");
  std::vector<std::string> a{"k", "x", "y", "z"}, b{"k2", "y", "z"}, c{"z", "k", "q"};
  auto run = [&](std::vector<std::vector<std::string>> v) {
    return align(std::span<const std::vector<std::string>>(v), m).canonical;
  };
  EXPECT_EQ(run({a, b, c}), run({c, a, b}));
  EXPECT_EQ(run({a, b, c}), run({run({a, b}), c}));
  EXPECT_EQ(run({a, b, c}), run({a, run({b, c})}));
}

TEST(Align, UnknownFeatureInAlias) {
  AliasMap m;
  m.add("ghost", "phantom");
  std::vector<std::vector<std::string>> u{{"a"}, {"a"}};
  EXPECT_EQ(code_of([&] { align(std::span<const std::vector<std::string>>(u), m); }), Errc::UnknownFeatureInAlias);
}

TEST(AliasMapParse, Validation) {
  auto m = parse_alias_map("canonical,alias\nA,a1\nA,a2\nB,B\n");
  EXPECT_EQ(m.canonical("a2"), "A");
  EXPECT_EQ(m.canonical("B"), "B");
  EXPECT_EQ(m.canonical("zzz"), "zzz");
  EXPECT_EQ(code_of([] { parse_alias_map("c,a\nA,x\nB,x\n"); }), Errc::MalformedAliasMap);
  EXPECT_EQ(code_of([] { parse_alias_map("c,a\nA,B\nB,C\n"); }), Errc::MalformedAliasMap);
  EXPECT_EQ(code_of([] { parse_alias_map("c,a\nA,x,y\n"); }), Errc::MalformedAliasMap);
}

TEST(Dataset, SelectAndValidation) {
  auto ds = oracle::make_dataset({{0.1, 0.2, 0.3}, {0.4, 0.5, 0.6}}, {0, 1}).as_dataset();
  std::vector<std::string> names{"f2", "f0"};
  auto sub = ds.select(names);
  EXPECT_EQ(sub.feature_names(), names);
  EXPECT_EQ(sub.value(1, 0), 0.6);
  std::vector<std::string> bad{"nope"};
  EXPECT_THROW(ds.select(bad), Error);
  FeatureDescriptor f{"x", FeatureKind::continuous, std::nullopt, 0, 0, {}, {}};
  EXPECT_EQ(code_of([&] { Dataset("d", {f, f}, {0, 0}, {"a"}); }), Errc::MalformedHeader);
  EXPECT_EQ(code_of([&] { Dataset("d", {f}, {}, {}); }), Errc::EmptyFile);
}

}  // namespace
}  // namespace frs
