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
#include <sys/wait.h>

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(FRS_CLI) + " " + args + " 2>/dev/null";
  Run r{-1, {}};
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string src(const std::string& rel) { return std::string(FRS_SOURCE_DIR) + "/" + rel; }

fs::path scratch_dir() { return fs::temp_directory_path() / ("frs_cli_test_" + std::to_string(::getpid())); }

fs::path scratch(const std::string& name) {
  fs::create_directories(scratch_dir());
  return scratch_dir() / name;
}

struct ScratchCleanup : ::testing::Environment {
  void TearDown() override { fs::remove_all(scratch_dir()); }
};

const auto* const kCleanup = ::testing::AddGlobalTestEnvironment(new ScratchCleanup);

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string read(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Cli, MissingFileIsInputError) {
  EXPECT_EQ(run("select --data /definitely/not/here.csv").code, 2);
  EXPECT_EQ(run("select").code, 2);
  EXPECT_EQ(run("nosuchcommand").code, 2);
}

TEST(Cli, ToyReduct) {
  auto r = run("select --data " + src("data/fixtures/toy.csv"));
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["selected"], nlohmann::json::array({"f"}));
  EXPECT_NEAR(j["gamma"].get<double>(), 0.5, 1e-12);
}

TEST(Cli, SelectWritesFileAndSummary) {
  auto out = scratch("toy.json");
  auto r = run("select --data " + src("data/fixtures/toy.csv") + " --out " + out.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("1 selected"), std::string::npos);
  EXPECT_EQ(nlohmann::json::parse(read(out))["mode"], "quickreduct");
}

TEST(Cli, IntersectShippedSelections) {
  auto r = run("intersect " + src("data/selections/uci1.json") + " " + src("data/selections/mendeley.json") + " " +
               src("data/selections/uci2.json") + " --aliases " + src("data/aliases/shared.csv"));
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  std::set<std::string> got(j["features"].begin(), j["features"].end());
  std::set<std::string> want{"UrlLen", "PrefSuff",    "HaveSubDomain", "Favicon",     "ReqUrl",
                             "UrlAnchor", "LinksInTags", "SFH",           "Submit2Email"};
  EXPECT_EQ(got, want);
}

TEST(Cli, IntersectNeedsTwoFiles) { EXPECT_EQ(run("intersect " + src("data/selections/uci1.json")).code, 2); }

TEST(Cli, IntersectDisjointIsEmpty) {
  auto a = scratch("a.json"), b = scratch("b.json");
  write(a, R"({"dataset":"a","selected":["x"],"universe":["x","y"]})");
  write(b, R"({"dataset":"b","selected":["z"],"universe":["z","w"]})");
  auto r = run("intersect " + a.string() + " " + b.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(nlohmann::json::parse(r.out)["features"].empty());
}

TEST(Cli, MalformedSelectionIsInputError) {
  auto a = scratch("bad.json");
  write(a, "{not json");
  EXPECT_EQ(run("intersect " + a.string() + " " + src("data/selections/uci1.json")).code, 2);
}

TEST(Cli, SelectIsDeterministic) {
  auto a = run("select --method dw --seed 5 --data " + src("data/fixtures/xor.csv"));
  auto b = run("select --method dw --seed 5 --data " + src("data/fixtures/xor.csv"));
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, EvaluateGridCardinality) {
  std::string rows = "a,b,c,label\n";
  for (int i = 0; i < 40; ++i) {
    int a = i % 3 - 1, b = (i / 3) % 3 - 1, c = (i * 7) % 2;
    rows += std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "," + (a + b > 0 ? "-1" : "1") +
            "\n";
  }
  auto data = scratch("grid.csv"), csv = scratch("grid_out.csv");
  write(data, rows);
  auto r = run("evaluate --data " + data.string() +
               " --selectors frs,ig,all-features --classifiers rf,smo,majority --folds 3 --trees 10 --csv " +
               csv.string());
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["cells"].size(), 9u);
  auto text = read(csv);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 10);
}

TEST(Cli, UnknownSelectorIsUsageError) {
  EXPECT_EQ(run("evaluate --data " + src("data/fixtures/toy.csv") + " --selectors bogus").code, 2);
}

TEST(Cli, ConfigFileSuppliesOptions) {
  auto cfg = scratch("run.toml");
  write(cfg, "[select]\nmethod = \"frs-core\"\n");
  auto r = run("--config " + cfg.string() + " select --data " + src("data/fixtures/toy.csv"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["mode"], "core");
  auto over = run("--config " + cfg.string() + " select --method frs --data " + src("data/fixtures/toy.csv"));
  EXPECT_EQ(nlohmann::json::parse(over.out)["mode"], "quickreduct");
}
