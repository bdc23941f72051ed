// Copyright 2026 The ppmenergy Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ppmenergy/cli_io.hpp"
#include "ppmenergy/graph_gen.hpp"

namespace ppmenergy::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ppmenergy_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, TheoryJson) {
  const auto r = invoke({"theory", "--k", "50"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["threshold"].get<double>(), 14.142135623730951, 1e-12);

  const auto full = invoke({"theory", "--k", "50", "--n", "1000", "--kab", "25"});
  const auto jf = nlohmann::json::parse(full.out);
  EXPECT_NEAR(jf["lambda2_pred"].get<double>(), 27.0, 1e-12);
  EXPECT_TRUE(jf["detectable"].get<bool>());
}

TEST_F(CliTest, TheoryText) {
  const auto r = invoke({"theory", "--k", "5", "--format", "text"});
  ASSERT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("threshold"), std::string::npos);
  EXPECT_NE(r.out.find("4.472135955"), std::string::npos);
}

TEST_F(CliTest, ValidationExitCodes) {
  EXPECT_EQ(invoke({"generate", "--n", "1001", "--k", "50", "--kab", "25"}).code, kValidation);
  EXPECT_EQ(invoke({"generate", "--n", "100", "--k", "5", "--kab", "11"}).code, kValidation);
  EXPECT_EQ(invoke({"generate", "--n", "100", "--k", "5"}).code, kValidation);
  EXPECT_EQ(invoke({"theory", "--k", "50", "--n", "1000"}).code, kValidation);
  EXPECT_EQ(invoke({"frobnicate"}).code, kValidation);
  EXPECT_EQ(invoke({}).code, kValidation);
  const auto odd = invoke({"generate", "--n", "1001", "--k", "50", "--kab", "25"});
  EXPECT_NE(odd.err.find("n must be even"), std::string::npos);
}

TEST_F(CliTest, IoExitCodes) {
  EXPECT_EQ(invoke({"spectrum", "-i", path("missing.txt")}).code, kIo);
  EXPECT_EQ(invoke({"generate", "--n", "10", "--k", "2", "--kab", "1", "-o",
                    path("no/such/dir/g.txt")})
                .code,
            kIo);
}

TEST_F(CliTest, GenerateThenSpectrum) {
  const auto gen = invoke({"generate", "--n", "100", "--k", "6", "--kab", "2", "--seed", "9",
                           "-o", path("g.txt")});
  ASSERT_EQ(gen.code, kOk) << gen.err;
  EXPECT_TRUE(fs::exists(path("g.txt.manifest.json")));
  const auto manifest = nlohmann::json::parse(slurp(path("g.txt.manifest.json")));
  EXPECT_EQ(manifest["parameters"]["seed"], 9);

  const auto g = read_edge_list(path("g.txt"));
  const auto ref = generate_ppm(resolve_params(100, 6, 2), 9);
  ASSERT_EQ(g.edge_count(), ref.edge_count());
  EXPECT_TRUE(std::equal(g.edges().begin(), g.edges().end(), ref.edges().begin()));

  const auto spec = invoke({"spectrum", "-i", path("g.txt"), "--format", "json", "-o",
                            path("eig.csv"), "--histogram", path("hist.csv"), "--bins", "20"});
  ASSERT_EQ(spec.code, kOk) << spec.err;
  const auto report = nlohmann::json::parse(spec.out);
  EXPECT_EQ(report["n"], 100);
  EXPECT_EQ(report["m"], g.edge_count());
  EXPECT_TRUE(report["identities_ok"].get<bool>());
  EXPECT_TRUE(fs::exists(path("eig.csv.manifest.json")));
  const std::string eig = slurp(path("eig.csv"));
  EXPECT_EQ(std::count(eig.begin(), eig.end(), '\n'), 101);
  const std::string hist = slurp(path("hist.csv"));
  EXPECT_EQ(std::count(hist.begin(), hist.end(), '\n'), 21);

  // Inline generation gives the same graph.
  const auto inline_spec = invoke({"spectrum", "--n", "100", "--k", "6", "--kab", "2", "--seed",
                                   "9", "--format", "json"});
  EXPECT_EQ(nlohmann::json::parse(inline_spec.out)["energy"], report["energy"]);
}

TEST_F(CliTest, GenerateToStdout) {
  const auto r = invoke({"generate", "--n", "4", "--k", "1", "--kab", "0", "--seed", "3"});
  ASSERT_EQ(r.code, kOk);
  EXPECT_EQ(r.out.substr(0, 7), "# n=4 s");
  EXPECT_NE(r.out.find("\n0 1\n2 3\n"), std::string::npos);
}

TEST_F(CliTest, SpectrumOfExternalGraph) {
  std::ofstream(path("tri.txt")) << "0 1\n1 2\n2 0\n";
  const auto r = invoke({"spectrum", "-i", path("tri.txt"), "--format", "json"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NEAR(nlohmann::json::parse(r.out)["energy"].get<double>(), 4.0, 1e-12);
}

TEST_F(CliTest, SpectrumOfEmptyFile) {
  std::ofstream(path("empty.txt")) << "";
  const auto r = invoke({"spectrum", "-i", path("empty.txt")});
  EXPECT_EQ(r.code, kValidation);
  EXPECT_NE(r.err.find("no edges / empty graph"), std::string::npos);

  // With a node count the empty graph is valid and has zero energy.
  const auto with_n = invoke({"spectrum", "-i", path("empty.txt"), "--n", "4", "--format", "json"});
  ASSERT_EQ(with_n.code, kOk);
  EXPECT_NE(with_n.err.find("no edges / empty graph"), std::string::npos);
  EXPECT_EQ(nlohmann::json::parse(with_n.out)["energy"].get<double>(), 0.0);
}

TEST_F(CliTest, SweepWritesCsvAndManifest) {
  const auto r = invoke({"sweep", "--n", "60", "--k", "4", "--grid", "4", "2", "0", "--reps", "5",
                         "--seed", "3", "-o", path("s.csv"), "--plot-data", path("s.dat")});
  ASSERT_EQ(r.code, kOk) << r.err;
  const std::string csv = slurp(path("s.csv"));
  EXPECT_EQ(csv.substr(0, 16), "k_aa_minus_k_ab,");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  const auto manifest = nlohmann::json::parse(slurp(path("s.csv.manifest.json")));
  EXPECT_EQ(manifest["spec"]["reps"], 5);
  EXPECT_EQ(manifest["spec"]["k_ab_grid"].size(), 3u);
  EXPECT_EQ(slurp(path("s.dat")).substr(0, 2), "# ");
}

TEST_F(CliTest, ConfigSuppliesFlagsAndCommandLineWins) {
  std::ofstream(path("cfg.json"))
      << R"({"n": 60, "k": 4, "grid": [4, 0], "reps": 3, "seed": 8, "mode": "energy"})";
  const auto a = invoke({"sweep", "--config", path("cfg.json"), "-o", path("a.csv")});
  ASSERT_EQ(a.code, kOk) << a.err;
  const auto b = invoke({"sweep", "--n", "60", "--k", "4", "--grid", "4", "0", "--reps", "3",
                         "--seed", "8", "--mode", "energy", "-o", path("b.csv")});
  ASSERT_EQ(b.code, kOk);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));

  const auto c = invoke({"sweep", "--config", path("cfg.json"), "--reps", "2", "-o", path("c.csv")});
  ASSERT_EQ(c.code, kOk);
  EXPECT_EQ(nlohmann::json::parse(slurp(path("c.csv.manifest.json")))["spec"]["reps"], 2);

  std::ofstream(path("bad.json")) << "{not json";
  EXPECT_EQ(invoke({"sweep", "--config", path("bad.json")}).code, kIo);
}

TEST_F(CliTest, SweepRerunFromManifestIsByteIdentical) {
  ASSERT_EQ(invoke({"sweep", "--n", "40", "--k", "3", "--reps", "4", "--seed", "5", "--threads",
                    "1", "-o", path("one.csv")})
                .code,
            kOk);
  ASSERT_EQ(invoke({"sweep", "--n", "40", "--k", "3", "--reps", "4", "--seed", "5", "--threads",
                    "4", "-o", path("four.csv")})
                .code,
            kOk);
  EXPECT_EQ(slurp(path("one.csv")), slurp(path("four.csv")));
}

}  // namespace
}  // namespace ppmenergy::cli
