// Copyright 2026 The LatentMark Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end runs of the lmk binary.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliRun {
  int code = -1;
  std::string out;
};

// Stdout only; stderr goes to a file next to the scratch dir when wanted.
CliRun run(const std::string& args) {
  const std::string cmd = "LMK_CONFIG_DIR=" + std::string(LMK_CONFIG_SOURCE_DIR) + " " + LMK_CLI_PATH + " " + args;
  CliRun r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  while (const std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("lmk_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

TEST_F(Cli, HelpAndVersionExitZero) {
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("evaluate --help").code, 0);
  const CliRun v = run("--version");
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("lmk"), std::string::npos);
}

TEST_F(Cli, UsageErrorsExitTwoWithJson) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("generate --alg GS").code, 2);
  EXPECT_EQ(run("detect --alg XX --media x").code, 2);
  const CliRun r = run("evaluate --alg GS --n 4 --attacks sharpen:3 2>" + path("err.txt"));
  EXPECT_EQ(r.code, 2);
  std::ifstream in(path("err.txt"));
  std::string line;
  std::getline(in, line);
  const json err = json::parse(line);
  EXPECT_EQ(err.at("error").at("kind"), "attack");
}

TEST_F(Cli, GenerateDetectRoundTrip) {
  const std::string media = path("m.lmk"), key = path("k.json");
  ASSERT_EQ(run("generate --alg GS --sample-id 3 --out " + media + " --key-out " + key).code, 0);
  ASSERT_TRUE(fs::exists(media));
  ASSERT_TRUE(fs::exists(key));
  const CliRun d = run("detect --alg GS --media " + media + " --key-in " + key + " --json --strict");
  EXPECT_EQ(d.code, 0);
  const json j = json::parse(d.out);
  EXPECT_TRUE(j.at("is_watermarked").get<bool>());
  EXPECT_EQ(j.at("algorithm"), "GS");
}

TEST_F(Cli, StrictFailsOnUnwatermarkedMedia) {
  const std::string media = path("u.lmk");
  ASSERT_EQ(run("generate --alg TR --sample-id 1 --unwatermarked --out " + media).code, 0);
  const CliRun loose = run("detect --alg TR --media " + media + " --json");
  EXPECT_EQ(loose.code, 0);
  EXPECT_FALSE(json::parse(loose.out).at("is_watermarked").get<bool>());
  EXPECT_EQ(run("detect --alg TR --media " + media + " --json --strict").code, 1);
}

TEST_F(Cli, EvaluateWritesReport) {
  const std::string report = path("r.json");
  ASSERT_EQ(run("evaluate --alg TR --n 20 --attacks jpeg:50 --channel toycodec --quiet --report " + report).code, 0);
  std::ifstream in(report);
  const json j = json::parse(in);
  EXPECT_EQ(j.at("algorithm"), "TR");
  EXPECT_EQ(j.at("n"), 20);
  EXPECT_EQ(j.at("attacks"), "jpeg:50");
  EXPECT_TRUE(j.at("wall_time_s").is_null());
  const double tpr = j.at("rates").at("tpr_at_fpr").at("tpr").get<double>();
  EXPECT_GE(tpr, 0.0);
  EXPECT_LE(tpr, 1.0);
}

TEST_F(Cli, EvaluateToStdoutIsDeterministic) {
  const CliRun a = run("evaluate --alg GS --n 10 --attacks rot:5 --channel toycodec --quiet");
  const CliRun b = run("evaluate --alg GS --n 10 --attacks rot:5 --channel toycodec --quiet");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(json::parse(a.out).is_object());
}

TEST_F(Cli, VisualizeWritesPng) {
  const std::string png = path("v.png");
  ASSERT_EQ(run("visualize --alg RI --out " + png).code, 0);
  ASSERT_TRUE(fs::exists(png));
  EXPECT_GT(fs::file_size(png), 100u);
  EXPECT_EQ(run("visualize --alg RI --methods draw_watermark_bits --out " + path("x.png") + " 2>/dev/null").code, 2);
}

}  // namespace
