// Copyright 2026 The absa-promptkit Authors.
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

#include <array>
#include <cstdio>
#include <cstdlib>
#include <nlohmann/json.hpp>
#include <sstream>

#include "absa/corpus.h"
#include "test_support.h"

namespace absa {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

struct Result {
  int code = 0;
  std::string out;  // stdout and stderr merged
};

Result RunCli(const std::string& args, const std::string& env = "") {
  const std::string cmd =
      env + " '" + std::string(ABSA_CLI_PATH) + "' " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {-1, "popen failed"};
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Quote(const fs::path& p) { return "'" + p.string() + "'"; }

std::string Config() { return "--config " + Quote(testing::FixtureConfig()); }

TEST(CliTest, RunAllGoldIsPerfect) {
  TempDir dir("cli-runall");
  const Result r = RunCli("run-all " + Config() + " --out " + Quote(dir.path()));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("setting\tACD\tATE\tACTE\tTASD"), std::string::npos);
  EXPECT_NE(r.out.find("100.0±0.0\t100.0±0.0\t100.0±0.0\t100.0±0.0"),
            std::string::npos)
      << r.out;
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
}

TEST(CliTest, ConfigFromEnvironment) {
  TempDir dir("cli-env");
  const Result r =
      RunCli("run-all --seeds 1 --out " + Quote(dir.path()),
          "ABSA_PROMPTKIT_CONFIG=" + Quote(testing::FixtureConfig()));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("100.0±0.0"), std::string::npos);
}

TEST(CliTest, SplitIsByteStable) {
  TempDir dir("cli-split");
  for (const char* name : {"a.jsonl", "b.jsonl"}) {
    const Result r = RunCli("split --input " + Quote(testing::FixtureXml()) +
                         " --few-shot 10 --out " + Quote(dir / name));
    ASSERT_EQ(r.code, 0) << r.out;
  }
  const std::string a = testing::ReadFile(dir / "a.jsonl");
  EXPECT_EQ(a, testing::ReadFile(dir / "b.jsonl"));
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 10);
}

TEST(CliTest, SplitWithValidationFraction) {
  TempDir dir("cli-val");
  const Result r = RunCli("split --input " + Quote(testing::FixtureXml()) +
                       " --val-frac 0.1 --out " + Quote(dir / "train.jsonl"));
  ASSERT_EQ(r.code, 0) << r.out;
  const std::string val = testing::ReadFile(dir / "train.validation.jsonl");
  EXPECT_EQ(std::count(val.begin(), val.end(), '\n'), 6);
}

TEST(CliTest, IngestRenderPredictScore) {
  TempDir dir("cli-chain");
  Result r = RunCli("ingest --input " + Quote(testing::PolarityTsv()) + " --out " +
                 Quote(dir / "docs.jsonl"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("\"records\":30"), std::string::npos) << r.out;

  r = RunCli("render " + Config() + " --task sc --regime mlm --input " +
          Quote(dir / "docs.jsonl") + " --out " + Quote(dir / "r.jsonl"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(testing::ReadFile(dir / "r.jsonl").find("Je to [MASK] film."),
            std::string::npos);

  r = RunCli("predict " + Config() + " --task sc --regime mlm --backend gold " +
          "--seeds 4 --input " + Quote(dir / "docs.jsonl") + " --out " +
          Quote(dir / "run"));
  ASSERT_EQ(r.code, 0) << r.out;
  r = RunCli("score " + Config() + " --task sc --regime mlm --input " +
          Quote(dir / "docs.jsonl") + " --predictions " +
          Quote(dir / "run/seed-4/predictions.sc.jsonl"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(nlohmann::json::parse(r.out)["sc"]["score"], 1.0);
}

TEST(CliTest, ScoreCorruptedPredictionsAtScale) {
  TempDir dir("cli-corrupt");
  // Synthetic corpus with well over 10,000 gold triplets.
  testing::SentenceGenerator gen(99);
  std::vector<AbsaSentence> sentences;
  std::size_t triplets = 0;
  while (triplets < 12000) {
    AbsaSentence s = gen.Next("s" + std::to_string(sentences.size()));
    if (s.triplets.empty()) continue;
    triplets += s.triplets.size();
    sentences.push_back(std::move(s));
  }
  {
    std::ofstream out(dir / "big.xml");
    WriteAbsaXml(out, sentences);
  }
  Result r = RunCli("predict " + Config() +
                 " --task tasd --regime sentinel --backend corrupt:0.3 "
                 "--seeds 7 --input " +
                 Quote(dir / "big.xml") + " --out " + Quote(dir / "run"));
  ASSERT_EQ(r.code, 0) << r.out;
  r = RunCli("score " + Config() + " --task tasd --regime sentinel --input " +
          Quote(dir / "big.xml") + " --predictions " +
          Quote(dir / "run/seed-7/predictions.tuple.jsonl"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto scores = nlohmann::json::parse(r.out)["tasd"];
  EXPECT_NEAR(scores["recall"].get<double>(), 0.7, 0.02);
  EXPECT_EQ(scores["precision"].get<double>(), 1.0);
}

TEST(CliTest, ReportOverRuns) {
  TempDir dir("cli-report");
  ASSERT_EQ(RunCli("run-all " + Config() + " --seeds 1,2 --setting Gold --out " +
                Quote(dir / "gold"))
                .code,
            0);
  ASSERT_EQ(RunCli("run-all " + Config() +
                " --zero-shot --regime mask --backend corrupt:0.2 --out " +
                Quote(dir / "noisy"))
                .code,
            0);
  const Result r = RunCli("report --runs " + Quote(dir / "gold") + " " +
                       Quote(dir / "noisy") + " --out " + Quote(dir / "table"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("Gold\t100.0±0.0"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("mask, zero-shot\t"), std::string::npos) << r.out;
  EXPECT_TRUE(fs::exists(dir / "table/report.json"));
}

TEST(CliTest, Dedup) {
  TempDir dir("cli-dedup");
  testing::WriteFile(dir / "raw.txt",
                     "Nuda od začátku do konce. (1)  \nÚplně nový text\n");
  const Result r = RunCli("dedup --raw " + Quote(dir / "raw.txt") +
                       " --annotated " + Quote(testing::PolarityTsv()) +
                       " --out " + Quote(dir / "clean.txt"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(testing::ReadFile(dir / "clean.txt"), "Úplně nový text\n");
  EXPECT_NE(r.out.find("removed 1"), std::string::npos);
}

TEST(CliTest, ActionableErrors) {
  Result r = RunCli("render --task tasd --input /nonexistent.xml");
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.out.find("--input /nonexistent.xml does not exist"),
            std::string::npos)
      << r.out;

  r = RunCli("run-all " + Config() + " --regime mlm --out /tmp/absa-never");
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.out.find("use traditional, sentinel or mask"), std::string::npos);

  r = RunCli("run-all --config /nonexistent.ini");
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.out.find("does not exist"), std::string::npos);

  r = RunCli("predict " + Config() + " --task sc --input " +
          Quote(testing::PolarityTsv()) + " --backend magic --out /tmp/x");
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.out.find("unknown backend"), std::string::npos);

  r = RunCli("run-all " + Config() + " --few-shot 100 --out /tmp/absa-never");
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.out.find("exceeds training set size 60"), std::string::npos);

  r = RunCli("bogus");
  EXPECT_NE(r.code, 0);
}

TEST(CliTest, MalformedInputReportsLine) {
  TempDir dir("cli-bad");
  testing::WriteFile(dir / "bad.xml", "<Reviews>\n<Review rid=\"1\">\n</Oops>\n");
  const Result r = RunCli("ingest --input " + Quote(dir / "bad.xml"));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("line"), std::string::npos) << r.out;
}

TEST(CliTest, UnreachableServerIsATransportError) {
  TempDir dir("cli-http");
  const Result r = RunCli("predict " + Config() + " --task sc --input " +
                       Quote(testing::PolarityTsv()) +
                       " --backend http:127.0.0.1:1 --out " + Quote(dir.path()));
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.out.find("doc-1"), std::string::npos) << r.out;
}

}  // namespace
}  // namespace absa
