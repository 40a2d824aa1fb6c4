// Copyright 2026 The Netlens Authors
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

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.hpp"

namespace netlens::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "netlens");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("netlens_cli_" + std::string(
                                 ::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, VersionAndHelp) {
  const auto v = run({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_EQ(v.out, std::string(kVersion) + "\n");
  const auto h = run({"--help"});
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("demo"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  const auto unknown = run({"demo", "--out", path("d"), "--bogus"});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.err.find("--bogus"), std::string::npos);
  EXPECT_NE(unknown.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"ingest", "--input", path("x")}).code, 2);
  EXPECT_EQ(run({"weights", "--out", path("w.txt")}).code, 2);
}

TEST_F(CliTest, RuntimeErrorsExitOne) {
  const auto missing = run({"ingest", "--input", path("nope.el"), "--output", path("g.el")});
  EXPECT_EQ(missing.code, 1);
  EXPECT_EQ(missing.err.rfind("error: ", 0), 0u);

  std::ofstream(path("bad.el")) << "0 1\n1 x\n";
  const auto bad = run({"ingest", "--input", path("bad.el"), "--output", path("g.el")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("line 2"), std::string::npos);

  const auto no_seed = run({"splice", "--out", path("s")});
  EXPECT_EQ(no_seed.code, 1);
  EXPECT_NE(no_seed.err.find("seed"), std::string::npos);
}

TEST_F(CliTest, IngestRoundTrip) {
  std::ofstream(path("in.el")) << "# toy\n0 1\n1 2\n2 2\n1 0\n2 3\n";
  const auto first = run({"ingest", "--input", path("in.el"), "--output", path("a.el")});
  ASSERT_EQ(first.code, 0) << first.err;
  EXPECT_EQ(first.out, "nodes 4 edges 3 self_loops_dropped 1 duplicates_dropped 1\n");
  const auto second = run({"ingest", "--input", path("a.el"), "--output", path("b.el")});
  ASSERT_EQ(second.code, 0) << second.err;
  EXPECT_EQ(slurp(path("a.el")), slurp(path("b.el")));
}

TEST_F(CliTest, NaiveWeightsFromAccuracies) {
  std::ofstream(path("acc.txt")) << "# lens accuracies\n8:start 90\n8:member 60\n16:start 30\n";
  const auto r = run({"weights", "--method", "naive", "--accuracies", path("acc.txt"), "--out",
                      path("w.txt"), "--sizes", "8,16", "--classes", "star,wheel,ladder"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto text = slurp(path("w.txt"));
  EXPECT_NE(text.find("method=naive"), std::string::npos);
  EXPECT_NE(text.find("8:start 0.5"), std::string::npos);
  EXPECT_NE(text.find("16:member 0"), std::string::npos);

  std::ofstream(path("bad.txt")) << "9:start 50\n";
  EXPECT_EQ(run({"weights", "--method", "naive", "--accuracies", path("bad.txt"), "--out",
                 path("w2.txt"), "--sizes", "8,16", "--classes", "star,wheel,ladder"})
                .code,
            1);
}

TEST_F(CliTest, EndToEndChain) {
  const std::vector<std::string> shape{"--sizes", "8,16", "--count", "4", "--splice-per-part",
                                       "3"};
  const auto with = [&](std::vector<std::string> args, const std::vector<std::string>& more) {
    args.insert(args.end(), more.begin(), more.end());
    return args;
  };
  for (const char* family : {"star", "wheel", "ladder"}) {
    const auto r = run(with({"corpus", "--family", family, "--out", path("corpus"), "--seed", "3"},
                            shape));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("size 8 requested 4"), std::string::npos);
    EXPECT_TRUE(fs::exists(path("corpus/" + std::string(family) + "/8/0.pbm")));
  }
  const auto train = run({"train", "--corpus", path("corpus"), "--classes", "star,wheel,ladder",
                          "--out", path("models")});
  ASSERT_EQ(train.code, 0) << train.err;
  EXPECT_TRUE(fs::exists(path("models/model_8.nlm")));
  EXPECT_TRUE(fs::exists(path("models/model_16.nlm")));

  const auto sp = run(with({"splice", "--out", path("net"), "--seed", "5"}, shape));
  ASSERT_EQ(sp.code, 0) << sp.err;
  EXPECT_NE(sp.out.find("nodes 288"), std::string::npos);

  const auto lens = run({"lens", "--graph", path("net/network.el"), "--models", path("models"),
                         "--out", path("tally.csv"), "--seed", "9", "--workers", "2"});
  ASSERT_EQ(lens.code, 0) << lens.err;
  const auto tally_two = slurp(path("tally.csv"));
  ASSERT_EQ(run({"lens", "--graph", path("net/network.el"), "--models", path("models"), "--out",
                 path("tally1.csv"), "--seed", "9", "--workers", "1"})
                .code,
            0);
  EXPECT_EQ(tally_two, slurp(path("tally1.csv")));

  const std::vector<std::string> inputs{"--graph", path("net/network.el"), "--truth",
                                        path("net/truth.tsv"), "--tally", path("tally.csv"),
                                        "--seed", "9", "--sizes", "8,16"};
  const auto w = run(with({"weights", "--method", "lp", "--out", path("weights.txt")}, inputs));
  ASSERT_EQ(w.code, 0) << w.err;
  EXPECT_NE(w.out.find("objective"), std::string::npos);

  const auto ev = run(with({"evaluate", "--weights", path("weights.txt"), "--out", path("eval")},
                           inputs));
  ASSERT_EQ(ev.code, 0) << ev.err;
  for (const char* f : {"curve.csv", "reward.csv", "predictions.csv", "diversity.csv"}) {
    EXPECT_TRUE(fs::exists(path("eval/" + std::string(f)))) << f;
  }
  EXPECT_EQ(slurp(path("eval/curve.csv")).rfind("tau,accuracy\n0.0500,", 0), 0u);

  const auto homo = run({"homogeneity", "--models", path("models"), "--out", path("homo"),
                         "--seed", "2", "--count", "3"});
  ASSERT_EQ(homo.code, 0) << homo.err;
  EXPECT_TRUE(fs::exists(path("homo/homogeneity.csv")));
  EXPECT_NE(homo.out.find("star peak"), std::string::npos);
}

TEST_F(CliTest, DemoWritesSummary) {
  const auto r = run({"demo", "--out", path("demo"), "--seed", "4", "--sizes", "8,16", "--count",
                      "3", "--training-images", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto summary = slurp(path("demo/summary.txt"));
  EXPECT_EQ(summary.rfind("nodes 216\n", 0), 0u);
  EXPECT_NE(summary.find("top1_accuracy"), std::string::npos);
}

}  // namespace
}  // namespace netlens::cli
