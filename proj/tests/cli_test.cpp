//
// Project fgcompress - Copyright 2026 The fgcompress Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cstdlib>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fgc/cli.hpp"

#include "test_util.hpp"

namespace {
using namespace fgc;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "fgc");
  std::vector<const char *> argv;
  for (const auto &a: args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return { code, out.str(), err.str() };
}

TEST(Cli, CompressSmallCorpus) {
  test::TempDir dir;
  write_file(dir / "in.smi", "C=C(Br)C=O\nC=CCOC=O\nCC=CC=O\n");
  const CliRun r = run({ "compress", "--input", (dir / "in.smi").string(), "--out",
                      (dir / "cb.json").string(), "--trace", (dir / "trace.tsv").string(),
                      "--min-count", "1", "--logstar", "simple" });
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("final_bits"), std::string::npos);
  const std::string trace = read_file(dir / "trace.tsv");
  EXPECT_EQ(trace.rfind("iteration\texpanded_smiles", 0), 0u);
  EXPECT_NO_THROW(load_codebook(dir / "cb.json"));
}

TEST(Cli, UsageErrors) {
  CliRun r = run({ "compress", "--input", "x", "--out", "y", "--bogus" });
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({ "compress", "--out", "y" }).code, 1);
  EXPECT_EQ(run({ "compress", "--input", "x", "--out", "y", "--max-len", "1" }).code, 1);
  EXPECT_EQ(run({ "stats", "--input", "x", "--logstar", "fancy" }).code, 1);
  EXPECT_EQ(run({ "--help" }).code, 0);
}

TEST(Cli, DataErrors) {
  test::TempDir dir;
  write_file(dir / "in.smi", "CCO\n");
  EXPECT_EQ(run({ "fingerprint", "--codebook", (dir / "missing.json").string(), "--input",
                  (dir / "in.smi").string(), "--out", (dir / "fp.csv").string() })
                .code,
            2);
  EXPECT_EQ(run({ "stats", "--input", (dir / "missing.smi").string() }).code, 2);
  write_file(dir / "bad.smi", "C*\n");
  EXPECT_EQ(run({ "stats", "--input", (dir / "bad.smi").string() }).code, 2);
}

TEST(Cli, Stats) {
  test::TempDir dir;
  write_file(dir / "in.smi", "CN\n");
  const CliRun r = run({ "stats", "--input", (dir / "in.smi").string(), "--logstar", "simple" });
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("total_bits\t4.0107"), std::string::npos) << r.out;
}

// compress -> fingerprint -> eval, and identical outputs across thread counts.
TEST(Cli, EndToEndDeterministic) {
  test::TempDir dir;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.1);
  std::bernoulli_distribution coin(0.5);
  std::string smi, targets = "smiles,target\n";
  std::vector<std::string> uniq;
  while (uniq.size() < 80) {
    const bool amide = coin(rng);
    const std::string m = test::random_chain(rng, 4) + (amide ? "C(=O)N" : "CCO")
                          + test::random_chain(rng, 4);
    if (std::find(uniq.begin(), uniq.end(), m) != uniq.end())
      continue;
    uniq.push_back(m);
    smi += m + "\n";
    targets += m + "," + std::to_string((amide ? 2.0 : 0.0) + noise(rng)) + "\n";
  }
  ASSERT_GE(uniq.size(), 8u);
  write_file(dir / "in.smi", smi);
  write_file(dir / "t.csv", targets);

  std::vector<std::string> outputs;
  for (const char *threads: { "1", "4" }) {
    const std::string t(threads);
    ASSERT_EQ(run({ "compress", "--input", (dir / "in.smi").string(), "--out",
                    (dir / ("cb" + t + ".json")).string(), "--trace",
                    (dir / ("tr" + t + ".tsv")).string(), "--iters", "10", "--threads", t })
                  .code,
              0);
    ASSERT_EQ(run({ "fingerprint", "--codebook", (dir / ("cb" + t + ".json")).string(),
                    "--input", (dir / "t.csv").string(), "--out",
                    (dir / ("fp" + t + ".csv")).string(), "--threads", t })
                  .code,
              0);
    const CliRun e = run({ "eval", "--features", (dir / ("fp" + t + ".csv")).string(),
                        "--targets", (dir / "t.csv").string(), "--out",
                        (dir / ("ev" + t + ".json")).string(), "--threads", t, "--seed", "5" });
    ASSERT_EQ(e.code, 0) << e.err;
    outputs.push_back(content_hash(read_file(dir / ("cb" + t + ".json")))
                      + content_hash(read_file(dir / ("tr" + t + ".tsv")))
                      + content_hash(read_file(dir / ("fp" + t + ".csv")))
                      + content_hash(read_file(dir / ("ev" + t + ".json"))));
  }
  EXPECT_EQ(outputs[0], outputs[1]);

  const auto report = nlohmann::json::parse(read_file(dir / "ev1.json"));
  ASSERT_EQ(report["datasets"].size(), 1u);
  EXPECT_EQ(report["datasets"][0]["per_repeat"].size(), 5u);
  EXPECT_TRUE(report["datasets"][0].contains("baseline"));
  EXPECT_EQ(report["comparison"].size(), 1u);

  const std::string header = read_file(dir / "fp1.csv").substr(0, 12);
  EXPECT_EQ(header.rfind("smiles,\"0:", 0), 0u);
}

TEST(Cli, ThreadsFromEnvironment) {
  ::setenv("FGC_THREADS", "3", 1);
  EXPECT_EQ(cli::internal::resolve_threads(std::nullopt), 3u);
  EXPECT_EQ(cli::internal::resolve_threads(2), 2u);
  ::unsetenv("FGC_THREADS");
  EXPECT_EQ(cli::internal::resolve_threads(std::nullopt), 1u);
}

}  // namespace
