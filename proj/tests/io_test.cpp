//
// Project fgcompress - Copyright 2026 The fgcompress Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fgc/io.hpp"

#include "test_util.hpp"

namespace {
using namespace fgc;

TEST(LoadCorpus, DedupAndTrim) {
  const LoadedCorpus c = parse_corpus("CCO\nC1CC1\r\nCCO\n");
  EXPECT_EQ(c.molecules, (std::vector<std::string> { "CCO", "C1CC1" }));
  EXPECT_EQ(c.duplicates_removed, 1u);
  EXPECT_TRUE(c.skipped.empty());
}

TEST(LoadCorpus, SkipsBadLinesWithLineNumbers) {
  const LoadedCorpus c = parse_corpus("CC\n\n  C*C  \nN\n");
  EXPECT_EQ(c.molecules, (std::vector<std::string> { "CC", "N" }));
  ASSERT_EQ(c.skipped.size(), 1u);
  EXPECT_EQ(c.skipped[0].line, 3u);
}

TEST(LoadCorpus, Failures) {
  EXPECT_THROW(parse_corpus(""), AllLinesInvalid);
  EXPECT_THROW(parse_corpus("\n \n"), AllLinesInvalid);
  EXPECT_THROW(parse_corpus("C?\n[C\n"), AllLinesInvalid);
  EXPECT_THROW(load_corpus("/nonexistent/dir/file.smi"), IoError);

  test::TempDir dir;
  write_file(dir / "one.smi", "C1CC1\n");
  EXPECT_EQ(load_corpus(dir / "one.smi").molecules, std::vector<std::string> { "C1CC1" });
}

CodebookFile sample(std::mt19937_64 &rng) {
  const std::vector<std::string> text { "CC(=O)N", "CC(=O)O", "c1ccccc1Cl",
                                        "CC(=O)Nc1ccccc1", "CCl" };
  SearchConfig cfg;
  cfg.min_count = 1;
  cfg.max_iters = 1 + rng() % 5;
  cfg.logstar_mode = rng() % 2 ? LogStarMode::kSimple : LogStarMode::kRissanen;
  const CompressionResult r = fgcompress(text, cfg);
  return CodebookFile::from(r.codebook, r.corpus.table(), cfg.logstar_mode,
                            corpus_fingerprint(text));
}

TEST(CodebookFile, RoundTrip) {
  std::mt19937_64 rng(31);
  test::TempDir dir;
  for (int trial = 0; trial < 10; ++trial) {
    const CodebookFile f = sample(rng);
    ASSERT_FALSE(f.entries.empty());
    save_codebook(f, dir / "cb.json");
    const CodebookFile g = load_codebook(dir / "cb.json");
    EXPECT_EQ(g, f);
    for (std::size_t i = 1; i < g.entries.size(); ++i)
      EXPECT_LT(g.entries[i - 1].iteration, g.entries[i].iteration);

    const Codebook cb = g.codebook();
    EXPECT_EQ(cb.size(), f.entries.size());
    EXPECT_EQ(g.table().size(), f.symbol_table.size());
  }
}

TEST(CodebookFile, VersionAndChecksumGate) {
  std::mt19937_64 rng(32);
  const std::string text = serialize_codebook(sample(rng));

  nlohmann::ordered_json j = nlohmann::ordered_json::parse(text);
  j["format_version"] = 2;
  EXPECT_THROW(parse_codebook(j.dump()), VersionMismatch);

  j = nlohmann::ordered_json::parse(text);
  j["entries"][0]["count"] = 999;
  EXPECT_THROW(parse_codebook(j.dump()), ChecksumMismatch);

  EXPECT_THROW(parse_codebook("{ not json"), DataError);
  j = nlohmann::ordered_json::parse(text);
  j.erase("entries");
  EXPECT_THROW(parse_codebook(j.dump()), DataError);
  EXPECT_THROW(load_codebook("/nonexistent/cb.json"), IoError);
}

TEST(Trace, TabSeparated) {
  IterationTrace t { { 1, "C(=O)N", 12, 100.0, 90.5 } };
  std::ostringstream out;
  write_trace(out, t);
  EXPECT_EQ(out.str(),
            "iteration\texpanded_smiles\tcount\ttotal_bits_before\ttotal_bits_after\t"
            "delta_bits\n1\tC(=O)N\t12\t100.000000\t90.500000\t9.500000\n");
}

TEST(Csv, QuotingAndShape) {
  EXPECT_EQ(csv::split_row(R"(a,"b,c","d""e")"),
            (std::vector<std::string> { "a", "b,c", "d\"e" }));
  EXPECT_EQ(csv::quote("x\"y"), "\"x\"\"y\"");
  EXPECT_THROW(csv::split_row("\"open"), DataError);

  const csv::Table t = csv::parse("smiles,target\nCC,1.5\n\nCO,2\n");
  EXPECT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.line_numbers, (std::vector<std::size_t> { 2, 4 }));
  EXPECT_EQ(t.column("target"), 1u);
  EXPECT_THROW(t.column("nope"), DataError);
  EXPECT_THROW(csv::parse("a,b\n1\n"), DataError);
}

TEST(Hash, StableFnv) {
  EXPECT_EQ(content_hash(""), "cbf29ce484222325");
  EXPECT_EQ(content_hash("a"), "af63dc4c8601ec8c");
}

}  // namespace
