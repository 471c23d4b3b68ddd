//
// Project fgcompress - Copyright 2026 The fgcompress Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fgc/fingerprint.hpp"
#include "fgc/search.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

namespace {
using namespace fgc;

// Codebook of literal entries over a table built from the entries themselves.
Codebook literal_codebook(const std::vector<std::string> &entries) {
  std::vector<std::pair<std::string, std::uint64_t>> counts;
  for (const auto &e: entries) {
    for (const Token &t: tokenize(e).tokens) {
      auto it = std::find_if(counts.begin(), counts.end(),
                             [&](const auto &p) { return p.first == t.text; });
      if (it == counts.end())
        counts.emplace_back(t.text, 1);
      else
        ++it->second;
    }
  }
  const SymbolTable table = SymbolTable::from_counts(counts);
  Codebook cb;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    CodebookEntry e;
    e.id = static_cast<EntryId>(i);
    for (const Token &t: tokenize(entries[i]).tokens)
      e.expanded.push_back(table.id(t.text));
    e.surface = e.expanded;
    e.expanded_smiles = entries[i];
    e.iteration = i + 1;
    e.count = 1;
    cb.add(std::move(e));
  }
  return cb;
}

std::vector<std::string> token_texts(std::string_view s) {
  std::vector<std::string> out;
  for (const Token &t: tokenize(s).tokens)
    out.push_back(t.text);
  return out;
}

TEST(Fingerprint, Examples) {
  EXPECT_EQ(fingerprint("CC", literal_codebook({ "C(=O)N" })).counts,
            std::vector<std::uint32_t> { 0 });
  EXPECT_EQ(fingerprint("CC(=O)NC(=O)C", literal_codebook({ "C(=O)" })).counts,
            std::vector<std::uint32_t> { 2 });
  EXPECT_EQ(fingerprint("CCC", literal_codebook({ "CC" })).counts,
            std::vector<std::uint32_t> { 2 });
  EXPECT_EQ(fingerprint("CCC", literal_codebook({ "CC" }), MatchMode::kNonOverlapping).counts,
            std::vector<std::uint32_t> { 1 });
}

TEST(Fingerprint, MatchesSymbolsNotCharacters) {
  EXPECT_EQ(fingerprint("CCl", literal_codebook({ "CC" })).counts,
            std::vector<std::uint32_t> { 0 });
  EXPECT_EQ(fingerprint("[CH]C", literal_codebook({ "C" , "CC" })).counts,
            (std::vector<std::uint32_t> { 1, 0 }));
}

TEST(Fingerprint, IndexFollowsIteration) {
  Codebook cb = literal_codebook({ "CO", "CN" });
  // Re-add with swapped iterations.
  Codebook swapped;
  for (const CodebookEntry &e: cb.entries()) {
    CodebookEntry c = e;
    c.iteration = 10 - e.iteration;
    swapped.add(c);
  }
  const Fingerprinter fp(swapped);
  EXPECT_EQ(fp.labels(), (std::vector<std::string> { "CN", "CO" }));
  EXPECT_EQ(fp("CNCOCO").counts, (std::vector<std::uint32_t> { 1, 2 }));
}

TEST(Fingerprint, NaiveOracle) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    std::string mol;
    for (auto s: test::random_symbols(rng, 1 + trial % 30))
      mol += s;
    std::vector<std::string> entries;
    const auto mol_tokens = token_texts(mol);
    std::uniform_int_distribution<std::size_t> n_entries(1, 5);
    const std::size_t ne = n_entries(rng);
    for (std::size_t k = 0; k < ne * 4 && entries.size() < ne; ++k) {
      std::string e;
      if (k % 2 == 0 && mol_tokens.size() >= 2) {
        // Slice the molecule so that matches actually happen.
        std::uniform_int_distribution<std::size_t> start(0, mol_tokens.size() - 2);
        const std::size_t a = start(rng);
        std::uniform_int_distribution<std::size_t> len(1, std::min<std::size_t>(4, mol_tokens.size() - a));
        for (std::size_t j = a; j < a + len(rng); ++j)
          e += mol_tokens[j];
      } else {
        for (auto s: test::random_symbols(rng, 1 + k % 3))
          e += s;
      }
      if (std::find(entries.begin(), entries.end(), e) == entries.end())
        entries.push_back(e);
    }
    const Codebook cb = literal_codebook(entries);
    const Fingerprint fp = fingerprint(mol, cb);
    ASSERT_EQ(fp.counts.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i)
      ASSERT_EQ(fp.counts[i], oracle::count_overlapping(mol_tokens, token_texts(entries[i])))
          << mol << " / " << entries[i];
  }
}

// With one-character symbols only, token matching equals substring search.
TEST(Fingerprint, CharacterOracle) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto corpus = test::random_corpus(rng, 30, 25);
    SearchConfig cfg;
    cfg.max_iters = 6;
    cfg.max_len = 5;
    const CompressionResult r = fgcompress(corpus, cfg);
    const Fingerprinter fp(r.codebook);
    for (const auto &m: corpus) {
      const Fingerprint f = fp(m);
      for (std::size_t i = 0; i < fp.size(); ++i)
        ASSERT_EQ(f.counts[i], oracle::count_substring(m, fp.labels()[i]));
    }
  }
}

TEST(FingerprintCorpus, BatchMatchesSingle) {
  std::mt19937_64 rng(9);
  const auto corpus = test::random_corpus(rng, 60, 20);
  SearchConfig cfg;
  cfg.max_iters = 8;
  const CompressionResult r = fgcompress(corpus, cfg);
  for (std::size_t threads: { 1u, 4u }) {
    const FingerprintMatrix m = fingerprint_corpus(corpus, r.codebook,
                                                   MatchMode::kOverlapping, threads);
    ASSERT_EQ(m.rows.size(), corpus.size());
    EXPECT_TRUE(m.errors.empty());
    for (std::size_t i = 0; i < corpus.size(); ++i)
      EXPECT_EQ(*m.rows[i], fingerprint(corpus[i], r.codebook));
  }

  std::vector<std::size_t> perm(corpus.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::string> shuffled;
  for (std::size_t p: perm)
    shuffled.push_back(corpus[p]);
  const FingerprintMatrix a = fingerprint_corpus(corpus, r.codebook);
  const FingerprintMatrix b = fingerprint_corpus(shuffled, r.codebook);
  for (std::size_t i = 0; i < perm.size(); ++i)
    EXPECT_EQ(*b.rows[i], *a.rows[perm[i]]);
}

TEST(FingerprintCorpus, ShapesAndErrors) {
  const Codebook cb = literal_codebook({ "CC", "CO", "C=O", "N", "c1ccccc1" });
  EXPECT_TRUE(fingerprint_corpus({}, cb).rows.empty());

  const std::vector<std::string> mols { "CCO", "C=O", "c1ccccc1N" };
  const FingerprintMatrix m = fingerprint_corpus(mols, cb);
  ASSERT_EQ(m.rows.size(), 3u);
  for (const auto &row: m.rows)
    EXPECT_EQ(row->counts.size(), 5u);

  const std::vector<std::string> bad { "CC", "C*C", "CO" };
  const FingerprintMatrix e = fingerprint_corpus(bad, cb);
  ASSERT_EQ(e.errors.size(), 1u);
  EXPECT_EQ(e.errors[0].row, 1u);
  EXPECT_FALSE(e.rows[1].has_value());
  EXPECT_TRUE(e.rows[2].has_value());
}

TEST(Fingerprint, RetiredEntriesAreAbsent) {
  const std::vector<std::string> text { "CCO", "CCO", "CCN" };
  TokenCorpus c = TokenCorpus::from_smiles(text);
  Codebook cb;
  const SymbolTable &t = c.table();
  const Adoption a = apply_candidate(
      make_candidate({ t.id("C"), t.id("O") }, c, cb), c, cb);
  apply_candidate(make_candidate({ t.id("C"), meta_symbol(a.id) }, c, cb), c, cb);
  const Fingerprinter fp(cb);
  EXPECT_EQ(fp.labels(), std::vector<std::string> { "CCO" });
}

}  // namespace
