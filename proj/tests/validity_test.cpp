//
// Project fgcompress - Copyright 2026 The fgcompress Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <optional>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fgc/codebook.hpp"
#include "fgc/corpus.hpp"
#include "fgc/search.hpp"
#include "fgc/validity.hpp"

#include "test_util.hpp"

namespace {
using namespace fgc;

std::optional<ValidityRule> rule_of(std::string_view smiles) {
  const TokenStream ts = tokenize(smiles);
  const ValidityVerdict v = is_valid_substring(ts.tokens);
  EXPECT_EQ(v.valid, !v.violated_rule.has_value()) << smiles;
  return v.violated_rule;
}

TEST(Validity, LiteralExclusions) {
  EXPECT_EQ(rule_of("c1cccc"), ValidityRule::kUnpairedRingDigit);
  EXPECT_EQ(rule_of("."), ValidityRule::kContainsDot);
  EXPECT_EQ(rule_of("="), ValidityRule::kDanglingBond);
  EXPECT_EQ(rule_of("C(F)(F)F"), std::nullopt);
}

TEST(Validity, ContainsDot) {
  EXPECT_EQ(rule_of("C.C"), ValidityRule::kContainsDot);
  EXPECT_EQ(rule_of("CC"), std::nullopt);
}

TEST(Validity, Parentheses) {
  EXPECT_EQ(rule_of("C(C"), ValidityRule::kUnmatchedParen);
  EXPECT_EQ(rule_of("C)C"), ValidityRule::kUnmatchedParen);
  EXPECT_EQ(rule_of(")(C"), ValidityRule::kUnmatchedParen);
  EXPECT_EQ(rule_of("C(C)C"), std::nullopt);
  EXPECT_EQ(rule_of("(C)"), std::nullopt);
  EXPECT_EQ(rule_of("C(C(O)N)S"), std::nullopt);
}

TEST(Validity, BracketAtoms) {
  // The lexer never produces a half bracket atom; build one by hand.
  const std::vector<Token> broken {
    { TokenKind::kAtom, "C", {} },
    { TokenKind::kBracketAtom, "[NH", {} },
  };
  EXPECT_EQ(is_valid_substring(broken).violated_rule,
            ValidityRule::kUnmatchedBracket);
  EXPECT_EQ(rule_of("C[NH3+]C"), std::nullopt);
}

TEST(Validity, DanglingBond) {
  EXPECT_EQ(rule_of("(=)"), ValidityRule::kDanglingBond);
  EXPECT_EQ(rule_of("C(=)"), ValidityRule::kDanglingBond);
  EXPECT_EQ(rule_of("C1=1"), ValidityRule::kDanglingBond);
  EXPECT_EQ(rule_of("=O"), std::nullopt);
  EXPECT_EQ(rule_of("C="), std::nullopt);
  EXPECT_EQ(rule_of("[O-]#"), std::nullopt);
  EXPECT_EQ(rule_of("C(=O)"), std::nullopt);
}

TEST(Validity, RingLabels) {
  EXPECT_EQ(rule_of("C1CC1"), std::nullopt);
  EXPECT_EQ(rule_of("C1CC1C1"), ValidityRule::kUnpairedRingDigit);
  EXPECT_EQ(rule_of("C1CC2CC1C2"), std::nullopt);
  EXPECT_EQ(rule_of("C1CC1C1CC1"), std::nullopt);
  EXPECT_EQ(rule_of("C%12CC%12"), std::nullopt);
  EXPECT_EQ(rule_of("C%12CC2"), ValidityRule::kUnpairedRingDigit);
}

TEST(Validity, ReportsFirstRuleInFixedOrder) {
  EXPECT_EQ(rule_of("C(1.="), ValidityRule::kContainsDot);
  EXPECT_EQ(rule_of("C(1="), ValidityRule::kUnmatchedParen);
  EXPECT_EQ(rule_of("(=)1"), ValidityRule::kDanglingBond);
}

TEST(Validity, ReferenceListPasses) {
  const auto lines = test::read_lines(test::data_path("reference_substructures.smi"));
  ASSERT_EQ(lines.size(), 500u);
  for (const auto &s: lines) {
    const ValidityVerdict v = is_valid_substring(tokenize(s).tokens);
    EXPECT_TRUE(v.valid) << s << " -> " << to_string(*v.violated_rule);
  }
}

TEST(Validity, MetaSymbolsAreExpanded) {
  const SymbolTable table = SymbolTable::from_counts(
      { { "C", 4 }, { "(", 1 }, { "=", 1 }, { "O", 1 }, { ")", 1 }, { "1", 2 } });
  auto ids = [&](std::string_view s) {
    std::vector<SymbolId> out;
    for (const Token &t: tokenize(s).tokens)
      out.push_back(table.id(t.text));
    return out;
  };
  Codebook cb;
  cb.add({ 0, ids("C("), ids("C("), "C(", 1, 1, 0 });
  cb.add({ 1, ids("C1"), ids("C1"), "C1", 2, 1, 0 });

  const Token open_half = Token::meta(0);
  const std::vector<Token> closed { open_half, { TokenKind::kAtom, "O", {} },
                                    { TokenKind::kCloseParen, ")", {} } };
  EXPECT_TRUE(is_valid_substring(closed, cb).valid);
  const std::vector<Token> open { open_half, { TokenKind::kAtom, "O", {} } };
  EXPECT_EQ(is_valid_substring(open, cb).violated_rule,
            ValidityRule::kUnmatchedParen);
  EXPECT_EQ(is_valid_substring(std::vector<Token> { Token::meta(1) }, cb).violated_rule,
            ValidityRule::kUnpairedRingDigit);
  EXPECT_TRUE(
      is_valid_substring(std::vector<Token> { Token::meta(1), Token::meta(1) }, cb).valid);
  EXPECT_THROW(is_valid_substring(std::vector<Token> { Token::meta(9) }, cb),
               UnknownMetaSymbol);
}

// A window over meta-symbols gets the same verdict as its rendered text.
TEST(Validity, ClosedUnderRendering) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const auto corpus_text = test::random_corpus(rng, 6, 12);
    TokenCorpus corpus = TokenCorpus::from_smiles(corpus_text);
    Codebook cb;
    std::uniform_int_distribution<std::size_t> mol(0, corpus.size() - 1);
    for (int step = 0; step < 3; ++step) {
      const Molecule &m = corpus.molecules()[mol(rng)];
      if (m.size() < 2)
        continue;
      std::uniform_int_distribution<std::size_t> start(0, m.size() - 2);
      const std::size_t i = start(rng);
      std::vector<SymbolId> window(m.begin() + static_cast<std::ptrdiff_t>(i),
                                   m.begin() + static_cast<std::ptrdiff_t>(i + 2));
      if (cb.contains_expanded(cb.expand(window)))
        continue;
      apply_candidate(make_candidate(window, corpus, cb), corpus, cb);
    }
    for (std::size_t k = 0; k < corpus.size(); ++k) {
      const TokenStream ts = corpus.stream(k);
      for (std::size_t a = 0; a < ts.tokens.size(); ++a) {
        for (std::size_t b = a + 1; b <= ts.tokens.size(); ++b) {
          const std::span<const Token> w(ts.tokens.data() + a, b - a);
          const ValidityVerdict over_meta = is_valid_substring(w, cb);
          const ValidityVerdict prim
              = is_valid_substring(tokenize(cb.render(w)).tokens);
          ASSERT_EQ(over_meta.valid, prim.valid);
          ASSERT_EQ(over_meta.violated_rule, prim.violated_rule);
        }
      }
    }
  }
}

}  // namespace
