//
// Project fgcompress - Copyright 2026 The fgcompress Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FGC_SMILES_LEXER_HPP_
#define FGC_SMILES_LEXER_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fgc/errors.hpp"

namespace fgc {

using EntryId = std::uint32_t;

enum class TokenKind : std::uint8_t {
  kAtom,
  kBracketAtom,
  kBond,
  kRingClosure,
  kOpenParen,
  kCloseParen,
  kDot,
  kMetaSymbol,
};

constexpr bool is_atom_kind(TokenKind kind) noexcept {
  return kind == TokenKind::kAtom || kind == TokenKind::kBracketAtom;
}

/**
 * One SMILES symbol, or a codebook meta-symbol standing for a discovered
 * substring. Meta-symbols never come out of tokenize(); they are introduced
 * by replacement during search.
 */
struct Token {
  TokenKind kind;
  std::string text;
  std::optional<EntryId> meta_id;

  static Token meta(EntryId id) {
    return { TokenKind::kMetaSymbol, "{" + std::to_string(id) + "}", id };
  }

  friend bool operator==(const Token &, const Token &) = default;
};

struct TokenStream {
  std::vector<Token> tokens;
  std::string source;
};

namespace internal {
  inline bool is_bond_char(char c) {
    switch (c) {
    case '-':
    case '=':
    case '#':
    case '/':
    case '\\':
    case ':':
      return true;
    default:
      return false;
    }
  }

  inline bool is_digit(char c) {
    return c >= '0' && c <= '9';
  }
}  // namespace internal

/**
 * Splits a SMILES string into symbols by maximal munch.
 *
 * Grammar: organic-subset atoms (B C N O P S F I, and the two-letter Cl, Br),
 * aromatic atoms (b c n o p s), whole bracket atoms "[...]", bonds
 * (- = # / \ :), ring closures (a single digit or "%nn"), parentheses and
 * the dot. Anything else, including a bare '@' or '*', is a LexError.
 */
inline TokenStream tokenize(std::string_view smiles) {
  TokenStream result;
  result.source = std::string(smiles);

  auto push = [&](TokenKind kind, std::size_t begin, std::size_t len) {
    result.tokens.push_back(
        { kind, std::string(smiles.substr(begin, len)), std::nullopt });
  };

  std::size_t i = 0;
  while (i < smiles.size()) {
    const char c = smiles[i];
    switch (c) {
    case 'C':
      push(TokenKind::kAtom, i,
           i + 1 < smiles.size() && smiles[i + 1] == 'l' ? 2 : 1);
      break;
    case 'B':
      push(TokenKind::kAtom, i,
           i + 1 < smiles.size() && smiles[i + 1] == 'r' ? 2 : 1);
      break;
    case 'N':
    case 'O':
    case 'P':
    case 'S':
    case 'F':
    case 'I':
    case 'b':
    case 'c':
    case 'n':
    case 'o':
    case 'p':
    case 's':
      push(TokenKind::kAtom, i, 1);
      break;
    case '[': {
      std::size_t j = i + 1;
      while (j < smiles.size() && smiles[j] != ']') {
        if (smiles[j] == '[' || smiles[j] == ' ' || smiles[j] == '\t'
            || smiles[j] == '\n' || smiles[j] == '\r') {
          throw LexError("unterminated bracket atom", i);
        }
        ++j;
      }
      if (j == smiles.size())
        throw LexError("unterminated bracket atom", i);
      if (j == i + 1)
        throw LexError("empty bracket atom", i);
      push(TokenKind::kBracketAtom, i, j - i + 1);
      break;
    }
    case '(':
      push(TokenKind::kOpenParen, i, 1);
      break;
    case ')':
      push(TokenKind::kCloseParen, i, 1);
      break;
    case '.':
      push(TokenKind::kDot, i, 1);
      break;
    case '%':
      if (i + 2 >= smiles.size() || !internal::is_digit(smiles[i + 1])
          || !internal::is_digit(smiles[i + 2])) {
        throw LexError("ring closure '%' needs two digits", i);
      }
      push(TokenKind::kRingClosure, i, 3);
      break;
    default:
      if (internal::is_digit(c)) {
        push(TokenKind::kRingClosure, i, 1);
      } else if (internal::is_bond_char(c)) {
        push(TokenKind::kBond, i, 1);
      } else {
        throw LexError(std::string("unexpected character '") + c + "'", i);
      }
    }
    i += result.tokens.back().text.size();
  }

  return result;
}

/// Concatenates primitive token text. Meta-symbols need a codebook; see
/// Codebook::render.
inline std::string render(std::span<const Token> tokens) {
  std::string out;
  for (const Token &t: tokens) {
    if (t.kind == TokenKind::kMetaSymbol) {
      throw UnknownMetaSymbol("meta-symbol " + t.text
                              + " cannot be rendered without a codebook");
    }
    out += t.text;
  }
  return out;
}

inline std::string render(const TokenStream &stream) {
  return render(std::span<const Token>(stream.tokens));
}

}  // namespace fgc

#endif  // FGC_SMILES_LEXER_HPP_
