//
// Project fgcompress - Copyright 2026 The fgcompress Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FGC_VALIDITY_HPP_
#define FGC_VALIDITY_HPP_

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fgc/codebook.hpp"
#include "fgc/smiles_lexer.hpp"
#include "fgc/symbol_table.hpp"

namespace fgc {

enum class ValidityRule {
  kUnmatchedParen,
  kUnmatchedBracket,
  kDanglingBond,
  kUnpairedRingDigit,
  kContainsDot,
};

inline std::string_view to_string(ValidityRule rule) {
  switch (rule) {
  case ValidityRule::kUnmatchedParen:
    return "UnmatchedParen";
  case ValidityRule::kUnmatchedBracket:
    return "UnmatchedBracket";
  case ValidityRule::kDanglingBond:
    return "DanglingBond";
  case ValidityRule::kUnpairedRingDigit:
    return "UnpairedRingDigit";
  case ValidityRule::kContainsDot:
    return "ContainsDot";
  }
  return "?";
}

struct ValidityVerdict {
  bool valid = true;
  std::optional<ValidityRule> violated_rule;

  static ValidityVerdict ok() { return {}; }
  static ValidityVerdict fail(ValidityRule r) { return { false, r }; }

  explicit operator bool() const noexcept { return valid; }
};

namespace internal {
  /**
   * Core filter over a primitive sequence, where `kind(i)` and `text(i)`
   * describe the i-th symbol. Rules are checked in a fixed order so the
   * reported rule is deterministic when several are violated.
   */
  template <class KindFn, class TextFn>
  ValidityVerdict check_substring(std::size_t n, KindFn kind, TextFn text) {
    for (std::size_t i = 0; i < n; ++i) {
      if (kind(i) == TokenKind::kDot)
        return ValidityVerdict::fail(ValidityRule::kContainsDot);
    }

    for (std::size_t i = 0; i < n; ++i) {
      if (kind(i) != TokenKind::kBracketAtom)
        continue;
      std::string_view t = text(i);
      if (t.size() < 2 || t.front() != '[' || t.back() != ']')
        return ValidityVerdict::fail(ValidityRule::kUnmatchedBracket);
    }

    int depth = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (kind(i) == TokenKind::kOpenParen) {
        ++depth;
      } else if (kind(i) == TokenKind::kCloseParen) {
        if (--depth < 0)
          return ValidityVerdict::fail(ValidityRule::kUnmatchedParen);
      }
    }
    if (depth != 0)
      return ValidityVerdict::fail(ValidityRule::kUnmatchedParen);

    // A bond needs an atom immediately before or after it in the window.
    for (std::size_t i = 0; i < n; ++i) {
      if (kind(i) != TokenKind::kBond)
        continue;
      const bool before = i > 0 && is_atom_kind(kind(i - 1));
      const bool after = i + 1 < n && is_atom_kind(kind(i + 1));
      if (!before && !after)
        return ValidityVerdict::fail(ValidityRule::kDanglingBond);
    }

    // Every ring label must occur an even number of times.
    std::vector<std::string_view> open;
    for (std::size_t i = 0; i < n; ++i) {
      if (kind(i) != TokenKind::kRingClosure)
        continue;
      auto it = std::find(open.begin(), open.end(), text(i));
      if (it == open.end())
        open.push_back(text(i));
      else
        open.erase(it);
    }
    if (!open.empty())
      return ValidityVerdict::fail(ValidityRule::kUnpairedRingDigit);

    return ValidityVerdict::ok();
  }
}  // namespace internal

/// Filter over an expanded primitive sequence of table symbols.
inline ValidityVerdict is_valid_expanded(std::span<const SymbolId> expanded,
                                         const SymbolTable &table) {
  return internal::check_substring(
      expanded.size(), [&](std::size_t i) { return table.kind(expanded[i]); },
      [&](std::size_t i) -> std::string_view {
        return table.text(expanded[i]);
      });
}

/// Meta-symbols are expanded through the codebook before the rules apply.
inline ValidityVerdict is_valid_substring(std::span<const Token> tokens,
                                          const Codebook &codebook) {
  std::vector<Token> expanded;
  expanded.reserve(tokens.size());
  for (const Token &t: tokens) {
    if (t.kind != TokenKind::kMetaSymbol) {
      expanded.push_back(t);
      continue;
    }
    const CodebookEntry *e = t.meta_id ? codebook.find(*t.meta_id) : nullptr;
    if (e == nullptr)
      throw UnknownMetaSymbol("unknown meta-symbol " + t.text);
    for (Token &sub: tokenize(e->expanded_smiles).tokens)
      expanded.push_back(std::move(sub));
  }
  return internal::check_substring(
      expanded.size(), [&](std::size_t i) { return expanded[i].kind; },
      [&](std::size_t i) -> std::string_view { return expanded[i].text; });
}

inline ValidityVerdict is_valid_substring(std::span<const Token> tokens) {
  return is_valid_substring(tokens, Codebook {});
}

}  // namespace fgc

#endif  // FGC_VALIDITY_HPP_
