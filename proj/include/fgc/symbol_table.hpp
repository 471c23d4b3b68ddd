//
// Project fgcompress - Copyright 2026 The fgcompress Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FGC_SYMBOL_TABLE_HPP_
#define FGC_SYMBOL_TABLE_HPP_

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fgc/errors.hpp"
#include "fgc/smiles_lexer.hpp"

namespace fgc {

// Corpus alphabet ids. Primitive symbols are dense indices into a
// SymbolTable; meta-symbols carry the high bit and the codebook entry id.
using SymbolId = std::uint32_t;

inline constexpr SymbolId kMetaBit = SymbolId { 1 } << 31;

constexpr bool is_meta(SymbolId id) noexcept {
  return (id & kMetaBit) != 0;
}

constexpr SymbolId meta_symbol(EntryId entry) noexcept {
  return kMetaBit | entry;
}

constexpr EntryId entry_of(SymbolId id) noexcept {
  return id & ~kMetaBit;
}

/**
 * Fixed probabilities of the primitive SMILES symbols, taken as their
 * relative token frequencies in the input corpus. The receiver is assumed to
 * know this table, so it is never updated after construction.
 */
class SymbolTable {
public:
  SymbolTable() = default;

  /// Symbols keep the given order; counts must be positive.
  static SymbolTable
  from_counts(const std::vector<std::pair<std::string, std::uint64_t>> &counts) {
    std::uint64_t total = 0;
    for (const auto &[sym, n]: counts) {
      if (n == 0)
        throw DataError("symbol '" + sym + "' has zero count");
      total += n;
    }
    std::vector<std::pair<std::string, double>> probs;
    probs.reserve(counts.size());
    for (const auto &[sym, n]: counts)
      probs.emplace_back(sym, static_cast<double>(n) / static_cast<double>(total));
    SymbolTable table = from_probabilities(std::move(probs));
    table.counts_.reserve(counts.size());
    for (const auto &[sym, n]: counts)
      table.counts_.push_back(n);
    return table;
  }

  static SymbolTable
  from_probabilities(std::vector<std::pair<std::string, double>> probs) {
    SymbolTable table;
    double sum = 0;
    for (auto &[sym, p]: probs) {
      if (!(p > 0.0 && p <= 1.0))
        throw DataError("probability of '" + sym + "' outside (0, 1]");
      TokenStream ts = tokenize(sym);
      if (ts.tokens.size() != 1)
        throw DataError("'" + sym + "' is not a single SMILES symbol");
      if (table.index_.contains(sym))
        throw DataError("duplicate symbol '" + sym + "'");
      const auto id = static_cast<SymbolId>(table.symbols_.size());
      table.index_.emplace(sym, id);
      table.kinds_.push_back(ts.tokens.front().kind);
      table.probs_.push_back(p);
      table.costs_.push_back(-std::log2(p));
      table.symbols_.push_back(std::move(sym));
      sum += p;
    }
    if (!probs.empty() && std::abs(sum - 1.0) > 1e-12)
      throw DataError("symbol probabilities sum to " + std::to_string(sum));
    return table;
  }

  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }

  std::optional<SymbolId> find(std::string_view text) const {
    auto it = index_.find(std::string(text));
    if (it == index_.end())
      return std::nullopt;
    return it->second;
  }

  SymbolId id(std::string_view text) const {
    auto found = find(text);
    if (!found)
      throw UnknownSymbol("symbol '" + std::string(text)
                          + "' is not in the symbol table");
    return *found;
  }

  const std::string &text(SymbolId id) const { return symbols_.at(id); }
  TokenKind kind(SymbolId id) const { return kinds_.at(id); }
  double probability(SymbolId id) const { return probs_.at(id); }

  /// -log2 P(s).
  double cost_bits(SymbolId id) const { return costs_[id]; }

  /// Raw corpus counts, empty when built from probabilities.
  const std::vector<std::uint64_t> &counts() const noexcept { return counts_; }

  const std::vector<std::string> &symbols() const noexcept { return symbols_; }

  friend bool operator==(const SymbolTable &a, const SymbolTable &b) {
    return a.symbols_ == b.symbols_ && a.probs_ == b.probs_;
  }

private:
  std::vector<std::string> symbols_;
  std::vector<TokenKind> kinds_;
  std::vector<double> probs_;
  std::vector<double> costs_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, SymbolId> index_;
};

}  // namespace fgc

#endif  // FGC_SYMBOL_TABLE_HPP_
