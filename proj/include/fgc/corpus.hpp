//
// Project fgcompress - Copyright 2026 The fgcompress Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FGC_CORPUS_HPP_
#define FGC_CORPUS_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fgc/codebook.hpp"
#include "fgc/codelength.hpp"
#include "fgc/errors.hpp"
#include "fgc/smiles_lexer.hpp"
#include "fgc/symbol_table.hpp"

namespace fgc {

using Molecule = std::vector<SymbolId>;

/**
 * The dataset as per-molecule symbol streams over the corpus alphabet.
 * Streams start out primitive and gain meta-symbols as substrings are
 * adopted; the symbol table is fixed at construction.
 */
class TokenCorpus {
public:
  TokenCorpus() = default;

  static TokenCorpus from_smiles(std::span<const std::string> smiles) {
    if (smiles.empty())
      throw EmptyCorpus("corpus has no molecules");

    std::vector<std::vector<Token>> lexed;
    lexed.reserve(smiles.size());
    std::vector<std::pair<std::string, std::uint64_t>> counts;
    std::unordered_map<std::string, std::size_t> seen;
    for (const std::string &s: smiles) {
      lexed.push_back(tokenize(s).tokens);
      for (const Token &t: lexed.back()) {
        auto [it, inserted] = seen.try_emplace(t.text, counts.size());
        if (inserted)
          counts.emplace_back(t.text, 0);
        ++counts[it->second].second;
      }
    }

    TokenCorpus corpus;
    corpus.table_ = SymbolTable::from_counts(counts);
    corpus.sources_.assign(smiles.begin(), smiles.end());
    corpus.molecules_.reserve(lexed.size());
    for (const auto &tokens: lexed) {
      Molecule m;
      m.reserve(tokens.size());
      for (const Token &t: tokens)
        m.push_back(corpus.table_.id(t.text));
      corpus.molecules_.push_back(std::move(m));
    }
    return corpus;
  }

  const SymbolTable &table() const noexcept { return table_; }
  std::span<const Molecule> molecules() const noexcept { return molecules_; }
  std::vector<Molecule> &mutable_molecules() noexcept { return molecules_; }
  const std::vector<std::string> &sources() const noexcept { return sources_; }
  std::size_t size() const noexcept { return molecules_.size(); }

  std::uint64_t total_tokens() const {
    std::uint64_t n = 0;
    for (const auto &m: molecules_)
      n += m.size();
    return n;
  }

  TokenStream stream(std::size_t i) const {
    TokenStream ts;
    ts.source = sources_.at(i);
    for (SymbolId s: molecules_.at(i)) {
      if (is_meta(s))
        ts.tokens.push_back(Token::meta(entry_of(s)));
      else
        ts.tokens.push_back({ table_.kind(s), table_.text(s), std::nullopt });
    }
    return ts;
  }

  std::string render(std::size_t i, const Codebook &codebook) const {
    return codebook.render(molecules_.at(i), table_);
  }

  /// Counts of every primitive and meta symbol currently in the streams.
  VocabularyCounts vocabulary() const {
    std::vector<std::uint64_t> prim(table_.size(), 0);
    std::map<EntryId, std::uint64_t> meta;
    for (const auto &m: molecules_) {
      for (SymbolId s: m) {
        if (is_meta(s))
          ++meta[entry_of(s)];
        else
          ++prim[s];
      }
    }
    VocabularyCounts vc = VocabularyCounts::from_counts(prim);
    for (const auto &[id, c]: meta)
      vc.add(c);
    return vc;
  }

  /// Occurrences of one codebook entry's meta-symbol.
  std::uint64_t meta_count(EntryId id) const {
    std::uint64_t n = 0;
    for (const auto &m: molecules_)
      n += static_cast<std::uint64_t>(std::count(m.begin(), m.end(), meta_symbol(id)));
    return n;
  }

private:
  SymbolTable table_;
  std::vector<Molecule> molecules_;
  std::vector<std::string> sources_;
};

/// Message length of the corpus with only its primitive symbols and an
/// empty codebook.
inline MessageLength symbol_only_length(const TokenCorpus &corpus,
                                        LogStarMode mode) {
  VocabularyCounts vc;
  for (std::uint64_t c: corpus.table().counts())
    vc.add(c);
  return total_length(Codebook {}, vc, corpus.table(), mode);
}

inline MessageLength current_length(const TokenCorpus &corpus,
                                    const Codebook &codebook,
                                    LogStarMode mode) {
  return total_length(codebook, corpus.vocabulary(), corpus.table(), mode);
}

}  // namespace fgc

#endif  // FGC_CORPUS_HPP_
