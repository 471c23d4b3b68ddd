//
// Project fgcompress - Copyright 2026 The fgcompress Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FGC_FINGERPRINT_HPP_
#define FGC_FINGERPRINT_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <vector>

#include "fgc/codebook.hpp"
#include "fgc/errors.hpp"
#include "fgc/smiles_lexer.hpp"

namespace fgc {

enum class MatchMode {
  kOverlapping,
  kNonOverlapping,
};

struct Fingerprint {
  // One count per codebook entry, in adoption order.
  std::vector<std::uint32_t> counts;

  friend bool operator==(const Fingerprint &, const Fingerprint &) = default;
};

/**
 * Count vectors over a fixed codebook. Matching is on SMILES symbols, so an
 * entry "CC" never matches inside "CCl".
 */
class Fingerprinter {
public:
  explicit Fingerprinter(const Codebook &codebook,
                         MatchMode mode = MatchMode::kOverlapping)
      : mode_(mode) {
    std::vector<const CodebookEntry *> ordered;
    for (const CodebookEntry &e: codebook.entries())
      ordered.push_back(&e);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const CodebookEntry *a, const CodebookEntry *b) {
                       return a->iteration < b->iteration;
                     });
    for (const CodebookEntry *e: ordered) {
      labels_.push_back(e->expanded_smiles);
      std::vector<std::uint32_t> pattern;
      for (const Token &t: tokenize(e->expanded_smiles).tokens)
        pattern.push_back(intern(t.text));
      patterns_.push_back(std::move(pattern));
    }
  }

  std::size_t size() const noexcept { return patterns_.size(); }

  /// Expanded SMILES of each vector index.
  const std::vector<std::string> &labels() const noexcept { return labels_; }

  Fingerprint operator()(std::string_view smiles) const {
    const TokenStream ts = tokenize(smiles);
    std::vector<std::uint32_t> seq;
    seq.reserve(ts.tokens.size());
    for (const Token &t: ts.tokens) {
      auto it = vocab_.find(t.text);
      seq.push_back(it == vocab_.end() ? kUnseen : it->second);
    }

    Fingerprint fp;
    fp.counts.reserve(patterns_.size());
    for (const auto &pattern: patterns_)
      fp.counts.push_back(count(seq, pattern));
    return fp;
  }

private:
  static constexpr std::uint32_t kUnseen = 0xFFFFFFFFu;

  std::uint32_t intern(const std::string &text) {
    auto [it, inserted]
        = vocab_.try_emplace(text, static_cast<std::uint32_t>(vocab_.size()));
    return it->second;
  }

  std::uint32_t count(std::span<const std::uint32_t> seq,
                      std::span<const std::uint32_t> pattern) const {
    std::uint32_t n = 0;
    const std::size_t len = pattern.size();
    for (std::size_t i = 0; i + len <= seq.size();) {
      if (std::equal(pattern.begin(), pattern.end(), seq.begin() + i)) {
        ++n;
        i += mode_ == MatchMode::kOverlapping ? 1 : len;
      } else {
        ++i;
      }
    }
    return n;
  }

  MatchMode mode_;
  std::vector<std::string> labels_;
  std::vector<std::vector<std::uint32_t>> patterns_;
  std::unordered_map<std::string, std::uint32_t> vocab_;
};

inline Fingerprint fingerprint(std::string_view molecule,
                               const Codebook &codebook,
                               MatchMode mode = MatchMode::kOverlapping) {
  return Fingerprinter(codebook, mode)(molecule);
}

struct RowError {
  std::size_t row;
  std::string message;
};

struct FingerprintMatrix {
  // Aligned with the input; empty where the molecule failed to lex.
  std::vector<std::optional<Fingerprint>> rows;
  std::vector<RowError> errors;
};

/// Order-preserving batch; lexing failures are collected per row.
inline FingerprintMatrix fingerprint_corpus(std::span<const std::string> molecules,
                                            const Codebook &codebook,
                                            MatchMode mode = MatchMode::kOverlapping,
                                            std::size_t threads = 1) {
  const Fingerprinter fp(codebook, mode);
  FingerprintMatrix out;
  out.rows.resize(molecules.size());
  std::vector<std::optional<std::string>> failures(molecules.size());

  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < molecules.size(); i += step) {
      try {
        out.rows[i] = fp(molecules[i]);
      } catch (const LexError &e) {
        failures[i] = e.what();
      }
    }
  };
  threads = std::max<std::size_t>(1, std::min(threads, molecules.size()));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back(work, t, threads);
  }

  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (failures[i])
      out.errors.push_back({ i, *failures[i] });
  }
  return out;
}

}  // namespace fgc

#endif  // FGC_FINGERPRINT_HPP_
