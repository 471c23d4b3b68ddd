//
// Project fgcompress - Copyright 2026 The fgcompress Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FGC_CODELENGTH_HPP_
#define FGC_CODELENGTH_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fgc/codebook.hpp"
#include "fgc/errors.hpp"
#include "fgc/smiles_lexer.hpp"
#include "fgc/symbol_table.hpp"

namespace fgc {

enum class LogStarMode {
  // log2(c0) + log2 n + log2 log2 n + ... (positive terms only).
  kRissanen,
  // max(log2 n, 0).
  kSimple,
};

inline constexpr double kRissanenConstant = 2.865064;

inline std::string_view to_string(LogStarMode mode) {
  return mode == LogStarMode::kRissanen ? "rissanen" : "simple";
}

inline LogStarMode parse_logstar_mode(std::string_view s) {
  if (s == "rissanen")
    return LogStarMode::kRissanen;
  if (s == "simple")
    return LogStarMode::kSimple;
  throw DataError("unknown log-star mode '" + std::string(s) + "'");
}

/// Universal code length of a positive integer, in bits.
inline double log_star(std::uint64_t n, LogStarMode mode) {
  if (n < 1)
    throw DomainError("log_star is defined for n >= 1");
  const double lg = std::log2(static_cast<double>(n));
  if (mode == LogStarMode::kSimple)
    return lg > 0 ? lg : 0.0;

  double bits = std::log2(kRissanenConstant);
  for (double term = lg; term > 0; term = std::log2(term))
    bits += term;
  return bits;
}

namespace internal {
  // ln(n!) without touching the global signgam.
  inline double log_factorial(double n) {
#if defined(__GLIBC__)
    int sign;
    return ::lgamma_r(n + 1.0, &sign);
#else
    return std::lgamma(n + 1.0);
#endif
  }

  inline double log_gamma(double x) {
    return log_factorial(x - 1.0);
  }

  // Both parts depend on the counts only through N, M and sum ln(s_m!).
  inline double part2_bits(std::uint64_t n, std::uint64_t m,
                           double sum_log_fact) {
    if (m < 2)
      return 0.0;
    const auto dn = static_cast<double>(n);
    const auto dm = static_cast<double>(m);
    const double nats = log_gamma(dn + dm) - log_gamma(dm) - sum_log_fact;
    return nats / std::numbers::ln2
           + 0.5 * std::log2((dm - 1.0) * std::numbers::pi) - 0.4;
  }

  inline double part3_bits(std::uint64_t n, double sum_log_fact) {
    return (log_factorial(static_cast<double>(n)) - sum_log_fact)
           / std::numbers::ln2;
  }
}  // namespace internal

/**
 * Occurrence counts of every vocabulary item (primitive symbol or codebook
 * meta-symbol) in the compressed corpus. Zero counts are dropped, so M is
 * the number of stored counts.
 */
class VocabularyCounts {
public:
  VocabularyCounts() = default;

  static VocabularyCounts from_counts(std::span<const std::uint64_t> counts) {
    VocabularyCounts vc;
    for (std::uint64_t c: counts)
      vc.add(c);
    return vc;
  }

  void add(std::uint64_t count) {
    if (count == 0)
      return;
    counts_.push_back(count);
    n_ += count;
  }

  std::span<const std::uint64_t> counts() const noexcept { return counts_; }
  std::uint64_t total() const noexcept { return n_; }
  std::uint64_t distinct() const noexcept { return counts_.size(); }

  double sum_log_factorials() const {
    double s = 0;
    for (std::uint64_t c: counts_)
      s += internal::log_factorial(static_cast<double>(c));
    return s;
  }

private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t n_ = 0;
};

struct MessageLength {
  double p1 = 0;
  double p2 = 0;
  double p3 = 0;
  double total = 0;

  static MessageLength of(double p1, double p2, double p3) {
    return { p1, p2, p3, p1 + p2 + p3 };
  }
};

/// Cost of sending one substring: its length, then each symbol at -log2 P(s).
inline double substring_cost(std::span<const SymbolId> expanded,
                             const SymbolTable &table, LogStarMode mode) {
  double bits = log_star(expanded.size(), mode);
  for (SymbolId s: expanded) {
    if (is_meta(s) || s >= table.size())
      throw UnknownSymbol("substring symbol is not a primitive table entry");
    bits += table.cost_bits(s);
  }
  return bits;
}

inline double substring_cost(std::span<const Token> tokens,
                             const SymbolTable &table, LogStarMode mode) {
  std::vector<SymbolId> ids;
  ids.reserve(tokens.size());
  for (const Token &t: tokens) {
    if (t.kind == TokenKind::kMetaSymbol)
      throw UnknownSymbol("substring_cost needs primitive tokens");
    ids.push_back(table.id(t.text));
  }
  return substring_cost(ids, table, mode);
}

/// Codebook size is sent as |H| + 1 so that an empty codebook is encodable.
inline double part1(const Codebook &codebook, const SymbolTable &table,
                    LogStarMode mode) {
  double bits = log_star(codebook.size() + 1, mode);
  for (const CodebookEntry &e: codebook.entries())
    bits += substring_cost(e.expanded, table, mode);
  return bits;
}

enum class DegeneratePolicy { kFallback, kStrict };

/// Wallace-Freeman multinomial length. M < 2 yields 0 bits unless strict.
inline double part2(const VocabularyCounts &vc,
                    DegeneratePolicy policy = DegeneratePolicy::kFallback) {
  if (vc.distinct() < 2 && policy == DegeneratePolicy::kStrict)
    throw DegenerateVocabulary("part2 needs at least two distinct items");
  return internal::part2_bits(vc.total(), vc.distinct(),
                              vc.sum_log_factorials());
}

/// log2 of the multinomial coefficient N! / (s_1! ... s_M!).
inline double part3(const VocabularyCounts &vc) {
  return internal::part3_bits(vc.total(), vc.sum_log_factorials());
}

inline MessageLength total_length(const Codebook &codebook,
                                  const VocabularyCounts &counts,
                                  const SymbolTable &table, LogStarMode mode) {
  return MessageLength::of(part1(codebook, table, mode), part2(counts),
                           part3(counts));
}

}  // namespace fgc

#endif  // FGC_CODELENGTH_HPP_
