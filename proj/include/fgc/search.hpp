//
// Project fgcompress - Copyright 2026 The fgcompress Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FGC_SEARCH_HPP_
#define FGC_SEARCH_HPP_

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fgc/codebook.hpp"
#include "fgc/codelength.hpp"
#include "fgc/corpus.hpp"
#include "fgc/errors.hpp"
#include "fgc/symbol_table.hpp"
#include "fgc/validity.hpp"

namespace fgc {

struct SearchConfig {
  static constexpr std::size_t kLargeCorpusMaxLen = 8;
  static constexpr std::size_t kSmallDatasetMaxLen = 15;
  static constexpr std::size_t kMaxWindow = 64;

  std::size_t max_len = kLargeCorpusMaxLen;
  std::size_t max_iters = 500;
  // 1 disables pruning of singleton windows.
  std::uint64_t min_count = 2;
  LogStarMode logstar_mode = LogStarMode::kRissanen;
  std::uint64_t seed = 0;
  // 0 means one worker per hardware thread.
  std::size_t threads = 1;
  // Full lossless and count re-scan after every step instead of a sample.
  bool verify_every_step = false;

  void validate() const {
    if (max_len < 2 || max_len > kMaxWindow)
      throw DataError("max_len must be in [2, "
                      + std::to_string(kMaxWindow) + "]");
    if (max_iters < 1)
      throw DataError("max_iters must be at least 1");
    if (min_count < 1)
      throw DataError("min_count must be at least 1");
  }

  std::size_t worker_count() const {
    if (threads != 0)
      return threads;
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
  }
};

struct Candidate {
  // Window over the current corpus alphabet (may hold meta-symbols).
  std::vector<SymbolId> tokens;
  std::vector<SymbolId> expanded;
  std::uint64_t nonoverlap_count = 0;
  MessageLength projected_length;
};

struct TraceRow {
  std::size_t iteration = 0;
  std::string expanded_smiles;
  std::uint64_t count = 0;
  double total_before = 0;
  double total_after = 0;

  double delta_bits() const { return total_before - total_after; }
};

using IterationTrace = std::vector<TraceRow>;

inline std::string expanded_text(std::span<const SymbolId> expanded,
                                 const SymbolTable &table) {
  std::string out;
  for (SymbolId s: expanded)
    out += table.text(s);
  return out;
}

/// Leftmost non-overlapping occurrences of `window` in one stream.
inline std::uint64_t count_nonoverlapping(std::span<const SymbolId> stream,
                                          std::span<const SymbolId> window) {
  if (window.empty())
    return 0;
  std::uint64_t n = 0;
  for (std::size_t i = 0; i + window.size() <= stream.size();) {
    if (std::equal(window.begin(), window.end(), stream.begin() + i)) {
      ++n;
      i += window.size();
    } else {
      ++i;
    }
  }
  return n;
}

inline std::uint64_t count_nonoverlapping(const TokenCorpus &corpus,
                                          std::span<const SymbolId> window) {
  std::uint64_t n = 0;
  for (const Molecule &m: corpus.molecules())
    n += count_nonoverlapping(m, window);
  return n;
}

/// Builds a candidate for an explicit window of the current corpus.
inline Candidate make_candidate(std::vector<SymbolId> window,
                                const TokenCorpus &corpus,
                                const Codebook &codebook) {
  Candidate c;
  c.expanded = codebook.expand(window);
  c.nonoverlap_count = count_nonoverlapping(corpus, window);
  c.tokens = std::move(window);
  return c;
}

/**
 * Everything needed to score candidates against one frozen
 * (corpus, codebook) snapshot. Projections touch only the symbols inside
 * the candidate window, so scoring is O(window length).
 */
class ScoringState {
public:
  ScoringState(const TokenCorpus &corpus, const Codebook &codebook,
               LogStarMode mode)
      : table_(&corpus.table()), mode_(mode),
        prim_(corpus.table().size(), 0), meta_(codebook.next_id(), 0),
        entry_cost_(codebook.next_id(), 0.0),
        codebook_size_(codebook.size()) {
    for (const Molecule &m: corpus.molecules()) {
      n_ += m.size();
      for (SymbolId s: m) {
        if (is_meta(s)) {
          if (entry_of(s) >= meta_.size() || !codebook.is_active(entry_of(s)))
            throw StateMismatch("corpus references inactive entry "
                                + std::to_string(entry_of(s)));
          ++meta_[entry_of(s)];
        } else {
          ++prim_[s];
        }
      }
    }
    for (std::uint64_t c: prim_)
      add_count(c);
    for (std::uint64_t c: meta_)
      add_count(c);

    p1_ = log_star(codebook_size_ + 1, mode_);
    for (const CodebookEntry &e: codebook.entries()) {
      entry_cost_[e.id] = substring_cost(e.expanded, *table_, mode_);
      p1_ += entry_cost_[e.id];
      expansions_.insert(e.expanded);
    }
    current_ = MessageLength::of(p1_, internal::part2_bits(n_, m_, sum_lf_),
                                 internal::part3_bits(n_, sum_lf_));
  }

  const MessageLength &current() const noexcept { return current_; }
  const SymbolTable &table() const noexcept { return *table_; }
  LogStarMode mode() const noexcept { return mode_; }

  bool known_expansion(const std::vector<SymbolId> &expanded) const {
    return expansions_.contains(expanded);
  }

  std::uint64_t count(SymbolId s) const {
    return is_meta(s) ? meta_.at(entry_of(s)) : prim_.at(s);
  }

  /// Total length after replacing `k` disjoint occurrences of `window`.
  MessageLength project(std::span<const SymbolId> window,
                        std::span<const SymbolId> expanded,
                        std::uint64_t k) const {
    if (window.size() < 2 || window.size() > SearchConfig::kMaxWindow)
      throw DataError("candidate window length out of range");
    if (k == 0)
      throw StateMismatch("candidate does not occur in the corpus");

    std::array<std::pair<SymbolId, std::uint64_t>, SearchConfig::kMaxWindow>
        distinct;
    std::size_t nd = 0;
    for (SymbolId s: window) {
      std::size_t j = 0;
      while (j < nd && distinct[j].first != s)
        ++j;
      if (j == nd)
        distinct[nd++] = { s, 0 };
      ++distinct[j].second;
    }

    const std::uint64_t len = window.size();
    const std::uint64_t n2 = n_ - k * (len - 1);
    std::uint64_t m2 = m_ + 1;
    double s2 = sum_lf_ + internal::log_factorial(static_cast<double>(k));
    std::size_t removed = 0;
    double removed_cost = 0;
    for (std::size_t j = 0; j < nd; ++j) {
      const auto [s, mult] = distinct[j];
      const std::uint64_t old = count(s);
      if (k * mult > old)
        throw StateMismatch("candidate occurrences exceed symbol counts");
      const std::uint64_t now = old - k * mult;
      s2 += internal::log_factorial(static_cast<double>(now))
            - internal::log_factorial(static_cast<double>(old));
      if (now == 0) {
        --m2;
        if (is_meta(s)) {
          ++removed;
          removed_cost += entry_cost_[entry_of(s)];
        }
      }
    }

    const std::size_t h2 = codebook_size_ + 1 - removed;
    const double p1 = p1_ - log_star(codebook_size_ + 1, mode_)
                      + log_star(h2 + 1, mode_) - removed_cost
                      + substring_cost(expanded, *table_, mode_);
    return MessageLength::of(p1, internal::part2_bits(n2, m2, s2),
                             internal::part3_bits(n2, s2));
  }

private:
  void add_count(std::uint64_t c) {
    if (c == 0)
      return;
    ++m_;
    sum_lf_ += internal::log_factorial(static_cast<double>(c));
  }

  const SymbolTable *table_;
  LogStarMode mode_;
  std::vector<std::uint64_t> prim_;
  std::vector<std::uint64_t> meta_;
  std::vector<double> entry_cost_;
  std::size_t codebook_size_;
  std::uint64_t n_ = 0;
  std::uint64_t m_ = 0;
  double sum_lf_ = 0;
  double p1_ = 0;
  MessageLength current_;
  std::set<std::vector<SymbolId>> expansions_;
};

/**
 * Strict total order used to pick the adopted candidate: smaller projected
 * total, then shorter expansion, then the lexicographically smaller expanded
 * string, then the smaller surface window.
 */
inline bool candidate_precedes(const Candidate &a, const Candidate &b,
                               const SymbolTable &table) {
  if (a.projected_length.total != b.projected_length.total)
    return a.projected_length.total < b.projected_length.total;
  if (a.expanded.size() != b.expanded.size())
    return a.expanded.size() < b.expanded.size();
  if (a.expanded != b.expanded) {
    const std::string sa = expanded_text(a.expanded, table);
    const std::string sb = expanded_text(b.expanded, table);
    if (sa != sb)
      return sa < sb;
  }
  return a.tokens < b.tokens;
}

namespace internal {
  struct WindowKey {
    const SymbolId *ptr;
    std::uint32_t len;
    std::uint64_t hash;
  };

  struct WindowKeyHash {
    std::size_t operator()(const WindowKey &k) const noexcept {
      return static_cast<std::size_t>(k.hash);
    }
  };

  struct WindowKeyEq {
    bool operator()(const WindowKey &a, const WindowKey &b) const noexcept {
      return a.len == b.len && std::equal(a.ptr, a.ptr + a.len, b.ptr);
    }
  };

  struct WindowStats {
    std::uint64_t count;
    std::uint32_t last_mol;
    std::uint32_t last_end;
  };

  constexpr std::uint64_t kWindowSeed = 0x243F6A8885A308D3ULL;

  constexpr std::uint64_t mix(std::uint64_t h, SymbolId s) noexcept {
    h = (h ^ s) * 0x9E3779B97F4A7C15ULL;
    return h ^ (h >> 29);
  }

  using WindowTable = std::unordered_map<WindowKey, WindowStats,
                                         WindowKeyHash, WindowKeyEq>;

  // Leftmost non-overlapping counts for every window of length 2..max_len
  // whose hash falls into `shard`. Starts are visited in increasing order
  // per molecule, so a window is counted only if it begins at or after the
  // end of its previous counted occurrence.
  inline WindowTable count_windows(const TokenCorpus &corpus,
                                   std::size_t max_len, std::size_t shard,
                                   std::size_t shards) {
    WindowTable table;
    const auto molecules = corpus.molecules();
    for (std::size_t mi = 0; mi < molecules.size(); ++mi) {
      const Molecule &m = molecules[mi];
      const std::size_t n = m.size();
      for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t h = kWindowSeed;
        const std::size_t top = std::min(max_len, n - i);
        for (std::size_t len = 1; len <= top; ++len) {
          h = mix(h, m[i + len - 1]);
          if (len < 2 || (shards > 1 && (h >> 17) % shards != shard))
            continue;
          const auto mol = static_cast<std::uint32_t>(mi);
          const auto end = static_cast<std::uint32_t>(i + len);
          auto [it, inserted] = table.try_emplace(
              WindowKey { &m[i], static_cast<std::uint32_t>(len), h },
              WindowStats { 1, mol, end });
          if (inserted)
            continue;
          WindowStats &st = it->second;
          if (st.last_mol != mol || i >= st.last_end) {
            ++st.count;
            st.last_mol = mol;
            st.last_end = end;
          }
        }
      }
    }
    return table;
  }

  template <class Fn>
  void parallel_for(std::size_t tasks, std::size_t workers, Fn &&fn) {
    workers = std::min(workers, tasks);
    if (workers <= 1) {
      for (std::size_t t = 0; t < tasks; ++t)
        fn(t);
      return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < tasks; t += workers)
          fn(t);
      });
    }
  }

  // Visits every admissible candidate of one shard: frequent enough, valid
  // when expanded, and not already in the codebook.
  template <class Visit>
  void for_each_candidate(const TokenCorpus &corpus, const Codebook &codebook,
                          const ScoringState &state, std::size_t max_len,
                          std::uint64_t min_count, std::size_t shard,
                          std::size_t shards, Visit &&visit) {
    const WindowTable windows = count_windows(corpus, max_len, shard, shards);
    std::vector<SymbolId> expanded;
    for (const auto &[key, st]: windows) {
      if (st.count < min_count)
        continue;
      const std::span<const SymbolId> window(key.ptr, key.len);
      expanded.clear();
      codebook.expand_into(window, expanded);
      if (state.known_expansion(expanded))
        continue;
      if (!is_valid_expanded(expanded, corpus.table()))
        continue;
      visit(window, expanded, st.count);
    }
  }
}  // namespace internal

/**
 * All distinct windows of length 2..max_len (over the current alphabet,
 * never crossing molecules) with at least `min_count` leftmost
 * non-overlapping occurrences, whose expansion is valid and new. Sorted by
 * window for a stable order; projected lengths are filled in.
 */
inline std::vector<Candidate>
enumerate_candidates(const TokenCorpus &corpus, std::size_t max_len,
                     std::uint64_t min_count, const Codebook &codebook,
                     LogStarMode mode = LogStarMode::kRissanen) {
  if (max_len < 2 || max_len > SearchConfig::kMaxWindow)
    throw DataError("max_len out of range");
  if (min_count < 1)
    throw DataError("min_count must be at least 1");
  const ScoringState state(corpus, codebook, mode);
  std::vector<Candidate> out;
  internal::for_each_candidate(
      corpus, codebook, state, max_len, min_count, 0, 1,
      [&](std::span<const SymbolId> window,
          const std::vector<SymbolId> &expanded, std::uint64_t count) {
        Candidate c;
        c.tokens.assign(window.begin(), window.end());
        c.expanded = expanded;
        c.nonoverlap_count = count;
        c.projected_length = state.project(window, expanded, count);
        out.push_back(std::move(c));
      });
  std::sort(out.begin(), out.end(), [](const Candidate &a, const Candidate &b) {
    return a.tokens < b.tokens;
  });
  return out;
}

/// Projected message length if `cand` were adopted; inputs are untouched.
inline MessageLength score_candidate(const Candidate &cand,
                                     const TokenCorpus &corpus,
                                     const Codebook &codebook,
                                     LogStarMode mode) {
  const ScoringState state(corpus, codebook, mode);
  const std::vector<SymbolId> expanded = cand.expanded.empty()
                                             ? codebook.expand(cand.tokens)
                                             : cand.expanded;
  return state.project(cand.tokens, expanded, cand.nonoverlap_count);
}

/// Best candidate under candidate_precedes, scored in parallel shards.
inline std::optional<Candidate>
find_best_candidate(const TokenCorpus &corpus, const Codebook &codebook,
                    const ScoringState &state, const SearchConfig &config) {
  const std::size_t shards = config.worker_count();
  std::vector<std::optional<Candidate>> best(shards);
  internal::parallel_for(shards, shards, [&](std::size_t shard) {
    std::optional<Candidate> &mine = best[shard];
    Candidate probe;
    internal::for_each_candidate(
        corpus, codebook, state, config.max_len, config.min_count, shard,
        shards,
        [&](std::span<const SymbolId> window,
            const std::vector<SymbolId> &expanded, std::uint64_t count) {
          probe.tokens.assign(window.begin(), window.end());
          probe.expanded = expanded;
          probe.nonoverlap_count = count;
          probe.projected_length = state.project(window, expanded, count);
          if (!mine || candidate_precedes(probe, *mine, state.table()))
            mine = probe;
        });
  });

  std::optional<Candidate> winner;
  for (auto &b: best) {
    if (b && (!winner || candidate_precedes(*b, *winner, state.table())))
      winner = std::move(b);
  }
  return winner;
}

struct Adoption {
  EntryId id = 0;
  std::uint64_t replaced = 0;
  std::vector<EntryId> retired;
};

/**
 * Replaces every leftmost non-overlapping occurrence of the candidate with a
 * fresh meta-symbol and appends the new entry. Entries embedded in the
 * window lose one count per embedded occurrence per replacement and are
 * retired when they reach zero.
 */
inline Adoption apply_candidate(const Candidate &cand, TokenCorpus &corpus,
                                Codebook &codebook,
                                std::optional<std::size_t> iteration = {},
                                double delta_bits = 0) {
  const std::span<const SymbolId> window(cand.tokens);
  if (window.size() < 2)
    throw DataError("candidate window must hold at least two symbols");

  Adoption result;
  result.id = codebook.next_id();
  const SymbolId fresh = meta_symbol(result.id);

  std::vector<std::pair<std::size_t, Molecule>> rewritten;
  for (std::size_t mi = 0; mi < corpus.size(); ++mi) {
    const Molecule &m = corpus.molecules()[mi];
    if (count_nonoverlapping(m, window) == 0)
      continue;
    Molecule out;
    out.reserve(m.size());
    for (std::size_t i = 0; i < m.size();) {
      if (i + window.size() <= m.size()
          && std::equal(window.begin(), window.end(), m.begin() + i)) {
        out.push_back(fresh);
        ++result.replaced;
        i += window.size();
      } else {
        out.push_back(m[i++]);
      }
    }
    rewritten.emplace_back(mi, std::move(out));
  }
  if (result.replaced != cand.nonoverlap_count)
    throw StateMismatch("candidate was scored with "
                        + std::to_string(cand.nonoverlap_count)
                        + " occurrences but " + std::to_string(result.replaced)
                        + " were found");

  std::vector<std::pair<EntryId, std::uint64_t>> embedded;
  for (SymbolId s: window) {
    if (!is_meta(s))
      continue;
    auto it = std::find_if(embedded.begin(), embedded.end(),
                           [&](const auto &p) { return p.first == entry_of(s); });
    if (it == embedded.end())
      embedded.emplace_back(entry_of(s), 1);
    else
      ++it->second;
  }
  for (const auto &[id, mult]: embedded) {
    const CodebookEntry &e = codebook.mutable_entry(id);
    if (e.count < mult * result.replaced)
      throw StateMismatch("embedded entry count would become negative");
  }

  auto &molecules = corpus.mutable_molecules();
  for (auto &[mi, m]: rewritten)
    molecules[mi] = std::move(m);

  CodebookEntry entry;
  entry.id = result.id;
  entry.expanded = cand.expanded.empty() ? codebook.expand(window)
                                         : cand.expanded;
  entry.surface = cand.tokens;
  entry.expanded_smiles = expanded_text(entry.expanded, corpus.table());
  entry.iteration = iteration.value_or(result.id + 1);
  entry.count = result.replaced;
  entry.delta_bits = delta_bits;
  codebook.add(std::move(entry));

  for (const auto &[id, mult]: embedded) {
    CodebookEntry &e = codebook.mutable_entry(id);
    e.count -= mult * result.replaced;
    if (e.count == 0) {
      codebook.retire(id);
      result.retired.push_back(id);
    }
  }
  return result;
}

/// Throws StateMismatch unless molecule `i` re-expands to its source.
inline void check_lossless(const TokenCorpus &corpus, const Codebook &codebook,
                           std::size_t i) {
  if (corpus.render(i, codebook) != corpus.sources()[i])
    throw StateMismatch("molecule " + std::to_string(i)
                        + " no longer expands to its source");
}

inline void check_counts(const TokenCorpus &corpus, const Codebook &codebook) {
  std::unordered_map<EntryId, std::uint64_t> seen;
  for (const Molecule &m: corpus.molecules()) {
    for (SymbolId s: m) {
      if (is_meta(s))
        ++seen[entry_of(s)];
    }
  }
  for (const CodebookEntry &e: codebook.entries()) {
    auto it = seen.find(e.id);
    const std::uint64_t actual = it == seen.end() ? 0 : it->second;
    if (actual != e.count)
      throw StateMismatch("entry '" + e.expanded_smiles + "' stores count "
                          + std::to_string(e.count) + " but occurs "
                          + std::to_string(actual) + " times");
  }
  if (seen.size() != codebook.size())
    throw StateMismatch("corpus references entries outside the codebook");
}

struct CompressionResult {
  Codebook codebook;
  IterationTrace trace;
  TokenCorpus corpus;
  MessageLength initial_length;
  MessageLength final_length;
};

using StepObserver = std::function<void(const TraceRow &, const TokenCorpus &,
                                        const Codebook &)>;

/**
 * Greedy search: adopt the candidate with the smallest projected message
 * length while it strictly shortens the message, up to max_iters steps.
 */
inline CompressionResult fgcompress(std::span<const std::string> smiles,
                                    const SearchConfig &config,
                                    const StepObserver &observer = {}) {
  config.validate();
  if (smiles.empty())
    throw EmptyCorpus("corpus has no molecules");

  CompressionResult r;
  r.corpus = TokenCorpus::from_smiles(smiles);
  r.initial_length = current_length(r.corpus, r.codebook, config.logstar_mode);
  r.final_length = r.initial_length;

  for (std::size_t iter = 1; iter <= config.max_iters; ++iter) {
    const ScoringState state(r.corpus, r.codebook, config.logstar_mode);
    std::optional<Candidate> best
        = find_best_candidate(r.corpus, r.codebook, state, config);
    if (!best || !(best->projected_length.total < state.current().total))
      break;

    TraceRow row;
    row.iteration = iter;
    row.total_before = state.current().total;
    row.total_after = best->projected_length.total;
    row.count = best->nonoverlap_count;
    const Adoption adopted = apply_candidate(*best, r.corpus, r.codebook, iter,
                                             row.delta_bits());
    row.expanded_smiles = r.codebook.find(adopted.id)->expanded_smiles;

    if (config.verify_every_step) {
      for (std::size_t i = 0; i < r.corpus.size(); ++i)
        check_lossless(r.corpus, r.codebook, i);
      check_counts(r.corpus, r.codebook);
    } else {
      check_lossless(r.corpus, r.codebook, iter % r.corpus.size());
    }

    r.final_length = best->projected_length;
    r.trace.push_back(row);
    if (observer)
      observer(row, r.corpus, r.codebook);
  }
  return r;
}

}  // namespace fgc

#endif  // FGC_SEARCH_HPP_
