//
// Project fgcompress - Copyright 2026 The fgcompress Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FGC_CODEBOOK_HPP_
#define FGC_CODEBOOK_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fgc/errors.hpp"
#include "fgc/smiles_lexer.hpp"
#include "fgc/symbol_table.hpp"

namespace fgc {

struct CodebookEntry {
  EntryId id = 0;
  // Primitive symbols only.
  std::vector<SymbolId> expanded;
  // The window as it appeared in the compressed corpus when adopted; may
  // reference other (possibly since retired) entries.
  std::vector<SymbolId> surface;
  std::string expanded_smiles;
  std::size_t iteration = 0;
  std::uint64_t count = 0;
  double delta_bits = 0;

  friend bool operator==(const CodebookEntry &, const CodebookEntry &) = default;
};

/**
 * Discovered substrings in adoption order. Entries whose count drops to zero
 * are retired: they no longer belong to the codebook but stay resolvable so
 * that surfaces of later entries can still be rendered.
 */
class Codebook {
public:
  std::span<const CodebookEntry> entries() const noexcept { return entries_; }
  std::span<const CodebookEntry> retired() const noexcept { return retired_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  EntryId next_id() const noexcept { return next_id_; }

  const CodebookEntry *find(EntryId id) const {
    auto it = index_.find(id);
    if (it == index_.end())
      return nullptr;
    return it->second.active ? &entries_[it->second.pos]
                             : &retired_[it->second.pos];
  }

  bool is_active(EntryId id) const {
    auto it = index_.find(id);
    return it != index_.end() && it->second.active;
  }

  bool contains_expanded(std::span<const SymbolId> expanded) const {
    for (const auto &e: entries_) {
      if (std::equal(e.expanded.begin(), e.expanded.end(), expanded.begin(),
                     expanded.end()))
        return true;
    }
    return false;
  }

  /// Appends an active entry. Expanded forms must be distinct.
  void add(CodebookEntry entry) {
    if (index_.contains(entry.id))
      throw DataError("duplicate codebook entry id "
                      + std::to_string(entry.id));
    if (contains_expanded(entry.expanded))
      throw DataError("codebook already holds '" + entry.expanded_smiles + "'");
    if (entry.id >= next_id_)
      next_id_ = entry.id + 1;
    entries_.push_back(std::move(entry));
    reindex();
  }

  void retire(EntryId id) {
    auto it = index_.find(id);
    if (it == index_.end() || !it->second.active)
      throw StateMismatch("cannot retire inactive entry "
                          + std::to_string(id));
    auto pos = static_cast<std::ptrdiff_t>(it->second.pos);
    retired_.push_back(std::move(entries_[pos]));
    entries_.erase(entries_.begin() + pos);
    reindex();
  }

  CodebookEntry &mutable_entry(EntryId id) {
    auto it = index_.find(id);
    if (it == index_.end() || !it->second.active)
      throw UnknownMetaSymbol("no active entry " + std::to_string(id));
    return entries_[it->second.pos];
  }

  /// Appends the primitive expansion of a corpus-alphabet sequence.
  void expand_into(std::span<const SymbolId> seq,
                   std::vector<SymbolId> &out) const {
    for (SymbolId s: seq) {
      if (!is_meta(s)) {
        out.push_back(s);
        continue;
      }
      const CodebookEntry *e = find(entry_of(s));
      if (e == nullptr)
        throw UnknownMetaSymbol("unknown meta-symbol "
                                + std::to_string(entry_of(s)));
      out.insert(out.end(), e->expanded.begin(), e->expanded.end());
    }
  }

  std::vector<SymbolId> expand(std::span<const SymbolId> seq) const {
    std::vector<SymbolId> out;
    expand_into(seq, out);
    return out;
  }

  std::string render(std::span<const SymbolId> seq,
                     const SymbolTable &table) const {
    std::string out;
    for (SymbolId s: expand(seq))
      out += table.text(s);
    return out;
  }

  /// Token-level rendering; meta-symbols expand to their primitive string.
  std::string render(std::span<const Token> tokens) const {
    std::string out;
    for (const Token &t: tokens) {
      if (t.kind != TokenKind::kMetaSymbol) {
        out += t.text;
        continue;
      }
      const CodebookEntry *e = t.meta_id ? find(*t.meta_id) : nullptr;
      if (e == nullptr)
        throw UnknownMetaSymbol("unknown meta-symbol " + t.text);
      out += e->expanded_smiles;
    }
    return out;
  }

  friend bool operator==(const Codebook &a, const Codebook &b) {
    return a.entries_ == b.entries_ && a.retired_ == b.retired_;
  }

private:
  struct Slot {
    bool active;
    std::size_t pos;
  };

  void reindex() {
    index_.clear();
    for (std::size_t i = 0; i < entries_.size(); ++i)
      index_[entries_[i].id] = { true, i };
    for (std::size_t i = 0; i < retired_.size(); ++i)
      index_[retired_[i].id] = { false, i };
  }

  std::vector<CodebookEntry> entries_;
  std::vector<CodebookEntry> retired_;
  std::unordered_map<EntryId, Slot> index_;
  EntryId next_id_ = 0;
};

inline std::string render(const TokenStream &stream, const Codebook &codebook) {
  return codebook.render(std::span<const Token>(stream.tokens));
}

}  // namespace fgc

#endif  // FGC_CODEBOOK_HPP_
