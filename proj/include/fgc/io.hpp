//
// Project fgcompress - Copyright 2026 The fgcompress Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FGC_IO_HPP_
#define FGC_IO_HPP_

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "fgc/codebook.hpp"
#include "fgc/codelength.hpp"
#include "fgc/errors.hpp"
#include "fgc/search.hpp"
#include "fgc/smiles_lexer.hpp"
#include "fgc/symbol_table.hpp"

namespace fgc {

inline constexpr int kCodebookFormatVersion = 1;

/// 64-bit FNV-1a, rendered as 16 hex digits.
inline std::string content_hash(std::string_view data) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c: data) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string corpus_fingerprint(std::span<const std::string> molecules) {
  std::string joined;
  for (const std::string &m: molecules) {
    joined += m;
    joined += '\n';
  }
  return content_hash(joined);
}

inline std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path.string() + "' for reading");
  return { std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>() };
}

inline void write_file(const std::filesystem::path &path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out)
    throw IoError("failed writing '" + path.string() + "'");
}

inline std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos)
    return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

struct LineIssue {
  std::size_t line;  // 1-based
  std::string message;
};

struct LoadedCorpus {
  std::vector<std::string> molecules;
  std::size_t duplicates_removed = 0;
  std::vector<LineIssue> skipped;
};

/**
 * One SMILES per line. Lines are trimmed, blank lines ignored, exact
 * duplicates dropped (first occurrence kept) and lines that fail to lex are
 * reported and skipped.
 */
inline LoadedCorpus parse_corpus(std::string_view text) {
  LoadedCorpus c;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t nonblank = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view {} : text.substr(nl + 1);
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty())
      continue;
    ++nonblank;
    try {
      tokenize(line);
    } catch (const LexError &e) {
      c.skipped.push_back({ line_no, e.what() });
      continue;
    }
    if (!seen.emplace(line).second) {
      ++c.duplicates_removed;
      continue;
    }
    c.molecules.emplace_back(line);
  }
  if (c.molecules.empty())
    throw AllLinesInvalid(nonblank == 0 ? "corpus has no SMILES lines"
                                        : "no corpus line could be tokenized");
  return c;
}

inline LoadedCorpus load_corpus(const std::filesystem::path &path) {
  return parse_corpus(read_file(path));
}

struct CodebookFileEntry {
  EntryId id = 0;
  std::string expanded_smiles;
  std::size_t iteration = 0;
  std::uint64_t count = 0;
  double delta_bits = 0;

  friend bool operator==(const CodebookFileEntry &, const CodebookFileEntry &) = default;
};

/// On-disk form of a search result.
struct CodebookFile {
  int format_version = kCodebookFormatVersion;
  LogStarMode logstar_mode = LogStarMode::kRissanen;
  std::vector<std::pair<std::string, double>> symbol_table;
  std::vector<CodebookFileEntry> entries;
  std::string corpus_fingerprint;

  friend bool operator==(const CodebookFile &, const CodebookFile &) = default;

  static CodebookFile from(const Codebook &codebook, const SymbolTable &table,
                           LogStarMode mode, std::string fingerprint) {
    CodebookFile f;
    f.logstar_mode = mode;
    for (SymbolId s = 0; s < table.size(); ++s)
      f.symbol_table.emplace_back(table.text(s), table.probability(s));
    for (const CodebookEntry &e: codebook.entries()) {
      f.entries.push_back(
          { e.id, e.expanded_smiles, e.iteration, e.count, e.delta_bits });
    }
    f.corpus_fingerprint = std::move(fingerprint);
    return f;
  }

  SymbolTable table() const {
    return SymbolTable::from_probabilities(symbol_table);
  }

  /// Rebuilds the codebook; surfaces are taken to be the expanded forms.
  Codebook codebook() const {
    const SymbolTable t = table();
    Codebook cb;
    for (const CodebookFileEntry &fe: entries) {
      CodebookEntry e;
      e.id = fe.id;
      for (const Token &tok: tokenize(fe.expanded_smiles).tokens)
        e.expanded.push_back(t.id(tok.text));
      e.surface = e.expanded;
      e.expanded_smiles = fe.expanded_smiles;
      e.iteration = fe.iteration;
      e.count = fe.count;
      e.delta_bits = fe.delta_bits;
      cb.add(std::move(e));
    }
    return cb;
  }
};

namespace internal {
  inline nlohmann::ordered_json codebook_body(const CodebookFile &f) {
    nlohmann::ordered_json j;
    j["format_version"] = f.format_version;
    j["logstar_mode"] = std::string(to_string(f.logstar_mode));
    nlohmann::ordered_json st = nlohmann::ordered_json::array();
    for (const auto &[sym, p]: f.symbol_table)
      st.push_back({ sym, p });
    j["symbol_table"] = std::move(st);
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const auto &e: f.entries) {
      entries.push_back({ { "id", e.id },
                          { "expanded_smiles", e.expanded_smiles },
                          { "iteration", e.iteration },
                          { "count", e.count },
                          { "delta_bits", e.delta_bits } });
    }
    j["entries"] = std::move(entries);
    j["corpus_fingerprint"] = f.corpus_fingerprint;
    return j;
  }
}  // namespace internal

inline std::string serialize_codebook(const CodebookFile &f) {
  nlohmann::ordered_json j = internal::codebook_body(f);
  j["checksum"] = content_hash(j.dump());
  return j.dump(2) + "\n";
}

inline CodebookFile parse_codebook(std::string_view text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw DataError(std::string("codebook is not valid JSON: ") + e.what());
  }
  try {
    const int version = j.at("format_version").get<int>();
    if (version != kCodebookFormatVersion)
      throw VersionMismatch("codebook format_version " + std::to_string(version)
                            + " is not supported (expected "
                            + std::to_string(kCodebookFormatVersion) + ")");

    CodebookFile f;
    f.format_version = version;
    f.logstar_mode = parse_logstar_mode(j.at("logstar_mode").get<std::string>());
    for (const auto &row: j.at("symbol_table"))
      f.symbol_table.emplace_back(row.at(0).get<std::string>(),
                                  row.at(1).get<double>());
    for (const auto &e: j.at("entries")) {
      f.entries.push_back({ e.at("id").get<EntryId>(),
                            e.at("expanded_smiles").get<std::string>(),
                            e.at("iteration").get<std::size_t>(),
                            e.at("count").get<std::uint64_t>(),
                            e.at("delta_bits").get<double>() });
    }
    f.corpus_fingerprint = j.at("corpus_fingerprint").get<std::string>();

    const std::string stored = j.at("checksum").get<std::string>();
    if (stored != content_hash(internal::codebook_body(f).dump()))
      throw ChecksumMismatch("codebook checksum does not match its contents");
    return f;
  } catch (const nlohmann::json::exception &e) {
    throw DataError(std::string("malformed codebook: ") + e.what());
  }
}

inline void save_codebook(const CodebookFile &f,
                          const std::filesystem::path &path) {
  write_file(path, serialize_codebook(f));
}

inline CodebookFile load_codebook(const std::filesystem::path &path) {
  return parse_codebook(read_file(path));
}

/// iteration, expanded_smiles, count, total_bits_before, total_bits_after,
/// delta_bits; tab separated with a header line.
inline void write_trace(std::ostream &out, const IterationTrace &trace) {
  out << "iteration\texpanded_smiles\tcount\ttotal_bits_before\t"
         "total_bits_after\tdelta_bits\n";
  char buf[256];
  for (const TraceRow &r: trace) {
    std::snprintf(buf, sizeof buf, "%zu\t%s\t%llu\t%.6f\t%.6f\t%.6f\n",
                  r.iteration, r.expanded_smiles.c_str(),
                  static_cast<unsigned long long>(r.count), r.total_before,
                  r.total_after, r.delta_bits());
    out << buf;
  }
}

// Minimal RFC 4180 style CSV: quoted fields may hold commas and doubled
// quotes, no embedded newlines.
namespace csv {
  inline std::vector<std::string> split_row(std::string_view line) {
    std::vector<std::string> cells(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          cells.back() += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          cells.back() += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        cells.emplace_back();
      } else {
        cells.back() += c;
      }
    }
    if (quoted)
      throw DataError("unterminated quote in CSV row");
    return cells;
  }

  inline std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c: s) {
      if (c == '"')
        out += '"';
      out += c;
    }
    out += '"';
    return out;
  }

  struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;

    std::size_t column(std::string_view name) const {
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name)
          return i;
      }
      throw DataError("CSV has no column '" + std::string(name) + "'");
    }
  };

  inline Table parse(std::string_view text) {
    Table t;
    std::size_t line_no = 0;
    while (!text.empty()) {
      const auto nl = text.find('\n');
      const std::string_view line = trim(text.substr(0, nl));
      text = nl == std::string_view::npos ? std::string_view {} : text.substr(nl + 1);
      ++line_no;
      if (line.empty())
        continue;
      auto cells = split_row(line);
      for (auto &c: cells)
        c = std::string(trim(c));
      if (t.header.empty()) {
        t.header = std::move(cells);
        continue;
      }
      if (cells.size() != t.header.size())
        throw DataError("CSV line " + std::to_string(line_no) + " has "
                        + std::to_string(cells.size()) + " cells, expected "
                        + std::to_string(t.header.size()));
      t.rows.push_back(std::move(cells));
      t.line_numbers.push_back(line_no);
    }
    if (t.header.empty())
      throw DataError("CSV is empty");
    return t;
  }
}  // namespace csv

}  // namespace fgc

#endif  // FGC_IO_HPP_
