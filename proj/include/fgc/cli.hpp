//
// Project fgcompress - Copyright 2026 The fgcompress Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FGC_CLI_HPP_
#define FGC_CLI_HPP_

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fgc/corpus.hpp"
#include "fgc/eval.hpp"
#include "fgc/fingerprint.hpp"
#include "fgc/io.hpp"
#include "fgc/search.hpp"
#include "fgc/significance.hpp"

namespace fgc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

namespace internal {
  inline std::size_t resolve_threads(std::optional<std::size_t> flag) {
    if (flag)
      return *flag;
    if (const char *env = std::getenv("FGC_THREADS")) {
      try {
        return static_cast<std::size_t>(std::stoul(env));
      } catch (const std::exception &) {
        throw DataError(std::string("FGC_THREADS is not a number: ") + env);
      }
    }
    return 1;
  }

  inline void report_load(const LoadedCorpus &c, const std::string &path,
                          std::ostream &err) {
    for (const LineIssue &issue: c.skipped)
      err << path << ":" << issue.line << ": skipped: " << issue.message << "\n";
    if (c.duplicates_removed > 0)
      err << path << ": removed " << c.duplicates_removed
          << " duplicate line(s)\n";
  }

  inline std::string fmt_bits(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
  }

  /// SMILES from a plain one-per-line file, or from the "smiles" column of a
  /// CSV. Returns (molecule, source line) pairs; blank lines are skipped.
  inline std::vector<std::pair<std::string, std::size_t>>
  read_molecules(const std::string &path) {
    const std::string text = read_file(path);
    std::vector<std::pair<std::string, std::size_t>> out;
    const auto first_nl = text.find('\n');
    const std::string first(trim(std::string_view(text).substr(0, first_nl)));
    if (first.find(',') != std::string::npos) {
      const csv::Table t = csv::parse(text);
      const std::size_t col = t.column("smiles");
      for (std::size_t i = 0; i < t.rows.size(); ++i)
        out.emplace_back(t.rows[i][col], t.line_numbers[i]);
      return out;
    }
    std::size_t line_no = 0;
    std::string_view rest(text);
    while (!rest.empty()) {
      const auto nl = rest.find('\n');
      const std::string_view line = trim(rest.substr(0, nl));
      rest = nl == std::string_view::npos ? std::string_view {} : rest.substr(nl + 1);
      ++line_no;
      if (!line.empty())
        out.emplace_back(std::string(line), line_no);
    }
    return out;
  }

  struct Dataset {
    std::string name;
    eval::LabeledTable table;
    std::vector<std::string> smiles;
  };

  inline Dataset load_dataset(const std::string &features_path,
                              const std::string &targets_path,
                              const std::string &target_column,
                              std::ostream &err) {
    const csv::Table features = csv::parse(read_file(features_path));
    const csv::Table targets = csv::parse(read_file(targets_path));
    const std::size_t f_smiles = features.column("smiles");
    const std::size_t t_smiles = targets.column("smiles");
    const std::size_t t_value = targets.column(target_column);

    std::unordered_map<std::string, std::size_t> feature_row;
    for (std::size_t i = 0; i < features.rows.size(); ++i)
      feature_row.try_emplace(features.rows[i][f_smiles], i);

    std::vector<std::size_t> feature_cols;
    for (std::size_t c = 0; c < features.header.size(); ++c) {
      if (c != f_smiles)
        feature_cols.push_back(c);
    }

    Dataset d;
    d.name = std::filesystem::path(targets_path).stem().string();
    std::vector<std::pair<std::size_t, double>> rows;
    std::unordered_map<std::string, bool> seen;
    std::size_t duplicates = 0;
    std::size_t missing = 0;
    for (std::size_t i = 0; i < targets.rows.size(); ++i) {
      const std::string &smi = targets.rows[i][t_smiles];
      if (!seen.try_emplace(smi, true).second) {
        ++duplicates;
        continue;
      }
      auto it = feature_row.find(smi);
      if (it == feature_row.end()) {
        ++missing;
        continue;
      }
      double y;
      try {
        std::size_t used = 0;
        y = std::stod(targets.rows[i][t_value], &used);
        if (used != targets.rows[i][t_value].size())
          throw std::invalid_argument("trailing characters");
      } catch (const std::exception &) {
        throw DataError(targets_path + ":" + std::to_string(targets.line_numbers[i])
                        + ": target '" + targets.rows[i][t_value]
                        + "' is not a number");
      }
      rows.emplace_back(it->second, y);
      d.smiles.push_back(smi);
    }
    if (duplicates > 0)
      err << targets_path << ": removed " << duplicates << " duplicate SMILES\n";
    if (missing > 0)
      err << targets_path << ": " << missing
          << " molecule(s) have no feature row and were skipped\n";

    d.table.features.resize(static_cast<Eigen::Index>(rows.size()),
                            static_cast<Eigen::Index>(feature_cols.size()));
    d.table.target.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto &cells = features.rows[rows[r].first];
      for (std::size_t c = 0; c < feature_cols.size(); ++c) {
        try {
          d.table.features(static_cast<Eigen::Index>(r),
                           static_cast<Eigen::Index>(c))
              = std::stod(cells[feature_cols[c]]);
        } catch (const std::exception &) {
          throw DataError(features_path + ":"
                          + std::to_string(features.line_numbers[rows[r].first])
                          + ": non-numeric feature '" + cells[feature_cols[c]] + "'");
        }
      }
      d.table.target(static_cast<Eigen::Index>(r)) = rows[r].second;
    }
    d.table.ids = d.smiles;
    d.table.validate();
    return d;
  }

  inline nlohmann::ordered_json report_json(const eval::RegressionReport &r) {
    return { { "mean_mse", r.mean_mse },
             { "stderr", r.stderr_mse },
             { "alphas", r.alphas },
             { "per_repeat", r.per_repeat_mse } };
  }

  inline std::vector<double> parse_alphas(const std::string &list) {
    std::vector<double> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        out.push_back(std::stod(item));
      } catch (const std::exception &) {
        throw CLI::ValidationError("--alphas", "'" + item + "' is not a number");
      }
    }
    if (out.empty())
      throw CLI::ValidationError("--alphas", "empty list");
    return out;
  }
}  // namespace internal

struct CompressOptions {
  std::string input;
  std::string out;
  std::string trace;
  std::size_t max_len = SearchConfig::kLargeCorpusMaxLen;
  std::size_t iters = 500;
  std::uint64_t min_count = 2;
  std::string logstar = "rissanen";
  std::optional<std::size_t> threads;
  bool verify = false;
};

inline int run_compress(const CompressOptions &o, std::ostream &out,
                        std::ostream &err) {
  const LoadedCorpus corpus = load_corpus(o.input);
  internal::report_load(corpus, o.input, err);

  SearchConfig config;
  config.max_len = o.max_len;
  config.max_iters = o.iters;
  config.min_count = o.min_count;
  config.logstar_mode = parse_logstar_mode(o.logstar);
  config.threads = internal::resolve_threads(o.threads);
  config.verify_every_step = o.verify;

  const CompressionResult r = fgcompress(corpus.molecules, config);
  save_codebook(CodebookFile::from(r.codebook, r.corpus.table(),
                                   config.logstar_mode,
                                   corpus_fingerprint(corpus.molecules)),
                o.out);
  if (!o.trace.empty()) {
    std::ostringstream tsv;
    write_trace(tsv, r.trace);
    write_file(o.trace, tsv.str());
  }

  out << "molecules\t" << corpus.molecules.size() << "\n"
      << "iterations\t" << r.trace.size() << "\n"
      << "codebook_entries\t" << r.codebook.size() << "\n"
      << "initial_bits\t" << internal::fmt_bits(r.initial_length.total) << "\n"
      << "final_bits\t" << internal::fmt_bits(r.final_length.total) << "\n"
      << "ratio\t"
      << internal::fmt_bits(r.final_length.total / r.initial_length.total)
      << "\n";
  return kExitOk;
}

struct FingerprintOptions {
  std::string codebook;
  std::string input;
  std::string out;
  bool overlap = true;
  std::optional<std::size_t> threads;
};

inline int run_fingerprint(const FingerprintOptions &o, std::ostream &out,
                           std::ostream &err) {
  const Codebook codebook = load_codebook(o.codebook).codebook();
  const auto molecules = internal::read_molecules(o.input);
  std::vector<std::string> smiles;
  smiles.reserve(molecules.size());
  for (const auto &[s, line]: molecules)
    smiles.push_back(s);

  const FingerprintMatrix m = fingerprint_corpus(
      smiles, codebook,
      o.overlap ? MatchMode::kOverlapping : MatchMode::kNonOverlapping,
      internal::resolve_threads(o.threads));
  for (const RowError &e: m.errors)
    err << o.input << ":" << molecules[e.row].second << ": skipped: "
        << e.message << "\n";

  const Fingerprinter fp(codebook);
  std::string csv_text = "smiles";
  for (std::size_t i = 0; i < fp.labels().size(); ++i)
    csv_text += "," + csv::quote(std::to_string(i) + ":" + fp.labels()[i]);
  csv_text += "\n";
  std::size_t written = 0;
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    if (!m.rows[i])
      continue;
    csv_text += smiles[i];
    for (std::uint32_t c: m.rows[i]->counts)
      csv_text += "," + std::to_string(c);
    csv_text += "\n";
    ++written;
  }
  write_file(o.out, csv_text);
  out << "rows\t" << written << "\n"
      << "columns\t" << fp.size() << "\n"
      << "skipped\t" << m.errors.size() << "\n";
  return kExitOk;
}

struct EvalOptions {
  std::vector<std::string> features;
  std::vector<std::string> targets;
  std::string target_column = "target";
  std::string alphas = "0.001,0.01,0.1,1";
  std::size_t repeats = eval::kDefaultRepeats;
  std::uint64_t seed = 0;
  double q = 0.05;
  bool baseline = true;
  std::optional<std::size_t> threads;
  std::string out;
};

inline int run_eval(const EvalOptions &o, std::ostream &out,
                    std::ostream &err) {
  if (o.features.size() != o.targets.size())
    throw CLI::ValidationError("--features",
                               "needs one --targets file per --features file");
  eval::BenchmarkOptions bo;
  bo.repeats = o.repeats;
  bo.seed = o.seed;
  bo.alphas = internal::parse_alphas(o.alphas);
  bo.threads = internal::resolve_threads(o.threads);

  nlohmann::ordered_json report;
  report["q"] = o.q;
  nlohmann::ordered_json datasets = nlohmann::ordered_json::array();
  std::vector<double> mean_features;
  std::vector<double> mean_baseline;
  std::vector<std::optional<double>> pvalues;

  for (std::size_t i = 0; i < o.features.size(); ++i) {
    const internal::Dataset d
        = internal::load_dataset(o.features[i], o.targets[i], o.target_column, err);
    const eval::RegressionReport r = eval::run_benchmark(d.table, bo);
    nlohmann::ordered_json entry = { { "dataset", d.name },
                                     { "rows", d.table.rows() },
                                     { "features",
                                       static_cast<std::size_t>(d.table.features.cols()) } };
    entry.update(internal::report_json(r));
    if (o.baseline) {
      eval::LabeledTable base;
      base.features = eval::unigram_baseline(d.smiles).counts;
      base.target = d.table.target;
      base.ids = d.smiles;
      const eval::RegressionReport b = eval::run_benchmark(base, bo);
      entry["baseline"] = internal::report_json(b);
      entry["baseline"]["name"] = "unigram";
      mean_features.push_back(r.mean_mse);
      mean_baseline.push_back(b.mean_mse);
      try {
        pvalues.push_back(eval::wilcoxon_signed_rank(r.per_repeat_mse, b.per_repeat_mse));
      } catch (const TooFewPairs &) {
        pvalues.push_back(std::nullopt);
      }
    }
    datasets.push_back(std::move(entry));
  }

  if (o.baseline) {
    std::vector<double> tested;
    for (const auto &p: pvalues) {
      if (p)
        tested.push_back(*p);
    }
    const std::vector<bool> reject = eval::benjamini_hochberg(tested, o.q);
    const std::vector<double> adjusted = eval::bh_adjust(tested);
    nlohmann::ordered_json table = nlohmann::ordered_json::array();
    std::size_t k = 0;
    for (std::size_t i = 0; i < pvalues.size(); ++i) {
      nlohmann::ordered_json row = { { "dataset", datasets[i]["dataset"] },
                                     { "mean_mse", mean_features[i] },
                                     { "baseline_mean_mse", mean_baseline[i] } };
      if (pvalues[i]) {
        row["p_value"] = *pvalues[i];
        row["p_adjusted"] = adjusted[k];
        row["rejected_raw"] = *pvalues[i] <= o.q;
        row["rejected_bh"] = static_cast<bool>(reject[k]);
        ++k;
      } else {
        row["p_value"] = nullptr;
        row["p_adjusted"] = nullptr;
        row["rejected_raw"] = false;
        row["rejected_bh"] = false;
      }
      table.push_back(std::move(row));
    }
    report["datasets"] = std::move(datasets);
    report["comparison"] = std::move(table);
    try {
      const double p = eval::wilcoxon_signed_rank(mean_features, mean_baseline);
      report["overall"] = { { "p_value", p }, { "rejected", p <= o.q } };
    } catch (const TooFewPairs &) {
      report["overall"] = nullptr;
    }
  }

  if (!report.contains("datasets"))
    report["datasets"] = std::move(datasets);
  write_file(o.out, report.dump(2) + "\n");
  out << "datasets\t" << o.features.size() << "\n";
  return kExitOk;
}

struct StatsOptions {
  std::string input;
  std::string logstar = "rissanen";
};

inline int run_stats(const StatsOptions &o, std::ostream &out,
                     std::ostream &err) {
  const LoadedCorpus loaded = load_corpus(o.input);
  internal::report_load(loaded, o.input, err);
  const TokenCorpus corpus = TokenCorpus::from_smiles(loaded.molecules);
  const LogStarMode mode = parse_logstar_mode(o.logstar);
  const SymbolTable &t = corpus.table();

  out << "symbol\tcount\tprobability\n";
  char buf[128];
  for (SymbolId s = 0; s < t.size(); ++s) {
    std::snprintf(buf, sizeof buf, "\t%llu\t%.9f\n",
                  static_cast<unsigned long long>(t.counts()[s]),
                  t.probability(s));
    out << t.text(s) << buf;
  }
  const MessageLength len = symbol_only_length(corpus, mode);
  out << "\nmolecules\t" << corpus.size() << "\n"
      << "tokens\t" << corpus.total_tokens() << "\n"
      << "logstar\t" << to_string(mode) << "\n"
      << "p1_bits\t" << internal::fmt_bits(len.p1) << "\n"
      << "p2_bits\t" << internal::fmt_bits(len.p2) << "\n"
      << "p3_bits\t" << internal::fmt_bits(len.p3) << "\n"
      << "total_bits\t" << internal::fmt_bits(len.total) << "\n";
  return kExitOk;
}

/// Exit codes: 0 success, 1 usage error, 2 data error.
inline int cli_main(int argc, const char *const *argv, std::ostream &out,
                    std::ostream &err) {
  CLI::App app { "Substructure discovery by message-length compression of "
                 "SMILES corpora" };
  app.require_subcommand(1);

  CompressOptions co;
  auto *compress = app.add_subcommand("compress", "Discover a codebook");
  compress->add_option("--input", co.input, "SMILES file, one per line")->required();
  compress->add_option("--out", co.out, "Codebook JSON to write")->required();
  compress->add_option("--max-len", co.max_len, "Longest enumerated window")
      ->check(CLI::Range(std::size_t { 2 }, SearchConfig::kMaxWindow));
  compress->add_option("--iters", co.iters, "Iteration cap")
      ->check(CLI::PositiveNumber);
  compress->add_option("--min-count", co.min_count,
                       "Least occurrences of an enumerated window")
      ->check(CLI::PositiveNumber);
  compress->add_option("--logstar", co.logstar, "Integer code: rissanen|simple")
      ->check(CLI::IsMember({ "rissanen", "simple" }));
  compress->add_option("--threads", co.threads, "Worker threads (FGC_THREADS)");
  compress->add_option("--trace", co.trace, "Per-iteration TSV trace");
  compress->add_flag("--verify", co.verify, "Full consistency check every step");

  FingerprintOptions fo;
  auto *fingerprint = app.add_subcommand("fingerprint", "Count vectors over a codebook");
  fingerprint->add_option("--codebook", fo.codebook, "Codebook JSON")->required();
  fingerprint->add_option("--input", fo.input, "SMILES lines or CSV with a smiles column")
      ->required();
  fingerprint->add_option("--out", fo.out, "CSV to write")->required();
  fingerprint->add_flag("--overlap,!--no-overlap", fo.overlap,
                        "Count overlapping matches (default)");
  fingerprint->add_option("--threads", fo.threads, "Worker threads (FGC_THREADS)");

  EvalOptions eo;
  auto *evaluate = app.add_subcommand("eval", "Ridge-regression benchmark");
  evaluate->add_option("--features", eo.features, "Fingerprint CSV (repeatable)")
      ->required();
  evaluate->add_option("--targets", eo.targets, "CSV with smiles and target columns")
      ->required();
  evaluate->add_option("--target-column", eo.target_column, "Target column name");
  evaluate->add_option("--alphas", eo.alphas, "Comma separated ridge alphas");
  evaluate->add_option("--repeats", eo.repeats, "Train/test repeats")
      ->check(CLI::PositiveNumber);
  evaluate->add_option("--seed", eo.seed, "Root seed");
  evaluate->add_option("--q", eo.q, "FDR level")->check(CLI::Range(0.0, 1.0));
  evaluate->add_flag("!--no-baseline", eo.baseline, "Skip the unigram comparison");
  evaluate->add_option("--threads", eo.threads, "Worker threads (FGC_THREADS)");
  evaluate->add_option("--out", eo.out, "JSON report to write")->required();

  StatsOptions so;
  auto *stats = app.add_subcommand("stats", "Symbol frequencies and baseline length");
  stats->add_option("--input", so.input, "SMILES file")->required();
  stats->add_option("--logstar", so.logstar, "Integer code: rissanen|simple")
      ->check(CLI::IsMember({ "rissanen", "simple" }));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (compress->parsed())
      return run_compress(co, out, err);
    if (fingerprint->parsed())
      return run_fingerprint(fo, out, err);
    if (evaluate->parsed())
      return run_eval(eo, out, err);
    return run_stats(so, out, err);
  } catch (const CLI::Error &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace fgc::cli

#endif  // FGC_CLI_HPP_
