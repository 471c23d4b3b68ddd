//
// Project fgcompress - Copyright 2026 The fgcompress Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FGC_EVAL_HPP_
#define FGC_EVAL_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fgc/errors.hpp"
#include "fgc/significance.hpp"
#include "fgc/smiles_lexer.hpp"

namespace fgc::eval {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr std::array<double, 4> kDefaultAlphas { 0.001, 0.01, 0.1, 1.0 };
inline constexpr double kTrainFraction = 0.75;
inline constexpr std::size_t kDefaultRepeats = 5;
inline constexpr std::size_t kMinSplitRows = 8;

struct LabeledTable {
  Matrix features;
  Vector target;
  std::vector<std::string> ids;

  std::size_t rows() const noexcept {
    return static_cast<std::size_t>(features.rows());
  }

  void validate() const {
    if (features.rows() != target.size()
        || (!ids.empty() && ids.size() != rows()))
      throw DataError("feature, target and id row counts disagree");
    if (!features.allFinite() || !target.allFinite())
      throw DataError("table holds non-finite values");
  }

  LabeledTable select(std::span<const std::size_t> rows_) const {
    LabeledTable t;
    t.features.resize(static_cast<Eigen::Index>(rows_.size()), features.cols());
    t.target.resize(static_cast<Eigen::Index>(rows_.size()));
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const auto src = static_cast<Eigen::Index>(rows_[i]);
      const auto dst = static_cast<Eigen::Index>(i);
      t.features.row(dst) = features.row(src);
      t.target(dst) = target(src);
      if (!ids.empty())
        t.ids.push_back(ids[rows_[i]]);
    }
    return t;
  }
};

/// splitmix64 step; per-task seeds are derive_seed(root, task index).
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
  std::uint64_t z = root + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Uniform random partition; the train part holds round(fraction * n) rows.
inline SplitIndices split_indices(std::size_t n, double fraction,
                                  std::uint64_t seed) {
  if (n < kMinSplitRows)
    throw TooFewRows("need at least " + std::to_string(kMinSplitRows)
                     + " rows to split, got " + std::to_string(n));
  if (!(fraction > 0.0 && fraction < 1.0))
    throw DataError("split fraction must lie in (0, 1)");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  const auto n_train = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(n)));
  SplitIndices s;
  s.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
  return s;
}

inline std::pair<LabeledTable, LabeledTable>
split(const LabeledTable &table, double fraction, std::uint64_t seed) {
  const SplitIndices s = split_indices(table.rows(), fraction, seed);
  return { table.select(s.train), table.select(s.test) };
}

struct RidgeModel {
  Vector coef;
  double intercept = 0;
  double alpha = 0;

  Vector predict(const Matrix &x) const {
    return (x * coef).array() + intercept;
  }
};

namespace internal {
  struct Centered {
    Matrix xc;
    Vector yc;
    Eigen::RowVectorXd x_mean;
    double y_mean;
  };

  inline Centered center(const Matrix &x, const Vector &y) {
    if (x.rows() != y.size() || x.rows() == 0)
      throw DataError("ridge needs matching, non-empty X and y");
    if (x.cols() < 1)
      throw DataError("ridge needs at least one feature column");
    Centered c;
    c.x_mean = x.colwise().mean();
    c.y_mean = y.mean();
    c.xc = x.rowwise() - c.x_mean;
    c.yc = y.array() - c.y_mean;
    return c;
  }

  // Solves (Xc'Xc + alpha I) W = rhs.
  inline Matrix solve_gram(const Matrix &xc, double alpha, const Matrix &rhs) {
    Matrix gram = xc.transpose() * xc;
    gram.diagonal().array() += alpha;
    if (alpha > 0) {
      Eigen::LLT<Matrix> llt(gram);
      if (llt.info() == Eigen::Success)
        return llt.solve(rhs);
    }
    Eigen::FullPivLU<Matrix> lu(gram);
    if (!lu.isInvertible())
      throw SingularSystem("centered Gram matrix is singular");
    return lu.solve(rhs);
  }
}  // namespace internal

/// Minimizes ||y - Xw - b||^2 + alpha ||w||^2 with the intercept unpenalized.
inline RidgeModel ridge_fit(const Matrix &x, const Vector &y, double alpha) {
  if (!(alpha >= 0.0))
    throw DataError("ridge alpha must be non-negative");
  const internal::Centered c = internal::center(x, y);
  RidgeModel m;
  m.alpha = alpha;
  m.coef = internal::solve_gram(c.xc, alpha, c.xc.transpose() * c.yc);
  m.intercept = c.y_mean - c.x_mean.dot(m.coef);
  return m;
}

/**
 * Mean squared leave-one-out error from a single fit, using
 * e_i / (1 - h_ii) with the hat matrix of the intercept-augmented ridge
 * smoother, H = 11'/n + Xc (Xc'Xc + alpha I)^-1 Xc'.
 */
inline double loo_mse(const Matrix &x, const Vector &y, double alpha) {
  const internal::Centered c = internal::center(x, y);
  const auto n = static_cast<double>(x.rows());
  Vector leverage(x.rows());
  Vector fitted;
  if (alpha > 0 && x.cols() > x.rows()) {
    // Dual form: Xc (Xc'Xc + aI)^-1 Xc' = K (K + aI)^-1 with K = Xc Xc'.
    Matrix k = c.xc * c.xc.transpose();
    Matrix ka = k;
    ka.diagonal().array() += alpha;
    Eigen::LLT<Matrix> llt(ka);
    const Matrix h = k * llt.solve(Matrix::Identity(x.rows(), x.rows()));
    leverage = h.diagonal();
    fitted = h * c.yc;
  } else {
    const Matrix z = internal::solve_gram(c.xc, alpha, c.xc.transpose());
    leverage = (c.xc.array() * z.transpose().array()).rowwise().sum();
    fitted = c.xc * (z * c.yc);
  }
  leverage.array() += 1.0 / n;
  const Vector resid = c.yc - fitted;
  const Vector loo = resid.array() / (1.0 - leverage.array());
  return loo.squaredNorm() / n;
}

/// Alpha with the smallest LOO error; ties go to the smallest alpha.
inline double loocv_alpha(const Matrix &x, const Vector &y,
                          std::span<const double> alphas = kDefaultAlphas) {
  if (alphas.empty())
    throw DataError("loocv_alpha needs at least one alpha");
  std::vector<double> sorted(alphas.begin(), alphas.end());
  std::sort(sorted.begin(), sorted.end());
  double best_alpha = sorted.front();
  double best_err = loo_mse(x, y, best_alpha);
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const double err = loo_mse(x, y, sorted[i]);
    if (err < best_err) {
      best_err = err;
      best_alpha = sorted[i];
    }
  }
  return best_alpha;
}

inline double mse(const Vector &pred, const Vector &truth) {
  return (pred - truth).squaredNorm() / static_cast<double>(truth.size());
}

struct BenchmarkOptions {
  std::size_t repeats = kDefaultRepeats;
  std::uint64_t seed = 0;
  std::vector<double> alphas { kDefaultAlphas.begin(), kDefaultAlphas.end() };
  double train_fraction = kTrainFraction;
  std::size_t threads = 1;
};

struct RegressionReport {
  std::vector<double> per_repeat_mse;
  std::vector<double> alphas;
  double mean_mse = 0;
  double stderr_mse = 0;
};

/// Per repeat: split, choose alpha by LOOCV on train, refit, score on test.
inline RegressionReport run_benchmark(const LabeledTable &table,
                                      const BenchmarkOptions &opts = {}) {
  table.validate();
  if (opts.repeats < 1)
    throw DataError("repeats must be at least 1");
  RegressionReport r;
  r.per_repeat_mse.resize(opts.repeats);
  r.alphas.resize(opts.repeats);
  std::vector<std::exception_ptr> failures(opts.repeats);

  auto one = [&](std::size_t rep) {
    try {
      const auto [train, test]
          = split(table, opts.train_fraction, derive_seed(opts.seed, rep));
      const double alpha = loocv_alpha(train.features, train.target, opts.alphas);
      const RidgeModel m = ridge_fit(train.features, train.target, alpha);
      r.alphas[rep] = alpha;
      r.per_repeat_mse[rep] = mse(m.predict(test.features), test.target);
    } catch (...) {
      failures[rep] = std::current_exception();
    }
  };
  const std::size_t workers
      = std::max<std::size_t>(1, std::min(opts.threads, opts.repeats));
  if (workers == 1) {
    for (std::size_t rep = 0; rep < opts.repeats; ++rep)
      one(rep);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t rep = w; rep < opts.repeats; rep += workers)
          one(rep);
      });
    }
  }
  for (auto &f: failures) {
    if (f)
      std::rethrow_exception(f);
  }

  const auto k = static_cast<double>(opts.repeats);
  r.mean_mse = std::accumulate(r.per_repeat_mse.begin(), r.per_repeat_mse.end(), 0.0) / k;
  if (opts.repeats > 1) {
    double ss = 0;
    for (double v: r.per_repeat_mse)
      ss += (v - r.mean_mse) * (v - r.mean_mse);
    r.stderr_mse = std::sqrt(ss / (k - 1)) / std::sqrt(k);
  }
  return r;
}

struct UnigramFeatures {
  std::vector<std::string> columns;
  Matrix counts;
};

/// Symbol counts per molecule; columns in order of first appearance.
inline UnigramFeatures unigram_baseline(std::span<const std::string> molecules) {
  std::vector<std::vector<Token>> lexed;
  lexed.reserve(molecules.size());
  UnigramFeatures f;
  std::unordered_map<std::string, Eigen::Index> col;
  for (std::size_t i = 0; i < molecules.size(); ++i) {
    try {
      lexed.push_back(tokenize(molecules[i]).tokens);
    } catch (const LexError &e) {
      throw LexError("row " + std::to_string(i) + ": " + e.what(), e.offset());
    }
    for (const Token &t: lexed.back()) {
      if (col.try_emplace(t.text, static_cast<Eigen::Index>(f.columns.size())).second)
        f.columns.push_back(t.text);
    }
  }
  f.counts = Matrix::Zero(static_cast<Eigen::Index>(molecules.size()),
                          static_cast<Eigen::Index>(f.columns.size()));
  for (std::size_t i = 0; i < lexed.size(); ++i) {
    for (const Token &t: lexed[i])
      f.counts(static_cast<Eigen::Index>(i), col.at(t.text)) += 1.0;
  }
  return f;
}

}  // namespace fgc::eval

#endif  // FGC_EVAL_HPP_
