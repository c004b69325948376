// Copyright 2026 The dsmeda Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dsmeda/errors.hpp"
#include "dsmeda/permutation.hpp"

namespace dsmeda {

/// Validation tolerance for learned matrices; learning is a finite convex
/// sum, so anything beyond float noise indicates a construction bug.
inline constexpr double kDsmTolerance = 1e-9;

/// Looser tolerance for matrices read from text files, which may carry
/// rounded decimals.
inline constexpr double kDsmFileTolerance = 1e-6;

/// True iff the n×n row-major matrix is non-negative with all row and
/// column sums within `tol` of 1.
inline bool validate_dsm(std::span<const double> values, int n, double tol) {
  if (n < 1 || static_cast<int>(values.size()) != n * n) return false;
  for (double v : values) {
    if (!(v >= 0.0)) return false;  // also rejects NaN
  }
  for (int i = 0; i < n; ++i) {
    double row = 0.0, col = 0.0;
    for (int j = 0; j < n; ++j) {
      row += values[i * n + j];
      col += values[j * n + i];
    }
    if (std::abs(row - 1.0) > tol || std::abs(col - 1.0) > tol) return false;
  }
  return true;
}

/// Square non-negative matrix whose rows and columns each sum to 1.
/// Immutable after construction; constructing from values that fail
/// validation throws.
class DoublyStochasticMatrix {
 public:
  DoublyStochasticMatrix(int n, std::vector<double> values,
                         double tol = kDsmTolerance)
      : n_(n), values_(std::move(values)) {
    if (!validate_dsm(values_, n_, tol)) {
      throw std::invalid_argument("dsm: matrix is not doubly stochastic");
    }
  }

  static DoublyStochasticMatrix uniform(int n) {
    if (n < 1) throw std::invalid_argument("dsm: size must be >= 1");
    return DoublyStochasticMatrix(
        n, std::vector<double>(static_cast<std::size_t>(n) * n, 1.0 / n));
  }

  int size() const { return n_; }
  double operator()(int i, int j) const { return values_[i * n_ + j]; }
  std::span<const double> row(int i) const {
    return std::span<const double>(values_).subspan(
        static_cast<std::size_t>(i) * n_, n_);
  }
  const std::vector<double>& values() const { return values_; }

 private:
  int n_;
  std::vector<double> values_;
};

/// The uniform DSM U with every entry 1/n.
inline DoublyStochasticMatrix uniform_dsm(int n) {
  return DoublyStochasticMatrix::uniform(n);
}

/// Smoothing factor and optional per-permutation weights for learning.
/// Empty weights mean uniform.
struct LearningConfig {
  double alpha = 0.0;
  std::vector<double> weights;
};

namespace detail {

// Normalizes caller weights (or uniform 1/m) to sum `scale`.
inline std::vector<double> normalized_weights(std::size_t m,
                                              std::span<const double> weights,
                                              double scale) {
  std::vector<double> w;
  if (weights.empty()) {
    w.assign(m, scale / static_cast<double>(m));
    return w;
  }
  if (weights.size() != m) {
    throw std::invalid_argument("learn: weight count does not match sample");
  }
  double sum = 0.0;
  for (double x : weights) {
    if (!(x >= 0.0)) {
      throw std::invalid_argument("learn: weights must be non-negative");
    }
    sum += x;
  }
  if (sum <= 0.0) {
    throw std::invalid_argument("learn: at least one weight must be > 0");
  }
  w.assign(weights.begin(), weights.end());
  for (double& x : w) x *= scale / sum;
  return w;
}

inline int common_size(std::span<const Permutation> sample) {
  if (sample.empty()) {
    throw std::invalid_argument("learn: sample must be non-empty");
  }
  int n = sample.front().size();
  for (const Permutation& p : sample) {
    if (p.size() != n) {
      throw std::invalid_argument("learn: sample sizes differ");
    }
  }
  return n;
}

}  // namespace detail

/// Exact learning: D = Σ w_k P_k, the weighted centroid of the sample's
/// permutation matrices in the Birkhoff polytope. Weights are normalized to
/// sum 1; omitted weights are uniform 1/m.
inline DoublyStochasticMatrix learn_exact(std::span<const Permutation> sample,
                                          std::span<const double> weights = {}) {
  const int n = detail::common_size(sample);
  const std::vector<double> w =
      detail::normalized_weights(sample.size(), weights, 1.0);
  std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
  for (std::size_t k = 0; k < sample.size(); ++k) {
    for (int i = 0; i < n; ++i) d[i * n + sample[k][i]] += w[k];
  }
  return DoublyStochasticMatrix(n, std::move(d));
}

/// Smoothed learning: D = Σ w_k P_k + αU with Σ w_k = 1−α, so every entry
/// is at least α/n and sampling can leave the training set's support.
inline DoublyStochasticMatrix learn_smoothed(std::span<const Permutation> sample,
                                             const LearningConfig& cfg) {
  if (!(cfg.alpha > 0.0) || cfg.alpha > 1.0) {
    throw std::invalid_argument("learn: alpha must be in (0, 1]");
  }
  const int n = detail::common_size(sample);
  const std::vector<double> w =
      detail::normalized_weights(sample.size(), cfg.weights, 1.0 - cfg.alpha);
  std::vector<double> d(static_cast<std::size_t>(n) * n, cfg.alpha / n);
  for (std::size_t k = 0; k < sample.size(); ++k) {
    for (int i = 0; i < n; ++i) d[i * n + sample[k][i]] += w[k];
  }
  return DoublyStochasticMatrix(n, std::move(d));
}

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Text format: line 1 is n, then n lines of n decimal reals.
inline void write_dsm(std::ostream& out, const DoublyStochasticMatrix& d) {
  const int n = d.size();
  out << n << '\n';
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j > 0) out << ' ';
      out << detail::format_double(d(i, j));
    }
    out << '\n';
  }
}

inline DoublyStochasticMatrix read_dsm(std::istream& in) {
  long long n = 0;
  if (!(in >> n) || n < 1 || n > 100000) {
    throw ParseError("dsm file: first token must be a positive size");
  }
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n) * n);
  for (long long k = 0; k < n * n; ++k) {
    double v;
    if (!(in >> v)) {
      throw ParseError("dsm file: expected " + std::to_string(n * n) +
                       " entries, failed at entry " + std::to_string(k + 1));
    }
    values.push_back(v);
  }
  if (!validate_dsm(values, static_cast<int>(n), kDsmFileTolerance)) {
    throw ParseError("dsm file: matrix is not doubly stochastic (tol 1e-6)");
  }
  return DoublyStochasticMatrix(static_cast<int>(n), std::move(values),
                                kDsmFileTolerance);
}

}  // namespace dsmeda
