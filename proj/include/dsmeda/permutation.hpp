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

#include <algorithm>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsmeda {

namespace detail {

inline bool is_bijection(const std::vector<int>& values, int n) {
  if (static_cast<int>(values.size()) != n || n < 1) return false;
  std::vector<bool> seen(n, false);
  for (int v : values) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

}  // namespace detail

/// A permutation of {0, ..., n-1}, stored as the image of each position.
/// The public data model (serialization, construction helpers) is 1-based;
/// in-memory indices are 0-based.
class Permutation {
 public:
  explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
    if (!detail::is_bijection(images_, static_cast<int>(images_.size()))) {
      throw std::invalid_argument("permutation: entries are not a bijection");
    }
  }

  static Permutation identity(int n) {
    if (n < 1) throw std::invalid_argument("permutation: size must be >= 1");
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return Permutation(std::move(v));
  }

  static Permutation from_one_based(const std::vector<int>& items) {
    std::vector<int> v(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) v[i] = items[i] - 1;
    return Permutation(std::move(v));
  }

  int size() const { return static_cast<int>(images_.size()); }

  /// Image of position `pos` (0-based).
  int operator[](int pos) const { return images_[pos]; }

  const std::vector<int>& images() const { return images_; }

  std::vector<int> one_based() const {
    std::vector<int> v(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) v[i] = images_[i] + 1;
    return v;
  }

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<int> images_;
};

/// 0/1 matrix with exactly one 1-entry per row and per column, stored
/// sparsely as the column of the 1-entry in each row.
class PermutationMatrix {
 public:
  explicit PermutationMatrix(std::vector<int> one_col_per_row)
      : one_col_(std::move(one_col_per_row)) {
    if (!detail::is_bijection(one_col_, static_cast<int>(one_col_.size()))) {
      throw std::invalid_argument(
          "permutation matrix: rows/columns do not hold exactly one 1-entry");
    }
  }

  int size() const { return static_cast<int>(one_col_.size()); }
  int one_column_of_row(int row) const { return one_col_[row]; }
  const std::vector<int>& one_positions() const { return one_col_; }

  /// Dense 0/1 view, derived on demand.
  double operator()(int row, int col) const {
    return one_col_[row] == col ? 1.0 : 0.0;
  }

  bool operator==(const PermutationMatrix&) const = default;

 private:
  std::vector<int> one_col_;
};

inline PermutationMatrix to_matrix(const Permutation& p) {
  return PermutationMatrix(p.images());
}

inline Permutation from_matrix(const PermutationMatrix& m) {
  return Permutation(m.one_positions());
}

inline Permutation inverse(const Permutation& p) {
  std::vector<int> inv(p.size());
  for (int i = 0; i < p.size(); ++i) inv[p[i]] = i;
  return Permutation(std::move(inv));
}

/// Composition (a ∘ b)(i) = a(b(i)): b is applied first.
inline Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("compose: size mismatch");
  }
  std::vector<int> v(a.size());
  for (int i = 0; i < a.size(); ++i) v[i] = a[b[i]];
  return Permutation(std::move(v));
}

/// argsort(v)[j] = index of the j-th smallest entry of v. Ties are broken
/// stably (lower original index first).
inline Permutation argsort_vector(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("argsort: empty vector");
  std::vector<int> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return v[a] < v[b]; });
  return Permutation(std::move(idx));
}

/// rank(v)[i] = j when v[i] is the j-th smallest entry; equals the inverse
/// permutation of argsort(v).
inline Permutation rank_vector(std::span<const double> v) {
  return inverse(argsort_vector(v));
}

/// One-line serialization: whitespace-separated 1-based items.
inline std::string format_permutation(const Permutation& p) {
  std::string out;
  for (int i = 0; i < p.size(); ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(p[i] + 1);
  }
  return out;
}

inline Permutation parse_permutation(const std::string& line) {
  std::istringstream in(line);
  std::vector<int> items;
  int x;
  while (in >> x) items.push_back(x);
  if (items.empty()) {
    throw std::invalid_argument("permutation: empty input line");
  }
  return Permutation::from_one_based(items);
}

}  // namespace dsmeda
