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
#include <string>
#include <vector>

#include "dsmeda/birkhoff.hpp"
#include "dsmeda/dsm.hpp"
#include "dsmeda/errors.hpp"
#include "dsmeda/permutation.hpp"
#include "dsmeda/rng.hpp"

namespace dsmeda {

/// Probabilistic sampling. Each of the n iterations picks one of the
/// remaining rows and columns uniformly (2·remaining choices), draws from
/// that line's multinomial restricted to the still-active indices
/// (renormalization is lazy: the draw divides by the active mass instead of
/// rewriting the matrix), fixes one entry of the result and deactivates the
/// used row and column. Θ(n) per iteration, Θ(n²) per sample.
///
/// Throws NumericalError when every active entry of the selected line is
/// zero, which smoothed learning rules out.
inline Permutation sample_ps(const DoublyStochasticMatrix& d, RngStream& rng) {
  const int n = d.size();
  std::vector<int> active_rows(n), active_cols(n);
  for (int i = 0; i < n; ++i) active_rows[i] = active_cols[i] = i;
  std::vector<bool> row_active(n, true), col_active(n, true);
  std::vector<int> sigma(n, -1);

  auto deactivate = [](std::vector<int>& list, std::vector<bool>& mask, int id) {
    mask[id] = false;
    list.erase(std::find(list.begin(), list.end(), id));
  };

  for (int step = 0; step < n; ++step) {
    const int remaining = static_cast<int>(active_rows.size());
    const int pick = rng.next_index(2 * remaining);
    const bool row_line = pick < remaining;
    const int line = row_line ? active_rows[pick] : active_cols[pick - remaining];
    const std::vector<bool>& other_mask = row_line ? col_active : row_active;

    double total = 0.0;
    for (int k = 0; k < n; ++k) {
      if (other_mask[k]) total += row_line ? d(line, k) : d(k, line);
    }
    if (!(total > 0.0)) {
      throw NumericalError(std::string("probabilistic sampling: all active "
                                       "entries of ") +
                           (row_line ? "row " : "column ") +
                           std::to_string(line + 1) + " are zero");
    }
    const double u = rng.next_double() * total;
    int chosen = -1;
    double cum = 0.0;
    for (int k = 0; k < n; ++k) {
      if (!other_mask[k]) continue;
      cum += row_line ? d(line, k) : d(k, line);
      chosen = k;
      if (u < cum) break;
    }

    if (row_line) {
      sigma[line] = chosen;
      deactivate(active_rows, row_active, line);
      deactivate(active_cols, col_active, chosen);
    } else {
      sigma[chosen] = line;
      deactivate(active_rows, row_active, chosen);
      deactivate(active_cols, col_active, line);
    }
  }
  return Permutation(std::move(sigma));
}

/// Algebraic sampling (randomized rounding): draw v uniform on [0,1)ⁿ and
/// return argsort(v) ∘ rank(D·v), the permutation whose matrix P minimizes
/// ‖D·v − P·v‖² over all permutation matrices. Θ(n²) per sample.
inline Permutation sample_as(const DoublyStochasticMatrix& d, RngStream& rng) {
  const int n = d.size();
  std::vector<double> v(n);
  for (double& x : v) x = rng.next_double();
  std::vector<double> dv(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += d(i, j) * v[j];
    dv[i] = sum;
  }
  return compose(argsort_vector(v), rank_vector(dv));
}

/// Geometric sampling: categorical draw of one term of a Birkhoff
/// decomposition according to the decomposition weights. The decomposition
/// is computed once per learned DSM and shared across draws.
inline Permutation sample_gs(const BirkhoffDecomposition& dec, RngStream& rng) {
  if (dec.terms.empty()) {
    throw std::invalid_argument("geometric sampling: empty decomposition");
  }
  const double u = rng.next_double();
  double cum = 0.0;
  std::size_t chosen = dec.terms.size() - 1;
  for (std::size_t i = 0; i < dec.terms.size(); ++i) {
    cum += dec.terms[i].weight;
    if (u < cum) {
      chosen = i;
      break;
    }
  }
  return dec.terms[chosen].permutation;
}

/// Exact probability Pr(σ|D) = Π d_{i,σᵢ} / Perm(D) with the permanent
/// computed by full enumeration of all n! permutations. Desk-scale oracle:
/// n ≤ 9.
inline double pmf_oracle(const DoublyStochasticMatrix& d, const Permutation& sigma) {
  const int n = d.size();
  if (sigma.size() != n) {
    throw std::invalid_argument("pmf oracle: size mismatch");
  }
  if (n > 9) {
    throw std::invalid_argument("pmf oracle: n must be <= 9");
  }
  double numerator = 1.0;
  for (int i = 0; i < n; ++i) numerator *= d(i, sigma[i]);

  std::vector<int> pi(n);
  for (int i = 0; i < n; ++i) pi[i] = i;
  double permanent = 0.0;
  do {
    double prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= d(i, pi[i]);
    permanent += prod;
  } while (std::next_permutation(pi.begin(), pi.end()));

  if (!(permanent > 0.0)) {
    throw NumericalError("pmf oracle: permanent is not positive");
  }
  return numerator / permanent;
}

}  // namespace dsmeda
