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

#include <string>
#include <vector>

#include "dsmeda/dsm.hpp"
#include "dsmeda/errors.hpp"
#include "dsmeda/matching.hpp"
#include "dsmeda/permutation.hpp"

namespace dsmeda {

/// Residual entries below this are treated as structural zeros; floating
/// subtraction leaves dust that would otherwise force spurious matching
/// rounds.
inline constexpr double kBirkhoffSupportEpsilon = 1e-12;

/// Entrywise tolerance for Σ w_i·P_i to reconstruct the source DSM.
inline constexpr double kBirkhoffReconstructionTol = 1e-7;

struct BirkhoffTerm {
  double weight;
  Permutation permutation;
};

/// Convex combination of permutation matrices reconstructing a DSM:
/// D = Σ w_i·P_i with Σ w_i = 1 and length k ≤ n² − 2n + 2 (n ≥ 2).
struct BirkhoffDecomposition {
  int n = 0;
  std::vector<BirkhoffTerm> terms;

  std::size_t length() const { return terms.size(); }
};

/// Dense row-major Σ w_i·to_matrix(P_i); used by validation and tests.
inline std::vector<double> reconstruct(const BirkhoffDecomposition& dec) {
  std::vector<double> m(static_cast<std::size_t>(dec.n) * dec.n, 0.0);
  for (const BirkhoffTerm& term : dec.terms) {
    for (int i = 0; i < dec.n; ++i) {
      m[i * dec.n + term.permutation[i]] += term.weight;
    }
  }
  return m;
}

/// Greedy Birkhoff algorithm: find a perfect matching in the support graph
/// of the residual, subtract the matching scaled by its minimum entry,
/// repeat until the residual mass is negligible. Matchings come from
/// hopcroft_karp with ascending column order, so the result is
/// deterministic. Throws NumericalError when the support graph of a
/// non-negligible residual has no perfect matching.
inline BirkhoffDecomposition birkhoff_decompose(const DoublyStochasticMatrix& d) {
  const int n = d.size();
  std::vector<double> residual = d.values();
  BirkhoffDecomposition dec;
  dec.n = n;

  const int max_rounds = n * n + 2;
  std::vector<std::vector<int>> adjacency(n);
  for (int round = 0;; ++round) {
    double mass = 0.0;
    for (double v : residual) mass += v;
    if (mass < kBirkhoffSupportEpsilon * n) break;
    if (round >= max_rounds) {
      throw NumericalError(
          "birkhoff: did not converge within " + std::to_string(max_rounds) +
          " rounds; residual mass " + std::to_string(mass));
    }

    for (int i = 0; i < n; ++i) {
      adjacency[i].clear();
      for (int j = 0; j < n; ++j) {
        if (residual[i * n + j] > kBirkhoffSupportEpsilon) {
          adjacency[i].push_back(j);
        }
      }
    }
    auto matching = hopcroft_karp(adjacency, n);
    if (!matching) {
      throw NumericalError(
          "birkhoff: support graph has no perfect matching; residual mass " +
          std::to_string(mass));
    }
    double w = 1.0;
    for (int i = 0; i < n; ++i) {
      w = std::min(w, residual[i * n + (*matching)[i]]);
    }
    for (int i = 0; i < n; ++i) {
      double& cell = residual[i * n + (*matching)[i]];
      cell = std::max(cell - w, 0.0);
    }
    dec.terms.push_back(BirkhoffTerm{w, std::move(*matching)});
  }

  if (dec.terms.empty()) {
    throw NumericalError("birkhoff: empty decomposition");
  }
  double total = 0.0;
  for (const BirkhoffTerm& term : dec.terms) total += term.weight;
  for (BirkhoffTerm& term : dec.terms) term.weight /= total;
  return dec;
}

}  // namespace dsmeda
