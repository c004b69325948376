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
#include <cstdlib>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dsmeda/errors.hpp"
#include "dsmeda/permutation.hpp"

namespace dsmeda {

/// A quadratic assignment instance: minimize f(σ) = Σᵢ Σⱼ b_ij·h_{σ(i)σ(j)}.
/// B is the first matrix of the instance file (indexed by positions), H the
/// second (indexed by σ-images).
struct QapInstance {
  std::string name;
  int n = 0;
  std::vector<double> b;  // row-major n×n
  std::vector<double> h;  // row-major n×n
  std::optional<double> best_known;
  bool integral = false;  // all entries integer-valued: exact int64 objective

  double bb(int i, int j) const { return b[i * n + j]; }
  double hh(int i, int j) const { return h[i * n + j]; }
};

namespace detail {

inline double parse_numeric_token(const std::string& tok, std::size_t position) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end != begin + tok.size() || tok.empty()) {
    throw ParseError("qaplib: token " + std::to_string(position) +
                     " is not numeric: '" + tok + "'");
  }
  return v;
}

inline bool all_integral(const std::vector<double>& values) {
  for (double v : values) {
    if (std::floor(v) != v || std::abs(v) > 9.0e15) return false;
  }
  return true;
}

}  // namespace detail

/// Parses the QAPLIB plain-text format: first token n, then n² tokens for
/// the first matrix, then n² for the second, whitespace/newline-agnostic.
/// Exactly 1 + 2n² tokens are required.
inline QapInstance parse_qaplib(std::istream& in, std::string name) {
  std::string tok;
  if (!(in >> tok)) throw ParseError("qaplib: empty input");
  const double n_value = detail::parse_numeric_token(tok, 1);
  if (n_value < 2 || n_value > 10000 || std::floor(n_value) != n_value) {
    throw ParseError("qaplib: first token must be an integer size >= 2, got '" +
                     tok + "'");
  }
  const int n = static_cast<int>(n_value);
  const std::size_t expected = 1 + 2 * static_cast<std::size_t>(n) * n;

  QapInstance inst;
  inst.name = std::move(name);
  inst.n = n;
  inst.b.reserve(static_cast<std::size_t>(n) * n);
  inst.h.reserve(static_cast<std::size_t>(n) * n);
  std::size_t position = 1;
  while (in >> tok) {
    ++position;
    if (position > expected) {
      throw ParseError("qaplib: expected " + std::to_string(expected) +
                       " tokens, found extra token at position " +
                       std::to_string(position));
    }
    double v = detail::parse_numeric_token(tok, position);
    if (inst.b.size() < static_cast<std::size_t>(n) * n) {
      inst.b.push_back(v);
    } else {
      inst.h.push_back(v);
    }
  }
  if (position != expected) {
    throw ParseError("qaplib: expected " + std::to_string(expected) +
                     " tokens, input ends after token " +
                     std::to_string(position));
  }
  inst.integral = detail::all_integral(inst.b) && detail::all_integral(inst.h);
  return inst;
}

inline std::string serialize_qaplib(const QapInstance& inst) {
  auto entry = [&](double v) {
    if (inst.integral) return std::to_string(static_cast<long long>(v));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::string out = std::to_string(inst.n) + "\n\n";
  for (int i = 0; i < inst.n; ++i) {
    for (int j = 0; j < inst.n; ++j) {
      if (j > 0) out += ' ';
      out += entry(inst.bb(i, j));
    }
    out += '\n';
  }
  out += '\n';
  for (int i = 0; i < inst.n; ++i) {
    for (int j = 0; j < inst.n; ++j) {
      if (j > 0) out += ' ';
      out += entry(inst.hh(i, j));
    }
    out += '\n';
  }
  return out;
}

/// Exact double sum f(σ) = Σᵢ Σⱼ b_ij·h_{σ(i)σ(j)}, Θ(n²). Integer-valued
/// instances accumulate in 64-bit integers (Taillard objectives exceed the
/// 32-bit range).
inline double evaluate(const QapInstance& inst, const Permutation& sigma) {
  if (sigma.size() != inst.n) {
    throw std::invalid_argument("qap evaluate: permutation size mismatch");
  }
  const int n = inst.n;
  if (inst.integral) {
    long long total = 0;
    for (int i = 0; i < n; ++i) {
      const int si = sigma[i];
      for (int j = 0; j < n; ++j) {
        total += static_cast<long long>(inst.bb(i, j)) *
                 static_cast<long long>(inst.hh(si, sigma[j]));
      }
    }
    return static_cast<double>(total);
  }
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const int si = sigma[i];
    for (int j = 0; j < n; ++j) {
      total += inst.bb(i, j) * inst.hh(si, sigma[j]);
    }
  }
  return total;
}

/// (found − best_known) / best_known.
inline double relative_deviation(double found, double best_known) {
  if (!(best_known > 0.0)) {
    throw std::invalid_argument("relative deviation: best_known must be > 0");
  }
  return (found - best_known) / best_known;
}

/// Best known values of the twelve Taillard QAPLIB instances, plus chr12c
/// (proven optimum). Keyed by instance file stem.
inline const std::map<std::string, double>& published_best_known() {
  static const std::map<std::string, double> registry = {
      {"tai15a", 388214},        {"tai15b", 51765268},
      {"tai20a", 703482},        {"tai20b", 122455319},
      {"tai30a", 1818146},       {"tai30b", 637117113},
      {"tai50a", 4938796},       {"tai50b", 458821517},
      {"tai80a", 13499184},      {"tai80b", 818415043},
      {"tai100a", 21052466},     {"tai100b", 1185996137},
      {"chr12c", 11156},
  };
  return registry;
}

/// Registry file format: one "name<TAB>value" per line; '#' starts a comment.
inline std::map<std::string, double> parse_best_known_tsv(std::istream& in) {
  std::map<std::string, double> registry;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError("best-known registry: line " + std::to_string(line_no) +
                       " has no tab separator");
    }
    const std::string name = line.substr(0, tab);
    const double value =
        detail::parse_numeric_token(line.substr(tab + 1), line_no);
    registry[name] = value;
  }
  return registry;
}

}  // namespace dsmeda
