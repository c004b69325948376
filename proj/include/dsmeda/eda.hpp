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
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "dsmeda/birkhoff.hpp"
#include "dsmeda/dsm.hpp"
#include "dsmeda/errors.hpp"
#include "dsmeda/permutation.hpp"
#include "dsmeda/qap.hpp"
#include "dsmeda/rng.hpp"
#include "dsmeda/sampling.hpp"

namespace dsmeda {

enum class Sampler { kPs, kAs, kGs };

inline std::string_view sampler_name(Sampler s) {
  switch (s) {
    case Sampler::kPs: return "ps";
    case Sampler::kAs: return "as";
    case Sampler::kGs: return "gs";
  }
  return "?";
}

inline std::optional<Sampler> sampler_from_name(std::string_view name) {
  if (name == "ps") return Sampler::kPs;
  if (name == "as") return Sampler::kAs;
  if (name == "gs") return Sampler::kGs;
  return std::nullopt;
}

struct EdaConfig {
  Sampler sampler = Sampler::kPs;
  int lambda = 0;           // sample size per generation
  int mu = 0;               // selection size
  double alpha = 0.0;       // smoothing factor
  long long budget = 0;     // max objective evaluations
  std::uint64_t seed = 0;

  /// λ = 10n, μ = n, α = 1/n², budget = 100n².
  static EdaConfig defaults(int n, Sampler sampler, std::uint64_t seed) {
    EdaConfig cfg;
    cfg.sampler = sampler;
    cfg.lambda = 10 * n;
    cfg.mu = n;
    cfg.alpha = 1.0 / (static_cast<double>(n) * n);
    cfg.budget = 100LL * n * n;
    cfg.seed = seed;
    return cfg;
  }

  void validate() const {
    if (lambda < 1) throw std::invalid_argument("eda config: lambda must be >= 1");
    if (mu < 1 || mu > lambda) {
      throw std::invalid_argument("eda config: mu must satisfy 1 <= mu <= lambda");
    }
    if (!(alpha > 0.0) || alpha > 1.0) {
      throw std::invalid_argument("eda config: alpha must be in (0, 1]");
    }
    if (budget < lambda) {
      throw std::invalid_argument("eda config: budget must be >= lambda");
    }
  }
};

struct IterationStats {
  int t = 0;
  double mean_sampled = 0.0;
  double min_sampled = 0.0;
  double best_so_far = 0.0;
  long long evals = 0;
};

struct EdaRunRecord {
  Permutation best_permutation{std::vector<int>{0}};
  double best_value = 0.0;
  long long evaluations_used = 0;
  std::vector<IterationStats> iterations;
};

struct ScoredPermutation {
  Permutation permutation;
  double value;
};

/// Fisher–Yates uniform draw.
inline Permutation uniform_random_permutation(int n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("random permutation: n must be >= 1");
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  for (int i = n - 1; i > 0; --i) {
    const int j = rng.next_index(i + 1);
    std::swap(v[i], v[j]);
  }
  return Permutation(std::move(v));
}

/// The mu lowest-value entries, ties broken by insertion order (older first).
inline std::vector<ScoredPermutation> select_truncation(
    const std::vector<ScoredPermutation>& pop, int mu) {
  if (pop.empty()) throw std::invalid_argument("selection: empty population");
  if (mu < 1 || static_cast<std::size_t>(mu) > pop.size()) {
    throw std::invalid_argument("selection: mu exceeds population size");
  }
  std::vector<std::size_t> idx(pop.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return pop[a].value < pop[b].value;
  });
  std::vector<ScoredPermutation> selected;
  selected.reserve(mu);
  for (int k = 0; k < mu; ++k) selected.push_back(pop[idx[k]]);
  return selected;
}

/// Elitist EDA with a doubly stochastic model: initialize with λ uniform
/// permutations, then repeat { select best μ, learn a smoothed DSM with
/// uniform weights, sample λ new solutions, evaluate, merge }. The final
/// generation samples only min(λ, remaining budget) so the evaluation
/// budget is met exactly. Initial evaluations count against the budget.
inline EdaRunRecord run_eda(const QapInstance& inst, const EdaConfig& cfg) {
  cfg.validate();
  const int n = inst.n;
  RngStream rng(cfg.seed);

  std::vector<ScoredPermutation> population;
  population.reserve(cfg.mu + cfg.lambda);
  EdaRunRecord record;
  record.best_value = std::numeric_limits<double>::infinity();
  long long evals = 0;

  auto note = [&](const ScoredPermutation& s) {
    if (s.value < record.best_value) {
      record.best_value = s.value;
      record.best_permutation = s.permutation;
    }
  };

  for (int k = 0; k < cfg.lambda; ++k) {
    ScoredPermutation s{uniform_random_permutation(n, rng), 0.0};
    s.value = evaluate(inst, s.permutation);
    ++evals;
    note(s);
    population.push_back(std::move(s));
  }

  std::vector<Permutation> parents;
  parents.reserve(cfg.mu);
  int t = 0;
  while (evals < cfg.budget) {
    ++t;
    std::vector<ScoredPermutation> selected = select_truncation(population, cfg.mu);
    parents.clear();
    for (const ScoredPermutation& s : selected) parents.push_back(s.permutation);
    const DoublyStochasticMatrix model =
        learn_smoothed(parents, LearningConfig{cfg.alpha, {}});

    const int to_sample =
        static_cast<int>(std::min<long long>(cfg.lambda, cfg.budget - evals));
    std::optional<BirkhoffDecomposition> decomposition;
    if (cfg.sampler == Sampler::kGs) decomposition = birkhoff_decompose(model);

    double sum = 0.0;
    double min_sampled = std::numeric_limits<double>::infinity();
    std::vector<ScoredPermutation> offspring;
    offspring.reserve(to_sample);
    for (int k = 0; k < to_sample; ++k) {
      Permutation p = cfg.sampler == Sampler::kPs   ? sample_ps(model, rng)
                      : cfg.sampler == Sampler::kAs ? sample_as(model, rng)
                                                    : sample_gs(*decomposition, rng);
      ScoredPermutation s{std::move(p), 0.0};
      s.value = evaluate(inst, s.permutation);
      ++evals;
      sum += s.value;
      min_sampled = std::min(min_sampled, s.value);
      note(s);
      offspring.push_back(std::move(s));
    }

    record.iterations.push_back(IterationStats{
        t, sum / to_sample, min_sampled, record.best_value, evals});

    population = std::move(selected);
    for (ScoredPermutation& s : offspring) population.push_back(std::move(s));
  }

  record.evaluations_used = evals;
  return record;
}

// ---------------------------------------------------------------------------
// Run-record text format: one '#' header line echoing the configuration and
// final result (best_permutation last, space-separated 1-based), then CSV
// rows "t,mean_sampled,min_sampled,best_so_far,evals".
// ---------------------------------------------------------------------------

inline void write_run_record(std::ostream& out, const EdaRunRecord& record,
                             std::string_view instance_name,
                             const EdaConfig& cfg) {
  out << "# instance=" << instance_name << " sampler=" << sampler_name(cfg.sampler)
      << " lambda=" << cfg.lambda << " mu=" << cfg.mu
      << " alpha=" << detail::format_double(cfg.alpha) << " budget=" << cfg.budget
      << " seed=" << cfg.seed << " evals=" << record.evaluations_used
      << " best_value=" << detail::format_double(record.best_value)
      << " best_permutation=" << format_permutation(record.best_permutation)
      << '\n';
  out << "t,mean_sampled,min_sampled,best_so_far,evals\n";
  for (const IterationStats& row : record.iterations) {
    out << row.t << ',' << detail::format_double(row.mean_sampled) << ','
        << detail::format_double(row.min_sampled) << ','
        << detail::format_double(row.best_so_far) << ',' << row.evals << '\n';
  }
}

struct RunRecordFile {
  std::map<std::string, std::string> header;
  EdaRunRecord record;

  const std::string& header_field(const std::string& key) const {
    auto it = header.find(key);
    if (it == header.end()) {
      throw ParseError("run record: missing header field '" + key + "'");
    }
    return it->second;
  }
};

inline RunRecordFile read_run_record(std::istream& in) {
  RunRecordFile file;
  std::string line;
  if (!std::getline(in, line) || line.empty() || line[0] != '#') {
    throw ParseError("run record: missing '#' header line");
  }
  // Header tokens are key=value; best_permutation consumes the tail.
  std::istringstream header(line.substr(1));
  std::string tok;
  while (header >> tok) {
    const std::size_t eq = tok.find('=');
    if (eq == std::string::npos) {
      throw ParseError("run record: malformed header token '" + tok + "'");
    }
    const std::string key = tok.substr(0, eq);
    std::string value = tok.substr(eq + 1);
    if (key == "best_permutation") {
      std::string rest;
      std::getline(header, rest);
      value += rest;
    }
    file.header[key] = value;
  }
  file.record.best_permutation =
      parse_permutation(file.header_field("best_permutation"));
  file.record.best_value = std::stod(file.header_field("best_value"));
  file.record.evaluations_used = std::stoll(file.header_field("evals"));

  if (!std::getline(in, line) ||
      line != "t,mean_sampled,min_sampled,best_so_far,evals") {
    throw ParseError("run record: missing CSV header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    IterationStats row;
    char comma;
    std::istringstream fields(line);
    if (!(fields >> row.t >> comma >> row.mean_sampled >> comma >>
          row.min_sampled >> comma >> row.best_so_far >> comma >> row.evals)) {
      throw ParseError("run record: malformed CSV row '" + line + "'");
    }
    file.record.iterations.push_back(row);
  }
  return file;
}

}  // namespace dsmeda
