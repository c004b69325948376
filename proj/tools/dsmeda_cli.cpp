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

// Command-line harness: `solve` and `convergence` drive EDA experiments into
// reproducible record/summary files; `sample-audit` and `decompose` inspect a
// DSM file directly. Exit codes: 0 success, 1 usage error, 2 I/O error,
// 3 numerical failure.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dsmeda/birkhoff.hpp"
#include "dsmeda/dsm.hpp"
#include "dsmeda/eda.hpp"
#include "dsmeda/errors.hpp"
#include "dsmeda/experiment.hpp"
#include "dsmeda/qap.hpp"
#include "dsmeda/sampling.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitNumerical = 3;

std::vector<dsmeda::Sampler> to_samplers(const std::vector<std::string>& names) {
  std::vector<dsmeda::Sampler> samplers;
  for (const std::string& name : names) {
    auto s = dsmeda::sampler_from_name(name);
    if (!s) throw CLI::ValidationError("--sampler", "unknown sampler: " + name);
    samplers.push_back(*s);
  }
  return samplers;
}

std::map<std::string, double> load_registry(const std::string& path) {
  std::map<std::string, double> registry = dsmeda::published_best_known();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot read registry file: " + path);
    for (const auto& [name, value] : dsmeda::parse_best_known_tsv(in)) {
      registry[name] = value;
    }
  }
  return registry;
}

dsmeda::DoublyStochasticMatrix load_dsm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot read dsm file: " + path);
  return dsmeda::read_dsm(in);
}

int cmd_sample_audit(const std::string& dsm_path, const std::string& sampler,
                     std::uint64_t seed, long long draws) {
  const dsmeda::DoublyStochasticMatrix d = load_dsm(dsm_path);
  dsmeda::RngStream rng(seed);
  std::optional<dsmeda::BirkhoffDecomposition> decomposition;
  if (sampler == "gs") decomposition = dsmeda::birkhoff_decompose(d);

  std::map<std::string, long long> counts;
  for (long long k = 0; k < draws; ++k) {
    dsmeda::Permutation p = sampler == "ps" ? dsmeda::sample_ps(d, rng)
                            : sampler == "as"
                                ? dsmeda::sample_as(d, rng)
                                : dsmeda::sample_gs(*decomposition, rng);
    const std::string line = dsmeda::format_permutation(p);
    std::cout << line << '\n';
    ++counts[line];
  }
  std::cout << "# frequency summary: draws=" << draws
            << " distinct=" << counts.size() << '\n';
  std::vector<std::pair<std::string, long long>> ordered(counts.begin(),
                                                         counts.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  for (const auto& [perm, count] : ordered) {
    std::cout << "# " << count << '\t'
              << dsmeda::detail::format_double(
                     static_cast<double>(count) / static_cast<double>(draws))
              << '\t' << perm << '\n';
  }
  return 0;
}

int cmd_decompose(const std::string& dsm_path) {
  const dsmeda::DoublyStochasticMatrix d = load_dsm(dsm_path);
  const dsmeda::BirkhoffDecomposition dec = dsmeda::birkhoff_decompose(d);
  for (const dsmeda::BirkhoffTerm& term : dec.terms) {
    std::cout << dsmeda::detail::format_double(term.weight) << '\t'
              << dsmeda::format_permutation(term.permutation) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Doubly-stochastic-matrix EDA for assignment problems"};
  app.require_subcommand(1);

  std::vector<std::string> instances;
  std::vector<std::string> sampler_names{"ps"};
  int solve_reps = 20;
  int convergence_reps = 5;
  double budget_mult = 100.0;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  std::string registry_path;

  auto add_experiment_flags = [&](CLI::App* cmd, int& reps) {
    cmd->add_option("--instance", instances, "QAPLIB instance file(s)")
        ->required();
    cmd->add_option("--sampler", sampler_names, "sampler: ps, as or gs")
        ->capture_default_str();
    cmd->add_option("--reps", reps, "repetitions per (instance, sampler)")
        ->capture_default_str();
    cmd->add_option("--budget-mult", budget_mult,
                    "evaluation budget = multiplier * n^2")
        ->capture_default_str();
    cmd->add_option("--seed", seed, "master seed")->capture_default_str();
    cmd->add_option("--out", out_dir, "output directory")->capture_default_str();
    cmd->add_option("--registry", registry_path,
                    "best-known registry TSV merged over the built-in table");
  };

  CLI::App* solve = app.add_subcommand(
      "solve", "run the EDA and write per-run records plus an MRD summary");
  add_experiment_flags(solve, solve_reps);

  CLI::App* convergence = app.add_subcommand(
      "convergence",
      "per-iteration mean sampled objective, averaged across repetitions");
  add_experiment_flags(convergence, convergence_reps);

  std::string dsm_path;
  std::string audit_sampler = "ps";
  std::uint64_t audit_seed = 1;
  long long draws = 1000;
  CLI::App* audit = app.add_subcommand(
      "sample-audit", "draw permutations from a DSM file and summarize");
  audit->add_option("--dsm", dsm_path, "DSM file (line 1: n, then n rows)")
      ->required();
  audit->add_option("--sampler", audit_sampler, "sampler: ps, as or gs")
      ->check(CLI::IsMember({"ps", "as", "gs"}))
      ->capture_default_str();
  audit->add_option("--seed", audit_seed, "rng seed")->capture_default_str();
  audit->add_option("--draws", draws, "number of permutations to draw")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  CLI::App* decompose = app.add_subcommand(
      "decompose", "Birkhoff-decompose a DSM file into weight TAB permutation");
  decompose->add_option("--dsm", dsm_path, "DSM file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (audit->parsed()) return cmd_sample_audit(dsm_path, audit_sampler, audit_seed, draws);
    if (decompose->parsed()) return cmd_decompose(dsm_path);

    dsmeda::ExperimentSpec spec;
    for (const std::string& path : instances) spec.instance_paths.emplace_back(path);
    spec.samplers = to_samplers(sampler_names);
    spec.repetitions = solve->parsed() ? solve_reps : convergence_reps;
    spec.budget_multiplier = budget_mult;
    spec.master_seed = seed;
    spec.out_dir = out_dir;
    const std::map<std::string, double> registry = load_registry(registry_path);
    if (solve->parsed()) {
      run_solve(spec, registry, &std::cerr);
    } else {
      run_convergence(spec, registry, &std::cerr);
    }
    return 0;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const dsmeda::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const dsmeda::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
