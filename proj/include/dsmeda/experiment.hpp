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
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dsmeda/eda.hpp"
#include "dsmeda/errors.hpp"
#include "dsmeda/qap.hpp"

namespace dsmeda {

struct ExperimentSpec {
  std::vector<std::filesystem::path> instance_paths;
  std::vector<Sampler> samplers;
  int repetitions = 20;
  double budget_multiplier = 100.0;  // budget = multiplier · n²
  std::uint64_t master_seed = 1;
  std::filesystem::path out_dir;

  void validate() const {
    if (instance_paths.empty()) {
      throw std::invalid_argument("experiment: no instances given");
    }
    if (samplers.empty()) {
      throw std::invalid_argument("experiment: no samplers given");
    }
    if (repetitions < 1) {
      throw std::invalid_argument("experiment: repetitions must be >= 1");
    }
    if (!(budget_multiplier > 0.0)) {
      throw std::invalid_argument("experiment: budget multiplier must be > 0");
    }
  }
};

inline std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

/// Per-run seed: master_seed XOR fnv1a64(instance 0x1F sampler 0x1F rep).
/// A pure function of its inputs, so any subset of runs can be reproduced
/// independently.
inline std::uint64_t derive_run_seed(std::uint64_t master_seed,
                                     std::string_view instance_name,
                                     Sampler sampler, int repetition) {
  std::string key;
  key += instance_name;
  key += '\x1f';
  key += sampler_name(sampler);
  key += '\x1f';
  key += std::to_string(repetition);
  return master_seed ^ fnv1a64(key);
}

inline QapInstance load_qap_file(const std::filesystem::path& path,
                                 const std::map<std::string, double>& registry) {
  std::ifstream in(path);
  if (!in) {
    throw std::ios_base::failure("cannot read instance file: " + path.string());
  }
  QapInstance inst = parse_qaplib(in, path.stem().string());
  if (auto it = registry.find(inst.name); it != registry.end()) {
    inst.best_known = it->second;
  }
  return inst;
}

inline std::string run_record_filename(std::string_view instance_name,
                                       Sampler sampler, int repetition) {
  std::string name{instance_name};
  name += "__";
  name += sampler_name(sampler);
  name += "__rep";
  name += std::to_string(repetition);
  name += ".csv";
  return name;
}

struct SummaryRow {
  std::string instance;
  std::optional<double> best_known;
  Sampler sampler = Sampler::kPs;
  std::optional<double> median_rd;
  std::optional<double> min_rd;
  std::optional<double> max_rd;
  int reps = 0;
};

inline double median_of(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  if (values.size() % 2 == 1) return values[m];
  return 0.5 * (values[m - 1] + values[m]);
}

namespace detail {

inline std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string("NA");
}

}  // namespace detail

/// Summary table layout mirroring the per-instance MRD reporting:
/// instance, best_known, sampler, median_rd, min_rd, max_rd, reps.
inline void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "instance\tbest_known\tsampler\tmedian_rd\tmin_rd\tmax_rd\treps\n";
  for (const SummaryRow& r : rows) {
    out << r.instance << '\t' << detail::format_optional(r.best_known) << '\t'
        << sampler_name(r.sampler) << '\t' << detail::format_optional(r.median_rd)
        << '\t' << detail::format_optional(r.min_rd) << '\t'
        << detail::format_optional(r.max_rd) << '\t' << r.reps << '\n';
  }
}

inline SummaryRow summarize_runs(const QapInstance& inst, Sampler sampler,
                                 const std::vector<double>& best_values) {
  SummaryRow row;
  row.instance = inst.name;
  row.best_known = inst.best_known;
  row.sampler = sampler;
  row.reps = static_cast<int>(best_values.size());
  if (inst.best_known) {
    std::vector<double> rds;
    rds.reserve(best_values.size());
    for (double v : best_values) {
      rds.push_back(relative_deviation(v, *inst.best_known));
    }
    row.median_rd = median_of(rds);
    row.min_rd = *std::min_element(rds.begin(), rds.end());
    row.max_rd = *std::max_element(rds.begin(), rds.end());
  }
  return row;
}

namespace detail {

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::ios_base::failure("cannot write file: " + path.string());
  }
  out << content;
}

inline EdaConfig config_for(const QapInstance& inst, Sampler sampler,
                            const ExperimentSpec& spec, int repetition) {
  EdaConfig cfg = EdaConfig::defaults(
      inst.n, sampler,
      derive_run_seed(spec.master_seed, inst.name, sampler, repetition));
  cfg.budget = static_cast<long long>(
      std::llround(spec.budget_multiplier * inst.n * inst.n));
  return cfg;
}

}  // namespace detail

/// Runs repetitions × samplers × instances, writing one record file per run
/// plus summary.tsv with per-(instance, sampler) median/min/max relative
/// deviations. Progress goes to `progress` (pass nullptr to silence); data
/// goes to files only.
inline std::vector<SummaryRow> run_solve(
    const ExperimentSpec& spec, const std::map<std::string, double>& registry,
    std::ostream* progress) {
  spec.validate();
  std::filesystem::create_directories(spec.out_dir);
  std::vector<SummaryRow> summary;
  for (const std::filesystem::path& path : spec.instance_paths) {
    const QapInstance inst = load_qap_file(path, registry);
    for (Sampler sampler : spec.samplers) {
      std::vector<double> best_values;
      best_values.reserve(spec.repetitions);
      for (int rep = 0; rep < spec.repetitions; ++rep) {
        const EdaConfig cfg = detail::config_for(inst, sampler, spec, rep);
        const EdaRunRecord record = run_eda(inst, cfg);
        best_values.push_back(record.best_value);
        std::ostringstream text;
        write_run_record(text, record, inst.name, cfg);
        detail::write_text_file(
            spec.out_dir / run_record_filename(inst.name, sampler, rep),
            text.str());
        if (progress) {
          *progress << inst.name << ' ' << sampler_name(sampler) << " rep "
                    << rep + 1 << '/' << spec.repetitions
                    << " best=" << detail::format_double(record.best_value)
                    << " evals=" << record.evaluations_used << '\n';
        }
      }
      summary.push_back(summarize_runs(inst, sampler, best_values));
    }
  }
  std::ostringstream text;
  write_summary(text, summary);
  detail::write_text_file(spec.out_dir / "summary.tsv", text.str());
  return summary;
}

/// Recomputes the summary independently from the record files on disk;
/// the result must match run_solve's return bit-exactly.
inline std::vector<SummaryRow> summarize_from_record_files(
    const ExperimentSpec& spec, const std::map<std::string, double>& registry) {
  std::vector<SummaryRow> summary;
  for (const std::filesystem::path& path : spec.instance_paths) {
    const QapInstance inst = load_qap_file(path, registry);
    for (Sampler sampler : spec.samplers) {
      std::vector<double> best_values;
      for (int rep = 0; rep < spec.repetitions; ++rep) {
        std::ifstream in(spec.out_dir /
                         run_record_filename(inst.name, sampler, rep));
        if (!in) {
          throw std::ios_base::failure("missing record file for " + inst.name);
        }
        best_values.push_back(read_run_record(in).record.best_value);
      }
      summary.push_back(summarize_runs(inst, sampler, best_values));
    }
  }
  return summary;
}

/// Convergence experiment: `repetitions` seeds of each sampler on a single
/// instance; per-run records are written and the per-iteration mean sampled
/// objective, averaged across repetitions, lands in
/// <instance>__<sampler>__convergence.csv as
/// "t,mean_sampled,mean_sampled_rd" (rd column NA without a best-known
/// value).
inline void run_convergence(const ExperimentSpec& spec,
                            const std::map<std::string, double>& registry,
                            std::ostream* progress) {
  spec.validate();
  if (spec.instance_paths.size() != 1) {
    throw std::invalid_argument("convergence: exactly one instance expected");
  }
  std::filesystem::create_directories(spec.out_dir);
  const QapInstance inst = load_qap_file(spec.instance_paths.front(), registry);
  for (Sampler sampler : spec.samplers) {
    std::vector<std::vector<double>> means_per_rep;
    for (int rep = 0; rep < spec.repetitions; ++rep) {
      const EdaConfig cfg = detail::config_for(inst, sampler, spec, rep);
      const EdaRunRecord record = run_eda(inst, cfg);
      std::vector<double> means;
      means.reserve(record.iterations.size());
      for (const IterationStats& row : record.iterations) {
        means.push_back(row.mean_sampled);
      }
      means_per_rep.push_back(std::move(means));
      std::ostringstream text;
      write_run_record(text, record, inst.name, cfg);
      detail::write_text_file(
          spec.out_dir / run_record_filename(inst.name, sampler, rep),
          text.str());
      if (progress) {
        *progress << inst.name << ' ' << sampler_name(sampler) << " rep "
                  << rep + 1 << '/' << spec.repetitions
                  << " iterations=" << record.iterations.size() << '\n';
      }
    }
    // Identical (budget, λ) across seeds gives identical iteration counts.
    const std::size_t iterations = means_per_rep.front().size();
    std::ostringstream text;
    text << "t,mean_sampled,mean_sampled_rd\n";
    for (std::size_t k = 0; k < iterations; ++k) {
      double sum = 0.0;
      for (const std::vector<double>& means : means_per_rep) sum += means[k];
      const double avg = sum / means_per_rep.size();
      text << k + 1 << ',' << detail::format_double(avg) << ',';
      if (inst.best_known) {
        text << detail::format_double(relative_deviation(avg, *inst.best_known));
      } else {
        text << "NA";
      }
      text << '\n';
    }
    std::string filename{inst.name};
    filename += "__";
    filename += sampler_name(sampler);
    filename += "__convergence.csv";
    detail::write_text_file(spec.out_dir / filename, text.str());
  }
}

}  // namespace dsmeda
