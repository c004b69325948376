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

#include "dsmeda/eda.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <sstream>

#include "support/oracles.hpp"

using dsmeda::EdaConfig;
using dsmeda::EdaRunRecord;
using dsmeda::Permutation;
using dsmeda::QapInstance;
using dsmeda::RngStream;
using dsmeda::Sampler;
using dsmeda::ScoredPermutation;

TEST_CASE("config defaults follow lambda=10n, mu=n, alpha=1/n^2, budget=100n^2") {
  const EdaConfig cfg = EdaConfig::defaults(15, Sampler::kPs, 7);
  CHECK(cfg.lambda == 150);
  CHECK(cfg.mu == 15);
  CHECK(cfg.alpha == Catch::Approx(1.0 / 225).epsilon(0));
  CHECK(cfg.budget == 22500);
  CHECK(cfg.seed == 7);
}

TEST_CASE("config validation rejects inconsistent parameters") {
  EdaConfig cfg = EdaConfig::defaults(5, Sampler::kPs, 1);
  REQUIRE_NOTHROW(cfg.validate());
  cfg.budget = cfg.lambda - 1;
  REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = EdaConfig::defaults(5, Sampler::kPs, 1);
  cfg.mu = cfg.lambda + 1;
  REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = EdaConfig::defaults(5, Sampler::kPs, 1);
  cfg.alpha = 0.0;
  REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("uniform random permutations: degenerate size, frequencies, determinism") {
  RngStream rng(1);
  for (int k = 0; k < 100; ++k) {
    CHECK(dsmeda::uniform_random_permutation(1, rng) == Permutation::identity(1));
  }

  std::map<std::vector<int>, long long> counts;
  const long long draws = 60000;
  for (long long k = 0; k < draws; ++k) {
    counts[dsmeda::uniform_random_permutation(3, rng).images()] += 1;
  }
  REQUIRE(counts.size() == 6);
  const double sigma3 = 3.0 * std::sqrt((1.0 / 6) * (5.0 / 6) / draws);
  for (const auto& [images, c] : counts) {
    CHECK(std::abs(static_cast<double>(c) / draws - 1.0 / 6) <= sigma3);
  }

  RngStream a(9), b(9);
  for (int k = 0; k < 50; ++k) {
    CHECK(dsmeda::uniform_random_permutation(8, a) ==
          dsmeda::uniform_random_permutation(8, b));
  }
}

TEST_CASE("truncation selection keeps the mu best, ties by insertion order") {
  std::vector<ScoredPermutation> pop;
  const Permutation p2 = Permutation::identity(2);
  pop.push_back({p2, 5.0});
  pop.push_back({p2, 1.0});
  pop.push_back({p2, 5.0});
  pop.push_back({p2, 0.5});

  const auto all = dsmeda::select_truncation(pop, 4);
  REQUIRE(all.size() == 4);
  CHECK(all[0].value == 0.5);
  CHECK(all[1].value == 1.0);
  CHECK(all[2].value == 5.0);

  std::vector<ScoredPermutation> equal(6, ScoredPermutation{p2, 2.0});
  const auto picked = dsmeda::select_truncation(equal, 3);
  CHECK(picked.size() == 3);

  REQUIRE_THROWS_AS(dsmeda::select_truncation(pop, 5), std::invalid_argument);
  REQUIRE_THROWS_AS(dsmeda::select_truncation({}, 1), std::invalid_argument);
}

TEST_CASE("truncation selection matches a sort-then-take oracle") {
  RngStream rng(27);
  std::vector<ScoredPermutation> pop;
  for (int k = 0; k < 50; ++k) {
    pop.push_back({dsmeda::uniform_random_permutation(4, rng),
                   static_cast<double>(rng.next_below(20))});
  }
  const auto picked = dsmeda::select_truncation(pop, 5);
  std::vector<double> values;
  for (const auto& s : pop) values.push_back(s.value);
  std::sort(values.begin(), values.end());
  for (int k = 0; k < 5; ++k) CHECK(picked[k].value == values[k]);
}

TEST_CASE("degenerate budget: one random generation, best equals its minimum") {
  const QapInstance inst = dsmeda::testing::make_uniform_instance(6, 777);
  EdaConfig cfg = EdaConfig::defaults(6, Sampler::kPs, 424243);
  cfg.budget = cfg.lambda;
  const EdaRunRecord record = dsmeda::run_eda(inst, cfg);
  CHECK(record.evaluations_used == cfg.lambda);
  CHECK(record.iterations.empty());

  // Replay the initial population independently.
  RngStream rng(cfg.seed);
  double expected = std::numeric_limits<double>::infinity();
  for (int k = 0; k < cfg.lambda; ++k) {
    expected = std::min(
        expected,
        dsmeda::evaluate(inst, dsmeda::uniform_random_permutation(6, rng)));
  }
  CHECK(record.best_value == expected);
}

TEST_CASE("budget is met exactly even when not a lambda multiple") {
  const QapInstance inst = dsmeda::testing::make_uniform_instance(5, 31);
  EdaConfig cfg = EdaConfig::defaults(5, Sampler::kAs, 5);
  cfg.budget = cfg.lambda + 17;
  const EdaRunRecord record = dsmeda::run_eda(inst, cfg);
  CHECK(record.evaluations_used == cfg.budget);
  REQUIRE(record.iterations.size() == 1);
  CHECK(record.iterations.back().evals == cfg.budget);
}

TEST_CASE("best-so-far trace is non-increasing and consistent for all samplers") {
  const QapInstance inst = dsmeda::testing::make_uniform_instance(8, 2088);
  for (Sampler sampler : {Sampler::kPs, Sampler::kAs, Sampler::kGs}) {
    EdaConfig cfg = EdaConfig::defaults(8, sampler, 99);
    cfg.budget = 25 * 64;
    const EdaRunRecord record = dsmeda::run_eda(inst, cfg);
    REQUIRE_FALSE(record.iterations.empty());
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& row : record.iterations) {
      CHECK(row.best_so_far <= prev);
      CHECK(row.best_so_far <= row.min_sampled);
      CHECK(row.min_sampled <= row.mean_sampled);
      prev = row.best_so_far;
    }
    CHECK(record.best_value == record.iterations.back().best_so_far);
    CHECK(dsmeda::evaluate(inst, record.best_permutation) == record.best_value);
  }
}

TEST_CASE("identical config and seed reproduce the run bit-exactly") {
  const QapInstance inst = dsmeda::testing::make_uniform_instance(7, 123);
  EdaConfig cfg = EdaConfig::defaults(7, Sampler::kPs, 5150);
  cfg.budget = 20 * 49;
  const EdaRunRecord a = dsmeda::run_eda(inst, cfg);
  const EdaRunRecord b = dsmeda::run_eda(inst, cfg);
  CHECK(a.best_value == b.best_value);
  CHECK(a.best_permutation == b.best_permutation);
  REQUIRE(a.iterations.size() == b.iterations.size());
  for (std::size_t k = 0; k < a.iterations.size(); ++k) {
    CHECK(a.iterations[k].mean_sampled == b.iterations[k].mean_sampled);
    CHECK(a.iterations[k].best_so_far == b.iterations[k].best_so_far);
  }
}

TEST_CASE("alpha = 1 degenerates into trendless random search") {
  const QapInstance inst = dsmeda::testing::make_uniform_instance(15, 808);
  std::vector<std::vector<double>> series;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    EdaConfig cfg = EdaConfig::defaults(15, Sampler::kPs, seed);
    cfg.alpha = 1.0;
    cfg.budget = 60 * 225;
    const EdaRunRecord record = dsmeda::run_eda(inst, cfg);
    std::vector<double> means;
    for (const auto& row : record.iterations) means.push_back(row.mean_sampled);
    series.push_back(std::move(means));
  }
  // Least-squares slope of the seed-averaged means; |t| stays small for a
  // trendless series.
  const std::size_t t_len = series.front().size();
  std::vector<double> avg(t_len, 0.0);
  for (const auto& means : series) {
    for (std::size_t k = 0; k < t_len; ++k) avg[k] += means[k] / series.size();
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < t_len; ++k) {
    const double x = static_cast<double>(k + 1);
    sx += x; sy += avg[k]; sxx += x * x; sxy += x * avg[k];
  }
  const double nn = static_cast<double>(t_len);
  const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  double sse = 0.0;
  const double intercept = (sy - slope * sx) / nn;
  for (std::size_t k = 0; k < t_len; ++k) {
    const double x = static_cast<double>(k + 1);
    const double r = avg[k] - intercept - slope * x;
    sse += r * r;
  }
  const double slope_se =
      std::sqrt(sse / (nn - 2) / (sxx - sx * sx / nn));
  CHECK(std::abs(slope / slope_se) < 3.0);
}

TEST_CASE("run record round-trips through the text format") {
  const QapInstance inst = dsmeda::testing::make_uniform_instance(6, 3030);
  EdaConfig cfg = EdaConfig::defaults(6, Sampler::kGs, 11);
  cfg.budget = 10 * 36;
  const EdaRunRecord record = dsmeda::run_eda(inst, cfg);

  std::ostringstream out;
  dsmeda::write_run_record(out, record, inst.name, cfg);
  std::istringstream in(out.str());
  const dsmeda::RunRecordFile file = dsmeda::read_run_record(in);

  CHECK(file.header_field("instance") == inst.name);
  CHECK(file.header_field("sampler") == "gs");
  CHECK(file.record.best_value == record.best_value);
  CHECK(file.record.best_permutation == record.best_permutation);
  CHECK(file.record.evaluations_used == record.evaluations_used);
  REQUIRE(file.record.iterations.size() == record.iterations.size());
  for (std::size_t k = 0; k < record.iterations.size(); ++k) {
    CHECK(file.record.iterations[k].mean_sampled ==
          record.iterations[k].mean_sampled);
    CHECK(file.record.iterations[k].evals == record.iterations[k].evals);
  }
}
