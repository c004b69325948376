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

#include "dsmeda/sampling.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <map>
#include <set>

#include "dsmeda/birkhoff.hpp"
#include "dsmeda/dsm.hpp"
#include "dsmeda/eda.hpp"
#include "dsmeda/rng.hpp"
#include "support/oracles.hpp"

using dsmeda::DoublyStochasticMatrix;
using dsmeda::LearningConfig;
using dsmeda::Permutation;
using dsmeda::RngStream;

namespace {

DoublyStochasticMatrix as_dsm(const Permutation& p) {
  const int n = p.size();
  std::vector<double> values(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) values[i * n + p[i]] = 1.0;
  return DoublyStochasticMatrix(n, std::move(values));
}

DoublyStochasticMatrix random_smoothed(int n, RngStream& rng, double alpha) {
  std::vector<Permutation> sample;
  const int m = 1 + rng.next_index(2 * n);
  for (int k = 0; k < m; ++k) {
    sample.push_back(dsmeda::uniform_random_permutation(n, rng));
  }
  return dsmeda::learn_smoothed(sample, LearningConfig{alpha, {}});
}

template <typename SampleFn>
std::map<std::vector<int>, double> empirical_distribution(SampleFn&& draw,
                                                          long long draws) {
  std::map<std::vector<int>, double> freq;
  for (long long k = 0; k < draws; ++k) freq[draw().images()] += 1.0;
  for (auto& [key, value] : freq) value /= static_cast<double>(draws);
  return freq;
}

}  // namespace

TEST_CASE("ps on a permutation-matrix model returns only that permutation") {
  RngStream rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + rng.next_index(12);
    const Permutation p = dsmeda::uniform_random_permutation(n, rng);
    const DoublyStochasticMatrix d = as_dsm(p);
    for (int k = 0; k < 50; ++k) CHECK(dsmeda::sample_ps(d, rng) == p);
  }
}

TEST_CASE("ps on the uniform model is uniform: 3-sigma frequency band") {
  const DoublyStochasticMatrix u3 = dsmeda::uniform_dsm(3);
  RngStream rng(314159);
  const long long draws = 60000;
  const auto freq = empirical_distribution(
      [&] { return dsmeda::sample_ps(u3, rng); }, draws);
  REQUIRE(freq.size() == 6);
  const double sigma3 = 3.0 * std::sqrt((1.0 / 6) * (5.0 / 6) / draws);
  for (const auto& [perm, f] : freq) CHECK(std::abs(f - 1.0 / 6) <= sigma3);
}

TEST_CASE("ps empirical distribution matches exact enumeration of the procedure") {
  RngStream setup(77);
  for (int n : {3, 4}) {
    for (int trial = 0; trial < 3; ++trial) {
      const DoublyStochasticMatrix d =
          random_smoothed(n, setup, 0.02 + 0.3 * setup.next_double());
      const auto exact = dsmeda::testing::sequential_ps_distribution(d);
      RngStream rng(1000 + n * 10 + trial);
      const long long draws = 120000;
      const auto empirical = empirical_distribution(
          [&] { return dsmeda::sample_ps(d, rng); }, draws);
      CHECK(dsmeda::testing::total_variation(exact, empirical) < 0.02);
    }
  }
}

TEST_CASE("ps reports the dead line on structurally impossible models") {
  // Exact (unsmoothed) models with zeros can strand the sampler; this matrix
  // dies whenever (0,0) and (2,2) are fixed first.
  const DoublyStochasticMatrix d(
      3, {0.5, 0.5, 0.0, 0.5, 0.0, 0.5, 0.0, 0.5, 0.5});
  int deaths = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    RngStream rng(seed);
    try {
      const Permutation p = dsmeda::sample_ps(d, rng);
      for (int i = 0; i < 3; ++i) CHECK(d(i, p[i]) > 0.0);
    } catch (const dsmeda::NumericalError& e) {
      ++deaths;
      CHECK(std::string(e.what()).find("are zero") != std::string::npos);
    }
  }
  CHECK(deaths > 0);
}

TEST_CASE("smoothed models never strand the ps sampler") {
  RngStream rng(4242);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + rng.next_index(15);
    const DoublyStochasticMatrix d = random_smoothed(n, rng, 0.01);
    REQUIRE_NOTHROW(dsmeda::sample_ps(d, rng));
  }
}

TEST_CASE("as on a permutation-matrix model returns only that permutation") {
  RngStream rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + rng.next_index(12);
    const Permutation p = dsmeda::uniform_random_permutation(n, rng);
    const DoublyStochasticMatrix d = as_dsm(p);
    for (int k = 0; k < 50; ++k) CHECK(dsmeda::sample_as(d, rng) == p);
  }
}

TEST_CASE("as output solves the rounding problem argmin ||Dv - Pv||^2") {
  RngStream rng(998);
  for (int trial = 0; trial < 25; ++trial) {
    const DoublyStochasticMatrix d = random_smoothed(4, rng, 0.1);
    // Replays the sampler's own v draw, then checks the exhaustive argmin.
    RngStream sampler_rng(5000 + trial);
    RngStream replay = sampler_rng;
    const Permutation sigma = dsmeda::sample_as(d, sampler_rng);
    std::vector<double> v(4);
    for (double& x : v) x = replay.next_double();
    std::vector<double> dv(4, 0.0);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) dv[i] += d(i, j) * v[j];
    }
    auto objective = [&](const std::vector<int>& images) {
      double sum = 0.0;
      for (int i = 0; i < 4; ++i) {
        const double diff = dv[i] - v[images[i]];
        sum += diff * diff;
      }
      return sum;
    };
    double best = std::numeric_limits<double>::infinity();
    dsmeda::testing::for_each_permutation(
        4, [&](const std::vector<int>& images) {
          best = std::min(best, objective(images));
        });
    CHECK(objective(sigma.images()) == Catch::Approx(best).margin(1e-12));
  }
}

TEST_CASE("gs draws terms with the decomposition weights") {
  const dsmeda::BirkhoffDecomposition single{
      3, {{1.0, Permutation({2, 0, 1})}}};
  RngStream rng(21);
  for (int k = 0; k < 1000; ++k) {
    CHECK(dsmeda::sample_gs(single, rng) == Permutation({2, 0, 1}));
  }

  const dsmeda::BirkhoffDecomposition two{
      2, {{0.9, Permutation({0, 1})}, {0.1, Permutation({1, 0})}}};
  long long identity_count = 0;
  const long long draws = 10000;
  for (long long k = 0; k < draws; ++k) {
    if (dsmeda::sample_gs(two, rng) == Permutation({0, 1})) ++identity_count;
  }
  const double f = static_cast<double>(identity_count) / draws;
  CHECK(std::abs(f - 0.9) <= 3.0 * std::sqrt(0.9 * 0.1 / draws));
}

TEST_CASE("gs support equals the decomposition terms") {
  RngStream rng(909);
  const DoublyStochasticMatrix d = random_smoothed(5, rng, 0.4);
  const dsmeda::BirkhoffDecomposition dec = dsmeda::birkhoff_decompose(d);
  CHECK(dec.length() <= 17u);  // 5*5 - 2*5 + 2

  std::set<std::vector<int>> in_decomposition;
  for (const auto& term : dec.terms) {
    in_decomposition.insert(term.permutation.images());
  }
  std::set<std::vector<int>> sampled;
  const long long draws = 100000;
  for (long long k = 0; k < draws; ++k) {
    sampled.insert(dsmeda::sample_gs(dec, rng).images());
  }
  for (const auto& images : sampled) CHECK(in_decomposition.count(images) == 1);
  for (const auto& term : dec.terms) {
    if (term.weight >= 1e-3) CHECK(sampled.count(term.permutation.images()) == 1);
  }
}

TEST_CASE("samplers are deterministic given the stream seed") {
  RngStream setup(3);
  const DoublyStochasticMatrix d = random_smoothed(6, setup, 0.15);
  const dsmeda::BirkhoffDecomposition dec = dsmeda::birkhoff_decompose(d);
  for (int variant = 0; variant < 3; ++variant) {
    RngStream a(111), b(111);
    for (int k = 0; k < 200; ++k) {
      switch (variant) {
        case 0: CHECK(dsmeda::sample_ps(d, a) == dsmeda::sample_ps(d, b)); break;
        case 1: CHECK(dsmeda::sample_as(d, a) == dsmeda::sample_as(d, b)); break;
        default: CHECK(dsmeda::sample_gs(dec, a) == dsmeda::sample_gs(dec, b));
      }
    }
  }
}

TEST_CASE("derived lanes depend only on parent seed and lane index") {
  RngStream parent(500);
  parent.next_double();
  parent.next_double();
  RngStream lane_after = parent.derive(4);
  CHECK(RngStream(500).derive(4).next_double() == lane_after.next_double());
}

TEST_CASE("pmf oracle on degenerate and uniform models") {
  RngStream rng(88);
  const Permutation p = dsmeda::uniform_random_permutation(5, rng);
  CHECK(dsmeda::pmf_oracle(as_dsm(p), p) == Catch::Approx(1.0).margin(1e-15));

  const DoublyStochasticMatrix u3 = dsmeda::uniform_dsm(3);
  dsmeda::testing::for_each_permutation(3, [&](const std::vector<int>& images) {
    CHECK(dsmeda::pmf_oracle(u3, Permutation(images)) ==
          Catch::Approx(1.0 / 6).margin(1e-12));
  });
}

TEST_CASE("pmf oracle sums to one over the symmetric group") {
  RngStream rng(6021023);
  for (int n : {3, 4, 5}) {
    const DoublyStochasticMatrix d = random_smoothed(n, rng, 0.2);
    double total = 0.0;
    dsmeda::testing::for_each_permutation(n, [&](const std::vector<int>& images) {
      total += dsmeda::pmf_oracle(d, Permutation(images));
    });
    CHECK(total == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("pmf oracle rejects oversized inputs") {
  const DoublyStochasticMatrix u = dsmeda::uniform_dsm(10);
  REQUIRE_THROWS_AS(dsmeda::pmf_oracle(u, Permutation::identity(10)),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(
      dsmeda::pmf_oracle(dsmeda::uniform_dsm(3), Permutation::identity(4)),
      std::invalid_argument);
}
