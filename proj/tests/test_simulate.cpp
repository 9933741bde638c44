// Copyright 2026 The transrank Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "transrank/simulate.hpp"

namespace transrank {
namespace {

TEST(GenTruth, InformativeDeviationsInsideBall) {
  for (double h : {0.1, 1.0, 3.0}) {
    const auto t = gen_truth(10, 5, 5, h, 7);
    EXPECT_EQ(t.informative, (std::set<int>{1, 2, 3, 4, 5}));
    for (int s = 1; s <= 5; ++s) {
      EXPECT_LE(t.delta[s - 1].squaredNorm(), h);
      EXPECT_LE(t.delta[s - 1].lpNorm<Eigen::Infinity>(), deviation_bound(h, 10));
      EXPECT_EQ(t.u[s - 1], t.alpha_star_raw - t.delta[s - 1]);
    }
    EXPECT_LE(t.alpha_star_raw.lpNorm<Eigen::Infinity>(), 2.0);
    EXPECT_LT(std::abs(t.alpha_star.sum()), 1e-12);
  }
}

TEST(GenTruth, DeviationBoundTable) {
  EXPECT_DOUBLE_EQ(deviation_bound(0.1, 10), 0.1);
  EXPECT_DOUBLE_EQ(deviation_bound(1.0, 10), 0.45);
  EXPECT_DOUBLE_EQ(deviation_bound(3.0, 10), 0.85);
  EXPECT_DOUBLE_EQ(deviation_bound(0.4, 10), 1.5 * std::sqrt(0.04));
}

TEST(GenTruth, NonInformativeAreWide) {
  const auto t = gen_truth(10, 5, 2, 0.1, 3);
  EXPECT_EQ(t.informative.size(), 2u);
  for (int s = 1; s <= 5; ++s) {
    if (!t.informative.count(s)) {
      EXPECT_LE(t.delta[s - 1].lpNorm<Eigen::Infinity>(), 2.0);
      EXPECT_GT(t.delta[s - 1].squaredNorm(), 0.1);
    }
  }
}

TEST(GenTruth, SeededDeterminism) {
  const auto a = gen_truth(10, 5, 3, 1.0, 11);
  const auto b = gen_truth(10, 5, 3, 1.0, 11);
  EXPECT_EQ(a.alpha_star_raw, b.alpha_star_raw);
  EXPECT_EQ(a.delta, b.delta);
  EXPECT_EQ(a.informative, b.informative);
  EXPECT_NE(gen_truth(10, 5, 3, 1.0, 12).alpha_star_raw, a.alpha_star_raw);
}

TEST(GenPairwise, EqualWorthsGiveFairCoins) {
  SimTruth t = gen_truth(4, 0, 0, 0.1, 1);
  t.alpha_star_raw.setZero();
  const auto d = gen_pairwise(t, 0, 10000, 5);
  EXPECT_EQ(d.total_count(), 10000);
  for (const auto& e : build_graph(d, 4).edges) {
    const double n = static_cast<double>(e.total());
    const double rate = e.wins_j / n;
    EXPECT_LE(std::abs(rate - 0.5), 3.0 * std::sqrt(0.25 / n));
  }
}

TEST(GenPairwise, ExtremeGapAlwaysWins) {
  SimTruth t = gen_truth(2, 0, 0, 0.1, 1);
  t.alpha_star_raw << 10.0, -10.0;
  const auto d = gen_pairwise(t, 0, 2000, 6);
  const auto g = build_graph(d, 2);
  EXPECT_EQ(g.edges[0].wins_l, 0);
}

TEST(GenPairwise, Deterministic) {
  const auto t = gen_truth(6, 2, 1, 0.1, 2);
  EXPECT_EQ(gen_pairwise(t, 1, 300, 9).comparisons, gen_pairwise(t, 1, 300, 9).comparisons);
  EXPECT_EQ(gen_pairwise(t, 1, 300, 9).attribute_id, 1);
}

TEST(GenRankings, DominantObjectFirst) {
  SimTruth t = gen_truth(5, 0, 0, 0.1, 1);
  t.alpha_star_raw << 20.0, 0.0, 0.0, 0.0, 0.0;
  const auto r = gen_rankings(t, 0, 2000, 5, 3);
  int first = 0;
  for (const auto& x : r.rankings) first += x.ordered.front() == 0;
  EXPECT_GE(first, 1998);
}

TEST(GenRankings, ShapesAndErrors) {
  const auto t = gen_truth(6, 1, 1, 0.1, 4);
  const auto r = gen_rankings(t, 1, 100, 3, 8);
  ASSERT_EQ(r.rankings.size(), 100u);
  for (const auto& x : r.rankings) {
    EXPECT_EQ(x.ordered.size(), 3u);
    EXPECT_NE(x.ordered[0], x.ordered[1]);
    EXPECT_NE(x.ordered[1], x.ordered[2]);
    EXPECT_NE(x.ordered[0], x.ordered[2]);
  }
  EXPECT_EQ(gen_rankings(t, 1, 50, 3, 8).rankings, gen_rankings(t, 1, 50, 3, 8).rankings);
  EXPECT_THROW(gen_rankings(t, 1, 10, 7, 8), Error);
}

TEST(GenRankings, PairsBehaveLikeComparisons) {
  SimTruth t = gen_truth(2, 0, 0, 0.1, 1);
  t.alpha_star_raw << 0.6, -0.6;
  const auto r = gen_rankings(t, 0, 20000, 2, 5);
  int wins = 0;
  for (const auto& x : r.rankings) wins += x.ordered.front() == 0;
  const double p = 1.0 / (1.0 + std::exp(-1.2));
  EXPECT_NEAR(wins / 20000.0, p, 4.0 * std::sqrt(p * (1 - p) / 20000.0));
}

TEST(L2Error, Values) {
  Vector a(3), b(3);
  a << 1.0, 0.0, -1.0;
  b << 0.0, 0.0, 0.0;
  EXPECT_DOUBLE_EQ(l2_error(a, a), 0.0);
  EXPECT_NEAR(l2_error((a.array() + 5.0).matrix(), a), 0.0, 1e-15);
  EXPECT_NEAR(l2_error(a, b), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(rms_error(a, b), std::sqrt(2.0 / 3.0), 1e-15);
  EXPECT_THROW(l2_error(a, Vector::Zero(2)), Error);
}

TEST(L2Error, ShiftInvariantInBothArguments) {
  const auto t = gen_truth(7, 0, 0, 0.1, 3);
  const Vector x = t.alpha_star_raw.reverse();
  const double base = l2_error(x, t.alpha_star_raw);
  for (double c : {-2.5, 0.3, 11.0}) {
    EXPECT_NEAR(l2_error((x.array() + c).matrix(), t.alpha_star_raw), base, 1e-13);
    EXPECT_NEAR(l2_error(x, (t.alpha_star_raw.array() + c).matrix()), base, 1e-13);
  }
}

TEST(SeedDerivation, DistinctStreams) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 10; ++a) {
    for (std::uint64_t b = 0; b < 10; ++b) seen.insert(derive_seed(1, a, b));
  }
  EXPECT_EQ(seen.size(), 100u);
}

SimConfig small_config() {
  SimConfig c;
  c.num_objects = 6;
  c.num_secondary = 2;
  c.n_per_attribute = 300;
  c.reps = 4;
  c.seed = 21;
  c.threads = 2;
  return c;
}

TEST(Benchmark, RowsAndReproducibility) {
  const auto c = small_config();
  const auto a = run_benchmark(c);
  // 3 counts x 4 methods plus 4 averaged rows.
  EXPECT_EQ(a.rows.size(), 16u);
  for (const auto& row : a.rows) {
    EXPECT_GE(row.mean_l2, 0.0);
    EXPECT_EQ(row.reps + row.failures, row.informative_count < 0 ? 12 : 4);
  }
  auto c1 = c;
  c1.threads = 1;
  const auto b = run_benchmark(c1);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].method, b.rows[i].method);
    EXPECT_EQ(a.rows[i].mean_l2, b.rows[i].mean_l2);
    EXPECT_EQ(a.rows[i].se_l2, b.rows[i].se_l2);
  }
}

TEST(Benchmark, SingleCountHasNoAveragedRow) {
  auto c = small_config();
  c.informative_counts = {2};
  c.methods = {Method::kPrimary};
  const auto r = run_benchmark(c);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].informative_count, 2);
  EXPECT_EQ(r.rows[0].method, "bt");
}

TEST(Benchmark, RankingModeNames) {
  auto c = small_config();
  c.mode = SimMode::kRanking;
  c.informative_counts = {1};
  c.reps = 2;
  const auto r = run_benchmark(c);
  std::set<std::string> names;
  for (const auto& row : r.rows) names.insert(row.method);
  EXPECT_EQ(names, (std::set<std::string>{"oracle_pl", "discovery_pl", "pl", "ppl"}));
}

TEST(Benchmark, PooledTrendAtEndpoints) {
  auto c = small_config();
  c.num_objects = 8;
  c.num_secondary = 3;
  c.n_per_attribute = 500;
  c.reps = 10;
  c.informative_counts = {0, 3};
  c.methods = {Method::kPrimary, Method::kPooled};
  const auto r = run_benchmark(c);
  std::map<std::pair<int, std::string>, double> mean;
  for (const auto& row : r.rows) mean[{row.informative_count, row.method}] = row.mean_l2;
  const auto at = [&](int k, const char* m) { return mean[std::make_pair(k, std::string(m))]; };
  EXPECT_LT(at(3, "pbt"), at(3, "bt"));
  EXPECT_LT(at(0, "bt"), at(0, "pbt"));
}

TEST(SimConfig, Validation) {
  auto c = small_config();
  c.informative_counts = {3};
  EXPECT_THROW(c.validate(), Error);
  c = small_config();
  c.mode = SimMode::kRanking;
  c.ranking_size = 7;
  EXPECT_THROW(c.validate(), Error);
  c = small_config();
  c.h = 0.0;
  EXPECT_THROW(c.validate(), Error);
  EXPECT_THROW(parse_method("nope"), Error);
  EXPECT_EQ(method_name(Method::kPooled, SimMode::kPairwise), "pbt");
  EXPECT_EQ(parse_method("oracle_pl"), Method::kOracle);
}

}  // namespace
}  // namespace transrank
