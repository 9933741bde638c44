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
#include <random>

#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "transrank/simulate.hpp"
#include "transrank/transfer.hpp"

namespace transrank {
namespace {

using testing::newton_bt_oracle;

ComparisonDataset dataset_from(const std::vector<std::vector<Comparison>>& attrs, int m) {
  ComparisonDataset d;
  d.num_objects = m;
  for (std::size_t s = 0; s < attrs.size(); ++s) {
    d.attributes.push_back({static_cast<int>(s), attrs[s], "a" + std::to_string(s)});
  }
  return d;
}

ComparisonDataset simulated(std::uint64_t seed, int informative, int m = 10, int n = 1000,
                            int secondaries = 5) {
  const auto truth = gen_truth(m, secondaries, informative, 0.1, seed);
  ComparisonDataset d;
  d.num_objects = m;
  for (int s = 0; s <= secondaries; ++s) {
    d.attributes.push_back(gen_pairwise(truth, s, n, derive_seed(seed, 1 + s, 0)));
  }
  return d;
}

const std::vector<Comparison> kThree{{0, 1, 8}, {1, 0, 2}, {1, 2, 7},
                                     {2, 1, 3}, {0, 2, 9}, {2, 0, 1}};

TEST(FitBt, BalancedIsZero) {
  std::vector<Comparison> cs;
  for (int j = 0; j < 3; ++j) {
    for (int l = 0; l < 3; ++l) {
      if (j != l) cs.push_back({j, l, 2});
    }
  }
  const auto fit = fit_bt({0, cs, ""}, 3);
  EXPECT_LT(fit.worths.lpNorm<Eigen::Infinity>(), 1e-10);
}

TEST(FitBt, MatchesNewtonOracle) {
  const auto fit = fit_bt({0, kThree, ""}, 3);
  EXPECT_LT((fit.worths - newton_bt_oracle(kThree, 3)).lpNorm<Eigen::Infinity>(), 1e-6);
}

TEST(FitBt, ReversalNegates) {
  std::mt19937_64 rng(1);
  const AttributeData d{0, testing::random_connected_data(6, rng), ""};
  const auto a = fit_bt(d, 6).worths;
  const auto b = fit_bt(reverse_preferences(d), 6).worths;
  EXPECT_LT((a + b).lpNorm<Eigen::Infinity>(), 1e-8);
}

TEST(FitBt, DisconnectedGraph) {
  const AttributeData d{0, {{0, 1, 1}, {1, 0, 1}, {2, 3, 1}, {3, 2, 1}}, ""};
  try {
    fit_bt(d, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDisconnectedGraph);
    EXPECT_NE(std::string(e.what()).find("disconnected comparison graph"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("{0,1} {2,3}"), std::string::npos);
  }
  OptimizerConfig config;
  config.max_iters = 50;
  EXPECT_NO_THROW(fit_bt(d, 4, config, /*force=*/true));
}

TEST(FitBt, FordFailureIsFlagged) {
  const AttributeData d{0, {{0, 1, 1}, {1, 2, 1}, {2, 1, 1}}, ""};
  OptimizerConfig config;
  config.max_iters = 100;
  const auto fit = fit_bt(d, 3, config);
  EXPECT_TRUE(fit.mle_existence_warning);
  EXPECT_FALSE(fit.diagnostics.ford_condition);
}

TEST(FitPooled, PrimaryOnlyEqualsFitBt) {
  const auto d = simulated(3, 2);
  const auto a = fit_pooled(d, {0}).worths;
  const auto b = fit_bt(d.primary(), d.num_objects).worths;
  EXPECT_LT((a - b).lpNorm<Eigen::Infinity>(), 1e-9);
}

TEST(FitPooled, DuplicatedDataGivesSameFit) {
  std::mt19937_64 rng(4);
  const auto cs = testing::random_connected_data(5, rng);
  const auto d = dataset_from({cs, cs}, 5);
  const auto a = fit_pooled(d, {0, 1}).worths;
  const auto b = fit_bt(d.primary(), 5).worths;
  EXPECT_LT((a - b).lpNorm<Eigen::Infinity>(), 1e-7);
}

TEST(FitPooled, CloseSecondaryHelpsOnAverage) {
  double pooled = 0.0, primary = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto truth = gen_truth(10, 1, 1, 0.1, 100 + seed);
    ComparisonDataset d;
    d.num_objects = 10;
    d.attributes.push_back(gen_pairwise(truth, 0, 500, derive_seed(seed, 1, 0)));
    d.attributes.push_back(gen_pairwise(truth, 1, 2000, derive_seed(seed, 2, 0)));
    pooled += l2_error(fit_pooled(d, {0, 1}).worths, truth.alpha_star);
    primary += l2_error(fit_bt(d.primary(), 10).worths, truth.alpha_star);
  }
  EXPECT_LT(pooled, primary);
}

TEST(DefaultLambda, Values) {
  // sqrt(10 ln 10 / 1000), evaluated to 18 digits.
  EXPECT_NEAR(default_lambda_delta(10, 1.0, 1000, std::exp(1.0)), 0.151742712938514635,
              1e-14);
  EXPECT_EQ(default_lambda_delta(10, 1.0, 1000, std::exp(1.0), 0.0), 0.0);
  EXPECT_NEAR(default_lambda_delta(10, 0.7, 1000, 5.0) / default_lambda_delta(10, 0.7, 2000, 5.0),
              std::sqrt(2.0), 1e-12);
  EXPECT_THROW(default_lambda_delta(10, 1.0, 1000, 1.0), Error);
  Vector flat = Vector::Zero(4);
  EXPECT_DOUBLE_EQ(estimate_kappa2(flat), std::exp(1.0));
  Vector wide(3);
  wide << -1.0, 0.0, 1.5;
  EXPECT_NEAR(estimate_kappa2(wide), std::exp(2.5), 1e-12);
}

TEST(FitOracle, EmptySetZeroPenaltyIsPrimaryMle) {
  const auto d = simulated(5, 3);
  OracleOptions options;
  options.lambda_delta = 0.0;
  const auto fit = fit_oracle(d, {}, options);
  const auto bt = fit_bt(d.primary(), 10).worths;
  EXPECT_LT((fit.alpha_hat - bt).lpNorm<Eigen::Infinity>(), 1e-6);
}

TEST(FitOracle, ZeroPenaltyIsPrimaryMleRegardlessOfTransfer) {
  const auto d = simulated(6, 3);
  OracleOptions options;
  options.lambda_delta = 0.0;
  const auto fit = fit_oracle(d, {1, 2, 3, 4, 5}, options);
  const auto bt = fit_bt(d.primary(), 10).worths;
  EXPECT_LT((fit.alpha_hat - bt).lpNorm<Eigen::Infinity>(), 1e-6);
}

TEST(FitOracle, HugePenaltyKeepsTransferEstimate) {
  const auto d = simulated(7, 3);
  OracleOptions options;
  options.lambda_delta = 1e12;
  const auto fit = fit_oracle(d, {1, 2, 3}, options);
  EXPECT_LT((fit.alpha_hat - fit.u_hat).lpNorm<Eigen::Infinity>(), 1e-4);
  EXPECT_LT(fit.delta_hat.lpNorm<Eigen::Infinity>(), 1e-4);
}

TEST(FitOracle, CopyOfPrimaryReproducesPrimaryMle) {
  std::mt19937_64 rng(8);
  const auto cs = testing::random_connected_data(6, rng);
  const auto d = dataset_from({cs, cs}, 6);
  const auto bt = fit_bt(d.primary(), 6).worths;
  for (double lambda : {0.0, 0.5, 50.0}) {
    OracleOptions options;
    options.lambda_delta = lambda;
    const auto fit = fit_oracle(d, {1}, options);
    EXPECT_LT((fit.alpha_hat - bt).lpNorm<Eigen::Infinity>(), 1e-5);
  }
}

TEST(FitOracle, ShrinkageIsMonotone) {
  const auto d = simulated(9, 2);
  double previous = INFINITY;
  for (double lambda : {0.0, 0.1, 1.0, 10.0, 100.0}) {
    OracleOptions options;
    options.lambda_delta = lambda;
    const double norm = fit_oracle(d, {1, 2}, options).delta_hat.norm();
    EXPECT_LE(norm, previous + 1e-9);
    previous = norm;
  }
}

TEST(FitOracle, SignEquivariance) {
  const auto d = simulated(10, 3, 6, 400, 3);
  ComparisonDataset r = d;
  for (auto& a : r.attributes) a = reverse_preferences(a);
  OracleOptions options;
  options.lambda_delta = 2.0;
  const auto f = fit_oracle(d, {1, 2}, options);
  const auto g = fit_oracle(r, {1, 2}, options);
  EXPECT_LT((f.u_hat + g.u_hat).lpNorm<Eigen::Infinity>(), 1e-8);
  EXPECT_LT((f.delta_hat + g.delta_hat).lpNorm<Eigen::Infinity>(), 1e-8);
  EXPECT_LT((f.alpha_hat + g.alpha_hat).lpNorm<Eigen::Infinity>(), 1e-8);
}

TEST(FitOracle, OutputInvariants) {
  const auto d = simulated(11, 4);
  const auto fit = fit_oracle(d, {1, 2, 3, 4});
  EXPECT_LE(std::abs(fit.alpha_hat.sum()), 1e-10);
  EXPECT_LT((fit.alpha_hat - center(fit.u_hat + fit.delta_hat)).norm(), 1e-12);
  EXPECT_GT(fit.lambda_delta, 0.0);
  EXPECT_TRUE(fit.transfer_optim.converged);
  EXPECT_TRUE(fit.debias_optim.converged);
}

TEST(FitOracle, Errors) {
  const auto d = simulated(12, 1, 5, 200, 2);
  OracleOptions options;
  options.lambda_delta = -1.0;
  EXPECT_THROW(fit_oracle(d, {1}, options), Error);
  EXPECT_THROW(fit_oracle(d, {0}), Error);
  EXPECT_THROW(fit_oracle(d, {7}), Error);
  const auto split = dataset_from({{{0, 1, 1}, {1, 0, 1}, {2, 3, 1}, {3, 2, 1}},
                                   {{1, 2, 1}, {2, 1, 1}}},
                                  4);
  try {
    fit_oracle(split, {1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDisconnectedGraph);
  }
}

TEST(FitOracle, BeatsPrimaryWhenAllInformative) {
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto truth = gen_truth(10, 5, 5, 0.1, 500 + seed);
    ComparisonDataset d;
    d.num_objects = 10;
    for (int s = 0; s <= 5; ++s) {
      d.attributes.push_back(gen_pairwise(truth, s, 1000, derive_seed(seed, 7, s)));
    }
    const double oracle = l2_error(fit_oracle(d, truth.informative).alpha_hat, truth.alpha_star);
    const double bt = l2_error(fit_bt(d.primary(), 10).worths, truth.alpha_star);
    wins += oracle < bt;
  }
  EXPECT_GE(wins, 16);
}

TEST(FitPl, MatchesPooledPlOnSameData) {
  const auto truth = gen_truth(6, 1, 1, 0.1, 3);
  RankingDataset d;
  d.num_objects = 6;
  d.attributes.push_back(gen_rankings(truth, 0, 300, 3, 1));
  d.attributes.push_back(gen_rankings(truth, 1, 300, 3, 2));
  const auto a = fit_pl(d.primary(), 6).worths;
  const auto b = fit_pooled(d, {0}).worths;
  EXPECT_LT((a - b).lpNorm<Eigen::Infinity>(), 1e-9);
  OracleOptions options;
  options.lambda_delta = 0.0;
  EXPECT_LT((fit_oracle(d, {1}, options).alpha_hat - a).lpNorm<Eigen::Infinity>(), 1e-6);
}

}  // namespace
}  // namespace transrank
