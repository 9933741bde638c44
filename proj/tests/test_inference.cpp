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

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "transrank/inference.hpp"
#include "transrank/simulate.hpp"
#include "transrank/transfer.hpp"

namespace transrank {
namespace {

ComparisonGraph graph_of(const std::vector<Comparison>& cs, int m) {
  return build_graph(std::span<const Comparison>(cs), m);
}

TEST(Theta11, TwoObjectsAnalytic) {
  for (int n : {4, 10, 1000}) {
    const auto g = graph_of({{0, 1, n / 2}, {1, 0, n - n / 2}}, 2);
    const Matrix theta = bordered_theta11(Vector::Zero(2), g);
    EXPECT_NEAR(theta(0, 0), 1.0 / n, 1e-12);
    EXPECT_NEAR(theta(1, 1), 1.0 / n, 1e-12);
    EXPECT_NEAR(theta(0, 1), -1.0 / n, 1e-12);
    EXPECT_NEAR(contrast_variance(theta, 0, 1), 4.0 / n, 1e-12);
    const auto report = intervals(Vector::Zero(2), theta, 0.95);
    EXPECT_NEAR(report.std_errors[0], 1.0 / std::sqrt(n), 1e-12);
  }
}

TEST(Theta11, AlgebraicIdentities) {
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    const int m = 3 + rep % 6;
    const auto g = graph_of(testing::random_connected_data(m, rng), m);
    const Vector a = testing::random_worths(m, rng, 1.0);
    const Matrix h = bt_hessian(a, g);
    const Matrix theta = bordered_theta11(h);
    EXPECT_LT((theta * Vector::Ones(m)).lpNorm<Eigen::Infinity>(), 1e-8);
    EXPECT_LT((theta - theta.transpose()).lpNorm<Eigen::Infinity>(), 1e-10);
    EXPECT_LT((theta * h * theta - theta).lpNorm<Eigen::Infinity>(), 1e-8);
    EXPECT_GT(theta.diagonal().minCoeff(), 0.0);

    Eigen::SelfAdjointEigenSolver<Matrix> border(bordered_matrix(h));
    const Vector ev = border.eigenvalues();
    const double root = std::sqrt(static_cast<double>(m));
    EXPECT_LT((ev.array() - root).abs().minCoeff(), 1e-8);
    EXPECT_LT((ev.array() + root).abs().minCoeff(), 1e-8);

    // Spectrum of Theta11 = {0} U {1 / nonzero Hessian eigenvalues}.
    Eigen::SelfAdjointEigenSolver<Matrix> hs(h), ts(theta);
    std::vector<double> want{0.0};
    for (int i = 0; i < m; ++i) {
      if (hs.eigenvalues()[i] > 1e-9) want.push_back(1.0 / hs.eigenvalues()[i]);
    }
    std::sort(want.begin(), want.end());
    ASSERT_EQ(static_cast<int>(want.size()), m);
    for (int i = 0; i < m; ++i) {
      EXPECT_NEAR(ts.eigenvalues()[i], want[i], 1e-8 * (1.0 + want[i]));
    }
  }
}

TEST(Theta11, RankDeficient) {
  const auto g = graph_of({{0, 1, 1}, {1, 0, 1}, {2, 3, 1}, {3, 2, 1}}, 4);
  try {
    bordered_theta11(Vector::Zero(4), g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRankDeficient);
    EXPECT_STREQ(e.what(), "Fisher information rank-deficient (check graph connectivity)");
  }
}

TEST(Debias, FixedPointAtMle) {
  std::mt19937_64 rng(2);
  const auto cs = testing::random_complete_data(6, rng);
  const Vector mle = fit_bt({0, cs, ""}, 6).worths;
  EXPECT_LT((debias(mle, graph_of(cs, 6)) - mle).lpNorm<Eigen::Infinity>(), 1e-8);
}

TEST(Debias, QuadraticConvergence) {
  std::mt19937_64 rng(3);
  const auto cs = testing::random_complete_data(5, rng, 40);
  const auto g = graph_of(cs, 5);
  OptimizerConfig tight;
  tight.grad_tol = 1e-11;
  tight.newton = true;
  const Vector mle = fit_bt({0, cs, ""}, 5, tight).worths;
  Vector dir = center(testing::random_worths(5, rng));
  dir /= dir.norm();
  std::vector<double> logs_eps, logs_err;
  for (double eps : {1e-1, 3e-2, 1e-2, 3e-3}) {
    const double err = (debias(mle + eps * dir, g) - mle).norm();
    logs_eps.push_back(std::log(eps));
    logs_err.push_back(std::log(err));
  }
  // Least-squares slope of log error on log eps.
  const double n = logs_eps.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < logs_eps.size(); ++i) {
    sx += logs_eps[i];
    sy += logs_err[i];
    sxx += logs_eps[i] * logs_eps[i];
    sxy += logs_eps[i] * logs_err[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  EXPECT_NEAR(slope, 2.0, 0.25);
}

TEST(Debias, MovesTowardPrimaryOptimum) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto truth = gen_truth(8, 2, 2, 0.1, seed);
    ComparisonDataset d;
    d.num_objects = 8;
    for (int s = 0; s <= 2; ++s) d.attributes.push_back(gen_pairwise(truth, s, 600, seed * 10 + s));
    OracleOptions options;
    options.lambda_delta = 1e6;
    const Vector a = fit_oracle(d, {1, 2}, options).alpha_hat;
    const auto g = build_graph(d.primary(), 8);
    EXPECT_LT(bt_grad(debias(a, g), g).norm(), bt_grad(a, g).norm());
  }
}

TEST(Intervals, Values) {
  Matrix theta = Matrix::Zero(1, 1);
  theta(0, 0) = 0.01;
  const auto r = intervals(Vector::Zero(1), theta, 0.95);
  EXPECT_NEAR(r.intervals[0].first, -0.196, 1e-3);
  EXPECT_NEAR(r.intervals[0].second, 0.196, 1e-3);
  EXPECT_NEAR(r.intervals[0].second, 0.1 * 1.959963984540054, 1e-10);
  EXPECT_THROW(intervals(Vector::Zero(1), theta, 1.0), Error);
}

TEST(NormalQuantile, ReferenceValues) {
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-9);
  EXPECT_NEAR(normal_quantile(0.995), 2.5758293035489004, 1e-9);
  EXPECT_NEAR(normal_quantile(0.001), -3.090232306167813, 1e-9);
  EXPECT_NEAR(normal_quantile(0.5), 0.0, 1e-12);
  EXPECT_NEAR(normal_quantile(1e-10), -6.361340902404056, 1e-8);
  EXPECT_THROW(normal_quantile(0.0), Error);
}

TEST(ContrastVariance, Properties) {
  std::mt19937_64 rng(4);
  const auto g = graph_of(testing::random_complete_data(5, rng), 5);
  const Matrix theta = bordered_theta11(Vector::Zero(5), g);
  for (int j = 0; j < 5; ++j) {
    for (int l = 0; l < 5; ++l) {
      if (j == l) {
        EXPECT_THROW(contrast_variance(theta, j, l), Error);
        continue;
      }
      EXPECT_GE(contrast_variance(theta, j, l), 0.0);
      EXPECT_DOUBLE_EQ(contrast_variance(theta, j, l), contrast_variance(theta, l, j));
    }
  }
}

TEST(Kappa3, Values) {
  EXPECT_DOUBLE_EQ(kappa3_hat(Vector::Zero(4)), 1.0);
  Vector a(5);
  a << 0.5, 0.25, 0.0, -0.25, -0.5;
  EXPECT_NEAR(kappa3_hat(a), std::exp(1.0), 1e-15);
  EXPECT_EQ(kappa3_hat((a.array() + 2.0).matrix()), kappa3_hat(a));
}

TEST(Infer, ReportInvariants) {
  std::mt19937_64 rng(5);
  const auto cs = testing::random_complete_data(6, rng, 30);
  const auto g = graph_of(cs, 6);
  const Vector mle = fit_bt({0, cs, ""}, 6).worths;
  const auto r = infer(mle, g, 0.9);
  EXPECT_LT((r.theta11 * Vector::Ones(6)).lpNorm<Eigen::Infinity>(), 1e-8);
  for (int j = 0; j < 6; ++j) {
    EXPECT_NEAR(r.std_errors[j], std::sqrt(r.theta11(j, j)), 1e-15);
    EXPECT_LE(r.intervals[j].first, r.alpha_db[j]);
    EXPECT_GE(r.intervals[j].second, r.alpha_db[j]);
  }
  EXPECT_GE(r.kappa3_hat, 1.0);
}

}  // namespace
}  // namespace transrank
