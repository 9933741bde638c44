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

// Debiased estimates and asymptotic standard errors.
//
// The constrained inverse Fisher information Theta11 is the top-left M x M
// block of the inverse bordered Hessian
//
//     [ H    1 ]^-1   [ Theta11   1/M ]
//     [ 1'   0 ]    = [ 1'/M      0   ]
//
// H is the observation-summed Hessian, so se_j = sqrt(Theta11_jj) with no
// further sample-size scaling, also under unequal per-pair counts.

#ifndef TRANSRANK_INFERENCE_HPP_
#define TRANSRANK_INFERENCE_HPP_

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "transrank/core.hpp"
#include "transrank/error.hpp"
#include "transrank/likelihood.hpp"

namespace transrank {

struct InferenceReport {
  WorthVector alpha_db;
  Matrix theta11;
  Vector std_errors;
  double confidence_level = 0.95;
  std::vector<std::pair<double, double>> intervals;
  double kappa3_hat = 1.0;
};

inline Matrix bordered_matrix(const Matrix& hessian) {
  const auto m = hessian.rows();
  Matrix b = Matrix::Zero(m + 1, m + 1);
  b.topLeftCorner(m, m) = hessian;
  b.topRightCorner(m, 1).setOnes();
  b.bottomLeftCorner(1, m).setOnes();
  return b;
}

inline Matrix bordered_theta11(const Matrix& hessian) {
  if (hessian.rows() != hessian.cols() || hessian.rows() < 1) {
    throw Error(ErrorCode::kDimensionMismatch, "Hessian must be square");
  }
  if (!hessian.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "Hessian has non-finite entries");
  }
  const auto m = hessian.rows();
  const Matrix b = bordered_matrix(hessian);
  const Matrix eye = Matrix::Identity(m + 1, m + 1);
  Eigen::PartialPivLU<Matrix> lu(b);
  const Matrix inverse = lu.solve(eye);
  // The rcond estimate alone misses some exactly singular inputs; an
  // inverse that does not reproduce the identity is rejected as well.
  if (!(lu.rcond() > 1e-13) || !inverse.allFinite() ||
      !((b * inverse - eye).lpNorm<Eigen::Infinity>() <= 1e-6)) {
    throw Error(ErrorCode::kRankDeficient,
                "Fisher information rank-deficient (check graph connectivity)");
  }
  const Matrix theta = inverse.topLeftCorner(m, m);
  return 0.5 * (theta + theta.transpose());
}

inline Matrix bordered_theta11(const WorthVector& alpha,
                               const ComparisonGraph& graph) {
  return bordered_theta11(bt_hessian(alpha, graph));
}

// One Newton step from alpha_hat on the primary likelihood:
// alpha_db = alpha_hat - Theta11 * grad L(alpha_hat).
template <class Model>
WorthVector debias_with(const WorthVector& alpha_hat,
                        const typename Model::Data& data) {
  const Matrix theta = bordered_theta11(Model::hessian(alpha_hat, data));
  return center(alpha_hat - theta * Model::gradient(alpha_hat, data));
}

inline WorthVector debias(const WorthVector& alpha_hat,
                          const ComparisonGraph& graph) {
  return debias_with<BradleyTerryModel>(alpha_hat, graph);
}

// Standard normal quantile. Acklam's rational approximation followed by one
// Halley refinement against erfc; absolute error well below 1e-9.
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "quantile level must lie in (0, 1)");
  }
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLow = 0.02425;
  double x;
  if (p < kLow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - kLow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * 3.14159265358979323846) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

inline double kappa3_hat(const WorthVector& alpha) {
  if (alpha.size() == 0) return 1.0;
  return std::exp(alpha.maxCoeff() - alpha.minCoeff());
}

// (e_j - e_l)' Theta11 (e_j - e_l): variance of an estimated worth gap.
inline double contrast_variance(const Matrix& theta11, int j, int l) {
  const int m = static_cast<int>(theta11.rows());
  detail::check_index(j, m);
  detail::check_index(l, m);
  if (j == l) {
    throw Error(ErrorCode::kInvalidArgument, "contrast needs two distinct objects");
  }
  const double v = theta11(j, j) + theta11(l, l) - theta11(j, l) - theta11(l, j);
  return std::max(v, 0.0);
}

// Normal-approximation intervals alpha_db_j ± z * sqrt(Theta11_jj).
inline InferenceReport intervals(const WorthVector& alpha_db, const Matrix& theta11,
                                 double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "confidence level must lie in (0, 1)");
  }
  if (theta11.rows() != alpha_db.size() || theta11.cols() != alpha_db.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "Theta11 does not match worths");
  }
  InferenceReport report;
  report.alpha_db = alpha_db;
  report.theta11 = theta11;
  report.confidence_level = level;
  report.kappa3_hat = kappa3_hat(alpha_db);
  const double z = normal_quantile(0.5 * (1.0 + level));
  report.std_errors = theta11.diagonal().cwiseMax(0.0).cwiseSqrt();
  for (Eigen::Index j = 0; j < alpha_db.size(); ++j) {
    const double half = z * report.std_errors[j];
    report.intervals.emplace_back(alpha_db[j] - half, alpha_db[j] + half);
  }
  return report;
}

// Debias alpha_hat on the given (primary) data and attach intervals. Theta11
// is evaluated at alpha_hat.
template <class Model>
InferenceReport infer_with(const WorthVector& alpha_hat,
                           const typename Model::Data& data, double level) {
  const Matrix h = Model::hessian(alpha_hat, data);
  const Matrix theta = bordered_theta11(h);
  const WorthVector alpha_db =
      center(alpha_hat - theta * Model::gradient(alpha_hat, data));
  return intervals(alpha_db, theta, level);
}

inline InferenceReport infer(const WorthVector& alpha_hat,
                             const ComparisonGraph& graph, double level = 0.95) {
  return infer_with<BradleyTerryModel>(alpha_hat, graph, level);
}

}  // namespace transrank

#endif  // TRANSRANK_INFERENCE_HPP_
