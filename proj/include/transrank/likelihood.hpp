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

// Negative log-likelihoods for the Bradley-Terry (pairwise) and
// Plackett-Luce (partial ranking) models, summed over raw observations.
//
// Summing rather than averaging per pair makes the Hessian equal to the
// total observed Fisher information, so standard errors read directly off
// its constrained inverse (see inference.hpp).

#ifndef TRANSRANK_LIKELIHOOD_HPP_
#define TRANSRANK_LIKELIHOOD_HPP_

#include <atomic>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "transrank/core.hpp"
#include "transrank/error.hpp"

namespace transrank {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Log-worths of the M objects. Identified representatives satisfy
// sum(values) == 0.
using WorthVector = Vector;

inline Vector center(const Vector& x) {
  if (x.size() == 0) return x;
  return x.array() - x.mean();
}

enum class PenaltyTarget { kNone, kSquaredL2 };

// (lambda / 2) * ||parameter||^2 when target is kSquaredL2.
struct PenaltySpec {
  double lambda = 0.0;
  PenaltyTarget target = PenaltyTarget::kNone;

  static PenaltySpec none() { return {}; }
  static PenaltySpec squared_l2(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "penalty lambda must be finite and non-negative");
    }
    return {lambda, PenaltyTarget::kSquaredL2};
  }
  double effective_lambda() const {
    return target == PenaltyTarget::kSquaredL2 ? lambda : 0.0;
  }
};

// Worth differences beyond this magnitude are clamped before
// exponentiation.
inline constexpr double kMaxWorthGap = 500.0;

// Number of clamping events since process start.
inline std::atomic<long long>& probability_clamp_count() {
  static std::atomic<long long> count{0};
  return count;
}

namespace detail {

inline double clamp_gap(double d) {
  if (d > kMaxWorthGap) {
    probability_clamp_count().fetch_add(1, std::memory_order_relaxed);
    return kMaxWorthGap;
  }
  if (d < -kMaxWorthGap) {
    probability_clamp_count().fetch_add(1, std::memory_order_relaxed);
    return -kMaxWorthGap;
  }
  return d;
}

// log(1 + exp(x)) without overflow.
inline double softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline void check_worths(const Vector& worths, int num_objects) {
  if (worths.size() != num_objects) {
    throw Error(ErrorCode::kDimensionMismatch,
                "worth vector has length " + std::to_string(worths.size()) +
                    ", expected " + std::to_string(num_objects));
  }
  if (!worths.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "worth vector has non-finite entries");
  }
}

}  // namespace detail

// P(j beats l) = exp(a_j) / (exp(a_j) + exp(a_l)).
inline double win_prob(double alpha_j, double alpha_l) {
  if (!std::isfinite(alpha_j) || !std::isfinite(alpha_l)) {
    throw Error(ErrorCode::kNonFinite, "win_prob: non-finite worth");
  }
  return detail::logistic(detail::clamp_gap(alpha_j - alpha_l));
}

// ---------------------------------------------------------------------------
// Bradley-Terry

inline double bt_nll(const WorthVector& worths, const ComparisonGraph& graph) {
  detail::check_worths(worths, graph.num_objects);
  double total = 0.0;
  for (const auto& e : graph.edges) {
    const double d = worths[e.j] - worths[e.l];
    // -log P(j wins) = softplus(-d); -log P(l wins) = softplus(d)
    total += static_cast<double>(e.wins_j) * detail::softplus(-d) +
             static_cast<double>(e.wins_l) * detail::softplus(d);
  }
  return total;
}

inline Vector bt_grad(const WorthVector& worths, const ComparisonGraph& graph) {
  detail::check_worths(worths, graph.num_objects);
  Vector g = Vector::Zero(graph.num_objects);
  for (const auto& e : graph.edges) {
    const double p = detail::logistic(detail::clamp_gap(worths[e.j] - worths[e.l]));
    const double r = static_cast<double>(e.total()) * p - static_cast<double>(e.wins_j);
    g[e.j] += r;
    g[e.l] -= r;
  }
  return g;
}

inline Matrix bt_hessian(const WorthVector& worths, const ComparisonGraph& graph) {
  detail::check_worths(worths, graph.num_objects);
  Matrix h = Matrix::Zero(graph.num_objects, graph.num_objects);
  for (const auto& e : graph.edges) {
    const double p = detail::logistic(detail::clamp_gap(worths[e.j] - worths[e.l]));
    const double w = static_cast<double>(e.total()) * p * (1.0 - p);
    h(e.j, e.j) += w;
    h(e.l, e.l) += w;
    h(e.j, e.l) -= w;
    h(e.l, e.j) -= w;
  }
  return h;
}

// Debias-step objective: bt_nll(u_fixed + delta) + penalty(delta).
inline double bt_nll_offset_delta(const WorthVector& delta,
                                  const WorthVector& u_fixed,
                                  const ComparisonGraph& graph,
                                  const PenaltySpec& penalty) {
  detail::check_worths(delta, graph.num_objects);
  const double lambda = penalty.effective_lambda();
  return bt_nll(u_fixed + delta, graph) + 0.5 * lambda * delta.squaredNorm();
}

inline Vector bt_grad_offset_delta(const WorthVector& delta,
                                   const WorthVector& u_fixed,
                                   const ComparisonGraph& graph,
                                   const PenaltySpec& penalty) {
  detail::check_worths(delta, graph.num_objects);
  return bt_grad(u_fixed + delta, graph) + penalty.effective_lambda() * delta;
}

inline Matrix bt_hessian_offset_delta(const WorthVector& delta,
                                      const WorthVector& u_fixed,
                                      const ComparisonGraph& graph,
                                      const PenaltySpec& penalty) {
  detail::check_worths(delta, graph.num_objects);
  Matrix h = bt_hessian(u_fixed + delta, graph);
  h.diagonal().array() += penalty.effective_lambda();
  return h;
}

// ---------------------------------------------------------------------------
// Plackett-Luce

namespace detail {

inline void check_ranking(const PartialRanking& r, int num_objects) {
  if (r.ordered.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "ranking must contain at least two objects");
  }
  for (int o : r.ordered) check_index(o, num_objects);
}

// suffix[k] = log sum_{i >= k} exp(worths[ordered[i]])
inline std::vector<double> suffix_log_sum_exp(const Vector& worths,
                                              const std::vector<int>& ordered) {
  std::vector<double> suffix(ordered.size());
  double running = worths[ordered.back()];
  suffix.back() = running;
  for (std::size_t k = ordered.size() - 1; k-- > 0;) {
    const double a = worths[ordered[k]];
    const double hi = std::max(a, running);
    running = hi + std::log(std::exp(a - hi) + std::exp(running - hi));
    suffix[k] = running;
  }
  return suffix;
}

}  // namespace detail

inline double pl_nll(const WorthVector& worths,
                     std::span<const PartialRanking> rankings) {
  const int m = static_cast<int>(worths.size());
  if (!worths.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "worth vector has non-finite entries");
  }
  double total = 0.0;
  for (const auto& r : rankings) {
    detail::check_ranking(r, m);
    const auto suffix = detail::suffix_log_sum_exp(worths, r.ordered);
    for (std::size_t k = 0; k + 1 < r.ordered.size(); ++k) {
      total += suffix[k] - worths[r.ordered[k]];
    }
  }
  return total;
}

inline Vector pl_grad(const WorthVector& worths,
                      std::span<const PartialRanking> rankings) {
  const int m = static_cast<int>(worths.size());
  if (!worths.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "worth vector has non-finite entries");
  }
  Vector g = Vector::Zero(m);
  for (const auto& r : rankings) {
    detail::check_ranking(r, m);
    const auto suffix = detail::suffix_log_sum_exp(worths, r.ordered);
    for (std::size_t k = 0; k + 1 < r.ordered.size(); ++k) {
      g[r.ordered[k]] -= 1.0;
      for (std::size_t i = k; i < r.ordered.size(); ++i) {
        g[r.ordered[i]] += std::exp(worths[r.ordered[i]] - suffix[k]);
      }
    }
  }
  return g;
}

inline Matrix pl_hessian(const WorthVector& worths,
                         std::span<const PartialRanking> rankings) {
  const int m = static_cast<int>(worths.size());
  if (!worths.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "worth vector has non-finite entries");
  }
  Matrix h = Matrix::Zero(m, m);
  std::vector<double> p;
  for (const auto& r : rankings) {
    detail::check_ranking(r, m);
    const auto& o = r.ordered;
    const auto suffix = detail::suffix_log_sum_exp(worths, o);
    for (std::size_t k = 0; k + 1 < o.size(); ++k) {
      // Stage k is a softmax over o[k..]; its Hessian is diag(p) - p p^T.
      p.assign(o.size() - k, 0.0);
      for (std::size_t i = k; i < o.size(); ++i) {
        p[i - k] = std::exp(worths[o[i]] - suffix[k]);
      }
      for (std::size_t a = k; a < o.size(); ++a) {
        h(o[a], o[a]) += p[a - k];
        for (std::size_t b = k; b < o.size(); ++b) {
          h(o[a], o[b]) -= p[a - k] * p[b - k];
        }
      }
    }
  }
  return h;
}

// ---------------------------------------------------------------------------
// Model traits. Fitting code is written once against these and works for
// both pairwise and ranking data.

struct BradleyTerryModel {
  using Attribute = AttributeData;
  using Data = ComparisonGraph;
  // Smallest exchangeable observation used for fold splitting.
  using Unit = Comparison;

  static constexpr const char* kName = "bradley_terry";

  static Data collect(std::span<const Attribute* const> parts, int num_objects) {
    return build_graph(parts, num_objects);
  }
  static double nll(const Vector& worths, const Data& data) {
    return bt_nll(worths, data);
  }
  static Vector gradient(const Vector& worths, const Data& data) {
    return bt_grad(worths, data);
  }
  static Matrix hessian(const Vector& worths, const Data& data) {
    return bt_hessian(worths, data);
  }
  static ComparisonGraph graph(const Data& data) { return data; }
  static int num_objects(const Data& data) { return data.num_objects; }

  static std::vector<Unit> units(const Attribute& a) {
    std::vector<Unit> out;
    for (const auto& c : a.comparisons) {
      for (std::int64_t k = 0; k < c.count; ++k) out.push_back({c.winner, c.loser, 1});
    }
    return out;
  }
  static Attribute from_units(int attribute_id, std::vector<Unit> units,
                              const std::string& label) {
    return {attribute_id, std::move(units), label};
  }
  static Attribute reverse(const Attribute& a) { return reverse_preferences(a); }
};

struct PlackettLuceModel {
  using Attribute = RankingAttribute;
  struct Data {
    int num_objects = 0;
    std::vector<PartialRanking> rankings;
  };
  using Unit = PartialRanking;

  static constexpr const char* kName = "plackett_luce";

  static Data collect(std::span<const Attribute* const> parts, int num_objects) {
    Data out;
    out.num_objects = num_objects;
    for (const Attribute* part : parts) {
      for (const auto& r : part->rankings) {
        detail::check_ranking(r, num_objects);
        out.rankings.push_back(r);
      }
    }
    if (out.rankings.empty()) {
      throw Error(ErrorCode::kNoComparisons, "no comparisons");
    }
    return out;
  }
  static double nll(const Vector& worths, const Data& data) {
    detail::check_worths(worths, data.num_objects);
    return pl_nll(worths, data.rankings);
  }
  static Vector gradient(const Vector& worths, const Data& data) {
    detail::check_worths(worths, data.num_objects);
    return pl_grad(worths, data.rankings);
  }
  static Matrix hessian(const Vector& worths, const Data& data) {
    detail::check_worths(worths, data.num_objects);
    return pl_hessian(worths, data.rankings);
  }
  // Connectivity and MLE existence for rankings are those of the broken
  // pairwise graph.
  static ComparisonGraph graph(const Data& data) {
    return build_graph(full_breaking(std::span<const PartialRanking>(data.rankings)),
                       data.num_objects);
  }
  static int num_objects(const Data& data) { return data.num_objects; }

  static std::vector<Unit> units(const Attribute& a) { return a.rankings; }
  static Attribute from_units(int attribute_id, std::vector<Unit> units,
                              const std::string& label) {
    return {attribute_id, std::move(units), label};
  }
  static Attribute reverse(const Attribute& a) { return reverse_preferences(a); }
};

template <class Attribute>
struct ModelFor;
template <>
struct ModelFor<AttributeData> {
  using type = BradleyTerryModel;
};
template <>
struct ModelFor<RankingAttribute> {
  using type = PlackettLuceModel;
};
template <class Attribute>
using ModelFor_t = typename ModelFor<Attribute>::type;

// f(x) = nll(offset + x) + (lambda / 2) ||x||^2. With a zero offset and
// lambda = 0 this is the plain MLE objective.
template <class Model>
class OffsetObjective {
 public:
  OffsetObjective(const typename Model::Data& data, Vector offset, double lambda)
      : data_(&data), offset_(std::move(offset)), lambda_(lambda) {}

  explicit OffsetObjective(const typename Model::Data& data)
      : OffsetObjective(data, Vector::Zero(Model::num_objects(data)), 0.0) {}

  double value(const Vector& x) const {
    return Model::nll(offset_ + x, *data_) + 0.5 * lambda_ * x.squaredNorm();
  }
  Vector gradient(const Vector& x) const {
    return Model::gradient(offset_ + x, *data_) + lambda_ * x;
  }
  Matrix hessian(const Vector& x) const {
    Matrix h = Model::hessian(offset_ + x, *data_);
    h.diagonal().array() += lambda_;
    return h;
  }

 private:
  const typename Model::Data* data_;
  Vector offset_;
  double lambda_;
};

}  // namespace transrank

#endif  // TRANSRANK_LIKELIHOOD_HPP_
