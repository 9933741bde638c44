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

// Two-step transfer estimator for the primary attribute's worths.
//
//   transfer:  u     = argmin  nll(u; primary ∪ informative secondaries),  1'u = 0
//   debias:    delta = argmin  nll(u + delta; primary) + (lambda/2)||delta||²
//   estimate:  alpha = center(u + delta)
//
// Everything is templated on the attribute type, so the same code fits
// Bradley-Terry models to comparisons and Plackett-Luce models to rankings.

#ifndef TRANSRANK_TRANSFER_HPP_
#define TRANSRANK_TRANSFER_HPP_

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "transrank/core.hpp"
#include "transrank/error.hpp"
#include "transrank/likelihood.hpp"
#include "transrank/optimize.hpp"

namespace transrank {

struct MleFit {
  WorthVector worths;
  OptimResult optim;
  MleDiagnostics diagnostics;
  bool mle_existence_warning = false;
};

struct TransferFit {
  WorthVector u_hat;
  WorthVector delta_hat;
  WorthVector alpha_hat;
  double lambda_delta = 0.0;
  std::set<int> informative_set;
  OptimResult transfer_optim;
  OptimResult debias_optim;
  bool mle_existence_warning = false;
};

namespace detail {

template <class Model>
void require_connected(const typename Model::Data& data, bool force,
                       MleDiagnostics& diagnostics) {
  const ComparisonGraph graph = Model::graph(data);
  diagnostics = is_mle_safe(graph);
  if (!diagnostics.connected && !force) {
    throw Error(ErrorCode::kDisconnectedGraph,
                "disconnected comparison graph; components: " +
                    describe_components(connected_components(graph)));
  }
}

template <class Model>
MleFit fit_collected(const typename Model::Data& data,
                     const OptimizerConfig& config, bool force) {
  MleFit fit;
  require_connected<Model>(data, force, fit.diagnostics);
  const int m = Model::num_objects(data);
  fit.optim = minimize_sum_zero(OffsetObjective<Model>(data), Vector::Zero(m), config);
  fit.mle_existence_warning = !fit.diagnostics.ford_condition;
  fit.optim.mle_existence_warning = fit.mle_existence_warning;
  fit.worths = fit.optim.solution;
  return fit;
}

template <class Attribute>
std::vector<const Attribute*> select_attributes(
    const BasicDataset<Attribute>& dataset, std::span<const int> ids) {
  std::vector<const Attribute*> parts;
  std::set<int> seen;
  for (int id : ids) {
    if (!seen.insert(id).second) continue;
    parts.push_back(&dataset.attribute(id));
  }
  if (parts.empty()) {
    throw Error(ErrorCode::kNoComparisons, "no attributes selected");
  }
  return parts;
}

}  // namespace detail

// Unpenalized sum-zero MLE on one attribute. Throws on a disconnected graph
// unless `force`; flags a possible non-existent MLE when Ford's condition
// fails.
template <class Attribute>
MleFit fit_mle(const Attribute& data, int num_objects,
               const OptimizerConfig& config = {}, bool force = false) {
  using Model = ModelFor_t<Attribute>;
  const Attribute* parts[] = {&data};
  return detail::fit_collected<Model>(
      Model::collect(std::span<const Attribute* const>(parts), num_objects),
      config, force);
}

inline MleFit fit_bt(const AttributeData& data, int num_objects,
                     const OptimizerConfig& config = {}, bool force = false) {
  return fit_mle(data, num_objects, config, force);
}

inline MleFit fit_pl(const RankingAttribute& data, int num_objects,
                     const OptimizerConfig& config = {}, bool force = false) {
  return fit_mle(data, num_objects, config, force);
}

// MLE on the unweighted concatenation of the listed attributes.
template <class Attribute>
MleFit fit_pooled(const BasicDataset<Attribute>& dataset,
                  std::span<const int> attribute_ids,
                  const OptimizerConfig& config = {}, bool force = false) {
  using Model = ModelFor_t<Attribute>;
  const auto parts = detail::select_attributes(dataset, attribute_ids);
  return detail::fit_collected<Model>(
      Model::collect(std::span<const Attribute* const>(parts), dataset.num_objects),
      config, force);
}

template <class Attribute>
MleFit fit_pooled(const BasicDataset<Attribute>& dataset,
                  std::initializer_list<int> attribute_ids,
                  const OptimizerConfig& config = {}, bool force = false) {
  const std::vector<int> ids(attribute_ids);
  return fit_pooled(dataset, std::span<const int>(ids), config, force);
}

// Penalty level c * (1 / log kappa2) * sqrt(M p log M / n0), on the scale of
// a likelihood averaged over the n0 comparisons of each compared pair.
inline double default_lambda_delta(int num_objects, double p_hat, double n0,
                                   double kappa2_hat, double c = 1.0) {
  if (num_objects < 2 || !(p_hat > 0.0) || !(n0 > 0.0) || !(kappa2_hat > 1.0) ||
      !(c >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "default_lambda_delta: need M >= 2, p > 0, n0 > 0, kappa2 > 1, c >= 0");
  }
  const double m = num_objects;
  return c / std::log(kappa2_hat) * std::sqrt(m * p_hat * std::log(m) / n0);
}

// kappa2 estimate exp(max delta - min delta), floored at e so that
// log kappa2 >= 1.
inline double estimate_kappa2(const Vector& delta) {
  if (delta.size() == 0) return std::numbers::e;
  return std::max(std::numbers::e, std::exp(delta.maxCoeff() - delta.minCoeff()));
}

// The data-driven penalty on the observation-summed scale used by the
// fitting code. `pilot_delta` is an unpenalized estimate of the deviation
// (primary MLE minus the transfer estimate).
inline double summed_lambda_delta(const ComparisonGraph& primary_graph,
                                  const Vector& pilot_delta, double c = 1.0) {
  if (primary_graph.edges.empty()) {
    throw Error(ErrorCode::kNoComparisons, "no comparisons");
  }
  // The summed likelihood is n_pair times the per-pair averaged one.
  const double n_pair = static_cast<double>(primary_graph.total_count()) /
                        static_cast<double>(primary_graph.edges.size());
  return n_pair * default_lambda_delta(primary_graph.num_objects,
                                       primary_graph.p_hat, n_pair,
                                       estimate_kappa2(pilot_delta), c);
}

struct OracleOptions {
  // Penalty on the summed-likelihood scale; nullopt selects the data-driven
  // default (see summed_lambda_delta).
  std::optional<double> lambda_delta;
  double lambda_c = 1.0;
  OptimizerConfig optimizer;
};

// Oracle two-step fit with a known informative set.
template <class Attribute>
TransferFit fit_oracle(const BasicDataset<Attribute>& dataset,
                       const std::set<int>& informative_set,
                       const OracleOptions& options = {}) {
  using Model = ModelFor_t<Attribute>;
  if (options.lambda_delta && !(*options.lambda_delta >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda_delta must be non-negative");
  }
  for (int s : informative_set) {
    if (s == 0 || !dataset.has_attribute(s)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "informative set must list secondary attribute ids; got " +
                      std::to_string(s));
    }
  }
  const int m = dataset.num_objects;
  const Attribute* primary_parts[] = {&dataset.primary()};
  const auto primary = Model::collect(
      std::span<const Attribute* const>(primary_parts), m);
  MleDiagnostics primary_diag;
  detail::require_connected<Model>(primary, false, primary_diag);

  TransferFit fit;
  fit.informative_set = informative_set;

  std::vector<int> ids{0};
  ids.insert(ids.end(), informative_set.begin(), informative_set.end());
  const MleFit transfer = fit_pooled(dataset, std::span<const int>(ids),
                                     options.optimizer);
  fit.u_hat = transfer.worths;
  fit.transfer_optim = transfer.optim;

  if (options.lambda_delta) {
    fit.lambda_delta = *options.lambda_delta;
  } else {
    const auto pilot = minimize_sum_zero(
        OffsetObjective<Model>(primary, fit.u_hat, 0.0), Vector::Zero(m),
        options.optimizer);
    fit.lambda_delta = summed_lambda_delta(Model::graph(primary), pilot.solution,
                                           options.lambda_c);
  }

  fit.debias_optim = minimize_sum_zero(
      OffsetObjective<Model>(primary, fit.u_hat, fit.lambda_delta),
      Vector::Zero(m), options.optimizer);
  fit.delta_hat = fit.debias_optim.solution;
  fit.alpha_hat = center(fit.u_hat + fit.delta_hat);
  fit.mle_existence_warning = transfer.mle_existence_warning ||
                              (fit.lambda_delta == 0.0 && !primary_diag.ford_condition);
  return fit;
}

}  // namespace transrank

#endif  // TRANSRANK_TRANSFER_HPP_
