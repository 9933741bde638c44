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

// Data-driven selection of informative secondary attributes by held-out
// likelihood on the primary attribute, with an optional reversal pass for
// attributes whose preferences run opposite to the primary's.

#ifndef TRANSRANK_DISCOVERY_HPP_
#define TRANSRANK_DISCOVERY_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "transrank/core.hpp"
#include "transrank/error.hpp"
#include "transrank/likelihood.hpp"
#include "transrank/optimize.hpp"
#include "transrank/transfer.hpp"

namespace transrank {

struct DiscoveryConfig {
  double c_threshold = 1.0;
  int folds = 3;
  std::uint64_t seed = 0;
  bool enable_reversal = true;
  std::optional<double> lambda_delta;  // summed-likelihood scale
  double lambda_c = 1.0;
  OptimizerConfig optimizer;

  void validate() const {
    if (folds < 2) throw Error(ErrorCode::kInvalidArgument, "folds must be >= 2");
    if (!(c_threshold > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "c_threshold must be > 0");
    }
  }
};

struct DiscoverySelection {
  std::set<int> selected;
  std::set<int> reversed;  // admitted only after reversal
  double primary_score = 0.0;
  std::map<int, double> per_attribute_scores;
  std::map<int, double> reversed_scores;
  double sigma_hat = 0.0;
  double threshold_used = 0.0;
  std::vector<std::string> warnings;

  friend bool operator==(const DiscoverySelection&,
                         const DiscoverySelection&) = default;
};

// Seeded uniform shuffle of observation units dealt round-robin into
// `folds` parts; sizes differ by at most one.
template <class Attribute>
std::vector<Attribute> split_folds(const Attribute& data, int folds,
                                   std::uint64_t seed) {
  using Model = ModelFor_t<Attribute>;
  if (folds < 2) throw Error(ErrorCode::kInvalidArgument, "folds must be >= 2");
  auto units = Model::units(data);
  if (units.size() < static_cast<std::size_t>(folds)) {
    throw Error(ErrorCode::kTooFewObservations,
                "need at least " + std::to_string(folds) +
                    " observations to split, have " + std::to_string(units.size()));
  }
  std::mt19937_64 rng(seed);
  std::shuffle(units.begin(), units.end(), rng);
  std::vector<std::vector<typename Model::Unit>> parts(folds);
  for (std::size_t i = 0; i < units.size(); ++i) {
    parts[i % folds].push_back(std::move(units[i]));
  }
  std::vector<Attribute> out;
  for (auto& p : parts) {
    out.push_back(Model::from_units(data.attribute_id, std::move(p), data.label));
  }
  return out;
}

namespace detail {

template <class Model>
double held_out_score(const Vector& worths, const typename Model::Attribute& fold,
                      int num_objects) {
  const typename Model::Attribute* parts[] = {&fold};
  return Model::nll(worths, Model::collect(
                                std::span<const typename Model::Attribute* const>(parts),
                                num_objects));
}

}  // namespace detail

template <class Attribute>
DiscoverySelection discover(const BasicDataset<Attribute>& dataset,
                            const DiscoveryConfig& config = {}) {
  using Model = ModelFor_t<Attribute>;
  config.validate();
  const int m = dataset.num_objects;
  const Attribute& primary = dataset.primary();
  const auto folds = split_folds(primary, config.folds, config.seed);
  const double n0 = static_cast<double>(primary.total_count());
  const auto secondary = dataset.secondary_ids();

  // train[q] = primary minus fold q
  std::vector<Attribute> train;
  for (int q = 0; q < config.folds; ++q) {
    std::vector<typename Model::Unit> units;
    for (int i = 0; i < config.folds; ++i) {
      if (i == q) continue;
      auto u = Model::units(folds[i]);
      units.insert(units.end(), u.begin(), u.end());
    }
    train.push_back(Model::from_units(0, std::move(units), primary.label));
  }

  DiscoverySelection out;
  std::vector<double> primary_scores;
  for (int q = 0; q < config.folds; ++q) {
    const MleFit fit = fit_mle(train[q], m, config.optimizer);
    primary_scores.push_back(detail::held_out_score<Model>(fit.worths, folds[q], m));
  }
  double mean = 0.0;
  for (double s : primary_scores) mean += s;
  mean /= config.folds;
  double ss = 0.0;
  for (double s : primary_scores) ss += (s - mean) * (s - mean);
  out.primary_score = mean;
  out.sigma_hat = std::sqrt(ss / (config.folds - 1));
  out.threshold_used = config.c_threshold * std::max(out.sigma_hat, 0.01 * n0);

  auto score_attribute = [&](const Attribute& extra) {
    double total = 0.0;
    for (int q = 0; q < config.folds; ++q) {
      const Attribute* parts[] = {&train[q], &extra};
      try {
        const auto pooled = Model::collect(std::span<const Attribute* const>(parts), m);
        const MleFit fit = detail::fit_collected<Model>(pooled, config.optimizer, false);
        total += detail::held_out_score<Model>(fit.worths, folds[q], m);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kDisconnectedGraph) throw;
        out.warnings.push_back("attribute " + std::to_string(extra.attribute_id) +
                               " fold " + std::to_string(q + 1) + ": " + e.what());
        return std::numeric_limits<double>::infinity();
      }
    }
    return total / config.folds;
  };
  auto passes = [&](double score) {
    return std::isfinite(score) &&
           std::abs(score - out.primary_score) <= out.threshold_used;
  };

  for (int s : secondary) {
    const double score = score_attribute(dataset.attribute(s));
    out.per_attribute_scores[s] = score;
    if (passes(score)) out.selected.insert(s);
  }
  if (config.enable_reversal) {
    for (int s : secondary) {
      if (out.selected.count(s)) continue;
      const double score = score_attribute(Model::reverse(dataset.attribute(s)));
      out.reversed_scores[s] = score;
      if (passes(score)) {
        out.selected.insert(s);
        out.reversed.insert(s);
      }
    }
  }
  return out;
}

template <class Attribute>
struct DiscoveryFit {
  DiscoverySelection selection;
  TransferFit fit;
};

// Copy of `dataset` with the listed attributes' preferences reversed.
template <class Attribute>
BasicDataset<Attribute> with_reversed(const BasicDataset<Attribute>& dataset,
                                      const std::set<int>& reversed) {
  using Model = ModelFor_t<Attribute>;
  BasicDataset<Attribute> out = dataset;
  for (auto& a : out.attributes) {
    if (reversed.count(a.attribute_id)) a = Model::reverse(a);
  }
  return out;
}

template <class Attribute>
DiscoveryFit<Attribute> fit_discovery(const BasicDataset<Attribute>& dataset,
                                      const DiscoveryConfig& config = {}) {
  DiscoveryFit<Attribute> out;
  out.selection = discover(dataset, config);
  OracleOptions options;
  options.lambda_delta = config.lambda_delta;
  options.lambda_c = config.lambda_c;
  options.optimizer = config.optimizer;
  out.fit = fit_oracle(with_reversed(dataset, out.selection.reversed),
                       out.selection.selected, options);
  return out;
}

}  // namespace transrank

#endif  // TRANSRANK_DISCOVERY_HPP_
