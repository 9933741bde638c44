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

// Monte-Carlo benchmark harness: ground-truth worths with informative and
// non-informative secondary attributes, seeded data generation, and the four
// competing estimators (oracle transfer, discovery transfer, primary-only,
// pooled) scored by worth-recovery error.

#ifndef TRANSRANK_SIMULATE_HPP_
#define TRANSRANK_SIMULATE_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "transrank/core.hpp"
#include "transrank/discovery.hpp"
#include "transrank/error.hpp"
#include "transrank/likelihood.hpp"
#include "transrank/optimize.hpp"
#include "transrank/transfer.hpp"

namespace transrank {

enum class SimMode { kPairwise, kRanking };
enum class Method { kOracle, kDiscovery, kPrimary, kPooled };
// kRms is ||.||_2 / sqrt(M), a per-object error scale; kL2 is the raw
// Euclidean norm.
enum class ErrorMetric { kRms, kL2 };

inline std::string method_name(Method method, SimMode mode) {
  const bool pl = mode == SimMode::kRanking;
  switch (method) {
    case Method::kOracle: return pl ? "oracle_pl" : "oracle";
    case Method::kDiscovery: return pl ? "discovery_pl" : "discovery";
    case Method::kPrimary: return pl ? "pl" : "bt";
    case Method::kPooled: return pl ? "ppl" : "pbt";
  }
  return "unknown";
}

inline Method parse_method(const std::string& name) {
  if (name == "oracle" || name == "oracle_pl") return Method::kOracle;
  if (name == "discovery" || name == "discovery_pl") return Method::kDiscovery;
  if (name == "bt" || name == "pl" || name == "primary") return Method::kPrimary;
  if (name == "pbt" || name == "ppl" || name == "pooled") return Method::kPooled;
  throw Error(ErrorCode::kInvalidArgument, "unknown method '" + name + "'");
}

struct SimConfig {
  int num_objects = 10;                 // M
  int num_secondary = 5;                // S
  std::vector<int> informative_counts;  // |informative set| values; empty = 0..S
  double h = 0.1;
  int n_per_attribute = 1000;  // N_s
  int reps = 50;
  std::uint64_t seed = 1;
  SimMode mode = SimMode::kPairwise;
  int ranking_size = 3;  // m, ranking mode only
  std::vector<Method> methods{Method::kOracle, Method::kDiscovery,
                              Method::kPrimary, Method::kPooled};
  ErrorMetric metric = ErrorMetric::kRms;
  double c_threshold = 1.0;
  std::optional<double> lambda_delta;
  int threads = 0;  // 0 = hardware concurrency, capped by TRANSRANK_THREADS
  OptimizerConfig optimizer;

  std::vector<int> counts() const {
    if (!informative_counts.empty()) return informative_counts;
    std::vector<int> all;
    for (int k = 0; k <= num_secondary; ++k) all.push_back(k);
    return all;
  }

  void validate() const {
    if (num_objects < 2) throw Error(ErrorCode::kInvalidArgument, "M must be >= 2");
    if (num_secondary < 0) throw Error(ErrorCode::kInvalidArgument, "S must be >= 0");
    for (int k : counts()) {
      if (k < 0 || k > num_secondary) {
        throw Error(ErrorCode::kInvalidArgument,
                    "informative_count must lie in [0, S]");
      }
    }
    if (!(h > 0.0)) throw Error(ErrorCode::kInvalidArgument, "h must be > 0");
    if (n_per_attribute < 1) throw Error(ErrorCode::kInvalidArgument, "N_s must be >= 1");
    if (reps < 1) throw Error(ErrorCode::kInvalidArgument, "reps must be >= 1");
    if (mode == SimMode::kRanking &&
        (ranking_size < 2 || ranking_size > num_objects)) {
      throw Error(ErrorCode::kInvalidArgument, "ranking size must lie in [2, M]");
    }
    if (methods.empty()) throw Error(ErrorCode::kInvalidArgument, "no methods requested");
    optimizer.validate();
  }
};

struct SimTruth {
  WorthVector alpha_star_raw;  // as drawn
  WorthVector alpha_star;      // centered copy
  std::vector<WorthVector> u;      // u[s-1] for s = 1..S
  std::vector<WorthVector> delta;  // delta[s-1]; u = alpha_star_raw - delta
  std::set<int> informative;
  double kappa1 = 1.0;
  double kappa2 = 1.0;
  double kappa3 = 1.0;

  const WorthVector& worths(int attribute) const {
    return attribute == 0 ? alpha_star_raw : u.at(attribute - 1);
  }
};

struct BenchmarkRow {
  int num_objects = 0;
  int num_secondary = 0;
  double h = 0.0;
  int n_per_attribute = 0;
  int informative_count = -1;  // -1: averaged over all swept counts
  std::string method;
  double mean_l2 = 0.0;
  double se_l2 = 0.0;
  int reps = 0;  // successful replications behind the mean
  int failures = 0;
};

// Error of one method in one replication; NaN when the fit failed.
struct ReplicationRecord {
  int informative_count = 0;
  int rep = 0;
  std::map<std::string, double> errors;
};

struct BenchmarkResult {
  std::vector<BenchmarkRow> rows;
  std::vector<ReplicationRecord> records;
};

// SplitMix64 finalizer; used to derive independent child seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t a,
                                 std::uint64_t b = 0) {
  return mix_seed(mix_seed(mix_seed(parent) ^ a) ^ (b * 0x632be59bd9b4e019ULL));
}

// Half-width of the informative deviation distribution for a given h.
inline double deviation_bound(double h, int num_objects) {
  if (h == 0.1) return 0.1;
  if (h == 1.0) return 0.45;
  if (h == 3.0) return 0.85;
  return 1.5 * std::sqrt(h / num_objects);
}

inline double l2_error(const WorthVector& estimate, const WorthVector& truth) {
  if (estimate.size() != truth.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "l2_error: length mismatch");
  }
  return (center(estimate) - center(truth)).norm();
}

inline double rms_error(const WorthVector& estimate, const WorthVector& truth) {
  return l2_error(estimate, truth) / std::sqrt(static_cast<double>(truth.size()));
}

inline double score_error(ErrorMetric metric, const WorthVector& estimate,
                          const WorthVector& truth) {
  return metric == ErrorMetric::kRms ? rms_error(estimate, truth)
                                     : l2_error(estimate, truth);
}

// alpha* ~ U(-2,2)^M. Attributes 1..informative_count draw delta from
// U(-a_h, a_h)^M, resampled until ||delta||^2 <= h; the rest draw delta from
// U(-2,2)^M. u = alpha* - delta.
inline SimTruth gen_truth(int num_objects, int num_secondary, int informative_count,
                          double h, std::uint64_t seed) {
  if (!(h > 0.0)) throw Error(ErrorCode::kInvalidArgument, "h must be > 0");
  if (informative_count < 0 || informative_count > num_secondary) {
    throw Error(ErrorCode::kInvalidArgument, "informative_count must lie in [0, S]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> wide(-2.0, 2.0);
  const double a_h = deviation_bound(h, num_objects);
  std::uniform_real_distribution<double> narrow(-a_h, a_h);

  SimTruth truth;
  truth.alpha_star_raw.resize(num_objects);
  for (auto& v : truth.alpha_star_raw) v = wide(rng);
  truth.alpha_star = center(truth.alpha_star_raw);
  truth.kappa3 = std::exp(truth.alpha_star.maxCoeff() - truth.alpha_star.minCoeff());

  constexpr long kMaxDraws = 1000000;
  for (int s = 1; s <= num_secondary; ++s) {
    Vector delta(num_objects);
    if (s <= informative_count) {
      truth.informative.insert(s);
      long draws = 0;
      do {
        if (++draws > kMaxDraws) {
          throw Error(ErrorCode::kRejectionLimit,
                      "rejection sampling of the deviation exceeded 1e6 draws");
        }
        for (auto& v : delta) v = narrow(rng);
      } while (delta.squaredNorm() > h);
      truth.kappa2 = std::max(truth.kappa2, std::exp(delta.maxCoeff() - delta.minCoeff()));
    } else {
      for (auto& v : delta) v = wide(rng);
    }
    Vector u = truth.alpha_star_raw - delta;
    if (s <= informative_count) {
      truth.kappa1 = std::max(truth.kappa1, std::exp(u.maxCoeff() - u.minCoeff()));
    }
    truth.delta.push_back(std::move(delta));
    truth.u.push_back(std::move(u));
  }
  return truth;
}

namespace detail {

inline std::pair<int, int> pair_from_index(long k, int m) {
  int j = 0;
  while (k >= m - 1 - j) {
    k -= m - 1 - j;
    ++j;
  }
  return {j, j + 1 + static_cast<int>(k)};
}

}  // namespace detail

// N_s comparisons: a uniformly drawn unordered pair, winner drawn from the
// Bradley-Terry probability at `worths`. Identical outcomes are merged into
// counts.
inline AttributeData sample_pairwise(const WorthVector& worths, int attribute_id,
                                     int n, std::mt19937_64& rng) {
  const int m = static_cast<int>(worths.size());
  if (m < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two objects");
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "N_s must be >= 1");
  const long pairs = static_cast<long>(m) * (m - 1) / 2;
  std::uniform_int_distribution<long> pick(0, pairs - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::int64_t> wins(static_cast<std::size_t>(m) * m, 0);
  for (int i = 0; i < n; ++i) {
    const auto [j, l] = detail::pair_from_index(pick(rng), m);
    if (unit(rng) < win_prob(worths[j], worths[l])) {
      ++wins[j * m + l];
    } else {
      ++wins[l * m + j];
    }
  }
  AttributeData out;
  out.attribute_id = attribute_id;
  for (int w = 0; w < m; ++w) {
    for (int l = 0; l < m; ++l) {
      if (wins[w * m + l] > 0) out.comparisons.push_back({w, l, wins[w * m + l]});
    }
  }
  return out;
}

inline AttributeData gen_pairwise(const SimTruth& truth, int attribute, int n,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_pairwise(truth.worths(attribute), attribute, n, rng);
}

// m distinct objects chosen uniformly, ordered by sequential Plackett-Luce
// draws at `worths`.
inline RankingAttribute sample_rankings(const WorthVector& worths, int attribute_id,
                                        int n, int ranking_size, std::mt19937_64& rng) {
  const int m = static_cast<int>(worths.size());
  if (ranking_size < 2 || ranking_size > m) {
    throw Error(ErrorCode::kInvalidArgument, "ranking size must lie in [2, M]");
  }
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "N_s must be >= 1");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<int> pool(m);
  RankingAttribute out;
  out.attribute_id = attribute_id;
  std::vector<double> weights;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < m; ++k) pool[k] = k;
    for (int k = 0; k < ranking_size; ++k) {
      std::uniform_int_distribution<int> pick(k, m - 1);
      std::swap(pool[k], pool[pick(rng)]);
    }
    std::vector<int> remaining(pool.begin(), pool.begin() + ranking_size);
    PartialRanking r;
    while (remaining.size() > 1) {
      double top = -std::numeric_limits<double>::infinity();
      for (int o : remaining) top = std::max(top, worths[o]);
      weights.clear();
      double total = 0.0;
      for (int o : remaining) {
        weights.push_back(std::exp(std::max(worths[o] - top, -kMaxWorthGap)));
        total += weights.back();
      }
      double target = unit(rng) * total;
      std::size_t chosen = 0;
      while (chosen + 1 < remaining.size() && target >= weights[chosen]) {
        target -= weights[chosen];
        ++chosen;
      }
      r.ordered.push_back(remaining[chosen]);
      remaining.erase(remaining.begin() + static_cast<long>(chosen));
    }
    r.ordered.push_back(remaining.front());
    out.rankings.push_back(std::move(r));
  }
  return out;
}

inline RankingAttribute gen_rankings(const SimTruth& truth, int attribute, int n,
                                     int ranking_size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_rankings(truth.worths(attribute), attribute, n, ranking_size, rng);
}

namespace detail {

template <class Attribute>
BasicDataset<Attribute> simulate_dataset(const SimConfig& config,
                                         const SimTruth& truth,
                                         std::uint64_t rep_seed) {
  BasicDataset<Attribute> dataset;
  dataset.num_objects = config.num_objects;
  for (int s = 0; s <= config.num_secondary; ++s) {
    const std::uint64_t seed = derive_seed(rep_seed, 1 + s);
    if constexpr (std::is_same_v<Attribute, AttributeData>) {
      dataset.attributes.push_back(
          gen_pairwise(truth, s, config.n_per_attribute, seed));
    } else {
      dataset.attributes.push_back(gen_rankings(truth, s, config.n_per_attribute,
                                                config.ranking_size, seed));
    }
  }
  return dataset;
}

template <class Attribute>
std::map<std::string, double> run_replication(const SimConfig& config, int count,
                                              int rep) {
  const std::uint64_t rep_seed = derive_seed(config.seed, count, rep);
  const SimTruth truth = gen_truth(config.num_objects, config.num_secondary, count,
                                   config.h, derive_seed(rep_seed, 0));
  const auto dataset = simulate_dataset<Attribute>(config, truth, rep_seed);

  std::map<std::string, double> errors;
  for (Method method : config.methods) {
    double err = std::numeric_limits<double>::quiet_NaN();
    try {
      WorthVector estimate;
      switch (method) {
        case Method::kPrimary:
          estimate = fit_mle(dataset.primary(), dataset.num_objects, config.optimizer).worths;
          break;
        case Method::kPooled: {
          std::vector<int> ids;
          for (const auto& a : dataset.attributes) ids.push_back(a.attribute_id);
          estimate = fit_pooled(dataset, std::span<const int>(ids), config.optimizer).worths;
          break;
        }
        case Method::kOracle: {
          OracleOptions options;
          options.lambda_delta = config.lambda_delta;
          options.optimizer = config.optimizer;
          estimate = fit_oracle(dataset, truth.informative, options).alpha_hat;
          break;
        }
        case Method::kDiscovery: {
          DiscoveryConfig dc;
          dc.c_threshold = config.c_threshold;
          dc.seed = derive_seed(rep_seed, 0xD15C);
          dc.lambda_delta = config.lambda_delta;
          dc.optimizer = config.optimizer;
          estimate = fit_discovery(dataset, dc).fit.alpha_hat;
          break;
        }
      }
      err = score_error(config.metric, estimate, truth.alpha_star);
    } catch (const Error&) {
      // counted as a failure by the aggregator
    }
    errors[method_name(method, config.mode)] = err;
  }
  return errors;
}

inline int thread_budget(int requested) {
  int n = requested > 0 ? requested
                        : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("TRANSRANK_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return std::max(1, n);
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  int n = 0;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
  MeanSe out;
  out.n = static_cast<int>(xs.size());
  if (xs.empty()) {
    out.mean = out.se = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / out.n;
  if (out.n > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.se = std::sqrt(ss / (out.n - 1)) / std::sqrt(static_cast<double>(out.n));
  }
  return out;
}

}  // namespace detail

// Runs reps replications for every informative count. Rows hold the mean
// and standard error of each method's error per count; when several counts
// are swept, one extra row per method (informative_count == -1) averages the
// per-count means, with the standard error taken across those means.
// Replications are independent and seeded from (seed, count, rep), so
// results do not depend on the thread count.
inline BenchmarkResult run_benchmark(const SimConfig& config) {
  config.validate();
  const auto counts = config.counts();
  const int tasks = static_cast<int>(counts.size()) * config.reps;
  std::vector<ReplicationRecord> records(tasks);

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int t = next++; t < tasks; t = next++) {
      auto& rec = records[t];
      rec.informative_count = counts[t / config.reps];
      rec.rep = t % config.reps;
      rec.errors = config.mode == SimMode::kPairwise
                       ? detail::run_replication<AttributeData>(config, rec.informative_count, rec.rep)
                       : detail::run_replication<RankingAttribute>(config, rec.informative_count, rec.rep);
    }
  };
  const int threads = std::min(detail::thread_budget(config.threads), tasks);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  BenchmarkResult result;
  result.records = records;
  for (Method method : config.methods) {
    const std::string name = method_name(method, config.mode);
    std::vector<double> count_means;
    int total_failures = 0;
    int total_ok = 0;
    for (std::size_t c = 0; c < counts.size(); ++c) {
      std::vector<double> errs;
      int failures = 0;
      for (int r = 0; r < config.reps; ++r) {
        const double e = records[c * config.reps + r].errors.at(name);
        if (std::isnan(e)) {
          ++failures;
        } else {
          errs.push_back(e);
        }
      }
      const auto stats = detail::mean_se(errs);
      result.rows.push_back({config.num_objects, config.num_secondary, config.h,
                             config.n_per_attribute, counts[c], name, stats.mean,
                             stats.se, static_cast<int>(errs.size()), failures});
      if (!errs.empty()) count_means.push_back(stats.mean);
      total_failures += failures;
      total_ok += static_cast<int>(errs.size());
    }
    if (counts.size() > 1) {
      const auto stats = detail::mean_se(count_means);
      result.rows.push_back({config.num_objects, config.num_secondary, config.h,
                             config.n_per_attribute, -1, name, stats.mean, stats.se,
                             total_ok, total_failures});
    }
  }
  return result;
}

}  // namespace transrank

#endif  // TRANSRANK_SIMULATE_HPP_
