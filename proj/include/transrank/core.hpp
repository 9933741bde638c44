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

// Data model for multi-attribute preference data: pairwise comparisons,
// partial rankings, the comparison graph they induce, and the basic
// transformations (full breaking, preference reversal) used by the fitting
// code.

#ifndef TRANSRANK_CORE_HPP_
#define TRANSRANK_CORE_HPP_

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "transrank/error.hpp"

namespace transrank {

// One observed preference `winner ≻ loser`, repeated `count` times.
struct Comparison {
  int winner = 0;
  int loser = 0;
  std::int64_t count = 1;

  friend bool operator==(const Comparison&, const Comparison&) = default;
};

// A partial ranking, best object first.
struct PartialRanking {
  std::vector<int> ordered;

  friend bool operator==(const PartialRanking&, const PartialRanking&) = default;
};

// Pairwise data for one attribute. Attribute 0 is the primary attribute.
struct AttributeData {
  int attribute_id = 0;
  std::vector<Comparison> comparisons;
  std::string label;

  std::int64_t total_count() const {
    std::int64_t total = 0;
    for (const auto& c : comparisons) total += c.count;
    return total;
  }

  friend bool operator==(const AttributeData&, const AttributeData&) = default;
};

// Ranking data for one attribute; each ranking is one observation.
struct RankingAttribute {
  int attribute_id = 0;
  std::vector<PartialRanking> rankings;
  std::string label;

  std::int64_t total_count() const {
    return static_cast<std::int64_t>(rankings.size());
  }

  friend bool operator==(const RankingAttribute&,
                         const RankingAttribute&) = default;
};

// Objects plus one data block per attribute. Object identity is the dense
// index; names are carried for I/O only.
template <class Attribute>
struct BasicDataset {
  int num_objects = 0;
  std::vector<std::string> object_names;
  std::vector<Attribute> attributes;

  bool has_attribute(int id) const {
    return std::any_of(attributes.begin(), attributes.end(),
                       [id](const Attribute& a) { return a.attribute_id == id; });
  }

  const Attribute& attribute(int id) const {
    for (const auto& a : attributes) {
      if (a.attribute_id == id) return a;
    }
    throw Error(ErrorCode::kInvalidArgument,
                "unknown attribute id " + std::to_string(id));
  }

  const Attribute& primary() const { return attribute(0); }

  // Secondary attribute ids in storage order.
  std::vector<int> secondary_ids() const {
    std::vector<int> ids;
    for (const auto& a : attributes) {
      if (a.attribute_id != 0) ids.push_back(a.attribute_id);
    }
    return ids;
  }

  int num_secondary() const { return static_cast<int>(secondary_ids().size()); }

  std::string object_name(int index) const {
    if (index >= 0 && index < static_cast<int>(object_names.size())) {
      return object_names[index];
    }
    return std::to_string(index);
  }
};

using ComparisonDataset = BasicDataset<AttributeData>;
using RankingDataset = BasicDataset<RankingAttribute>;

// Aggregated statistics of one unordered pair, stored with j < l.
struct Edge {
  int j = 0;
  int l = 0;
  std::int64_t wins_j = 0;  // wins of j over l
  std::int64_t wins_l = 0;  // wins of l over j

  std::int64_t total() const { return wins_j + wins_l; }

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct ComparisonGraph {
  int num_objects = 0;
  std::vector<Edge> edges;  // lexicographic in (j, l)
  double p_hat = 0.0;       // |E| / (M(M-1)/2)

  std::int64_t total_count() const {
    std::int64_t total = 0;
    for (const auto& e : edges) total += e.total();
    return total;
  }
};

struct MleDiagnostics {
  bool connected = false;
  // Strong connectivity of the directed win graph (Ford's condition); the
  // unpenalized MLE exists iff this holds.
  bool ford_condition = false;
};

namespace detail {

inline void check_index(int index, int num_objects) {
  if (index < 0 || index >= num_objects) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "object index " + std::to_string(index) +
                    " outside [0, " + std::to_string(num_objects) + ")");
  }
}

inline std::vector<int> reachable(const std::vector<std::vector<int>>& adj,
                                  int start) {
  std::vector<int> seen(adj.size(), 0);
  std::vector<int> stack{start};
  std::vector<int> order;
  seen[start] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (int w : adj[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return order;
}

}  // namespace detail

// Aggregates raw comparisons into the comparison graph.
inline ComparisonGraph build_graph(std::span<const Comparison> comparisons,
                                   int num_objects) {
  if (num_objects < 1) {
    throw Error(ErrorCode::kInvalidArgument, "object count must be positive");
  }
  if (comparisons.empty()) {
    throw Error(ErrorCode::kNoComparisons, "no comparisons");
  }
  const auto m = static_cast<std::size_t>(num_objects);
  std::vector<std::int64_t> wins(m * m, 0);
  for (const auto& c : comparisons) {
    detail::check_index(c.winner, num_objects);
    detail::check_index(c.loser, num_objects);
    if (c.winner == c.loser) {
      throw Error(ErrorCode::kInvalidArgument,
                  "comparison of object " + std::to_string(c.winner) +
                      " with itself");
    }
    if (c.count < 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "comparison count must be at least 1");
    }
    wins[c.winner * m + c.loser] += c.count;
  }
  ComparisonGraph graph;
  graph.num_objects = num_objects;
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t l = j + 1; l < m; ++l) {
      std::int64_t wj = wins[j * m + l];
      std::int64_t wl = wins[l * m + j];
      if (wj + wl > 0) {
        graph.edges.push_back(
            {static_cast<int>(j), static_cast<int>(l), wj, wl});
      }
    }
  }
  const double pairs = 0.5 * num_objects * (num_objects - 1.0);
  graph.p_hat = pairs > 0 ? static_cast<double>(graph.edges.size()) / pairs : 0.0;
  return graph;
}

inline ComparisonGraph build_graph(const AttributeData& data, int num_objects) {
  return build_graph(std::span<const Comparison>(data.comparisons), num_objects);
}

// Pools the comparisons of several attributes into one graph.
inline ComparisonGraph build_graph(std::span<const AttributeData* const> parts,
                                   int num_objects) {
  std::vector<Comparison> pooled;
  for (const AttributeData* part : parts) {
    pooled.insert(pooled.end(), part->comparisons.begin(),
                  part->comparisons.end());
  }
  return build_graph(std::span<const Comparison>(pooled), num_objects);
}

// Connected components of the undirected comparison graph, each sorted, in
// order of smallest member.
inline std::vector<std::vector<int>> connected_components(
    const ComparisonGraph& graph) {
  std::vector<std::vector<int>> adj(graph.num_objects);
  for (const auto& e : graph.edges) {
    adj[e.j].push_back(e.l);
    adj[e.l].push_back(e.j);
  }
  std::vector<int> component(graph.num_objects, -1);
  std::vector<std::vector<int>> out;
  for (int v = 0; v < graph.num_objects; ++v) {
    if (component[v] >= 0) continue;
    auto members = detail::reachable(adj, v);
    std::sort(members.begin(), members.end());
    for (int w : members) component[w] = static_cast<int>(out.size());
    out.push_back(std::move(members));
  }
  return out;
}

inline std::string describe_components(
    const std::vector<std::vector<int>>& components) {
  std::ostringstream os;
  for (std::size_t c = 0; c < components.size(); ++c) {
    if (c) os << ' ';
    os << '{';
    for (std::size_t i = 0; i < components[c].size(); ++i) {
      if (i) os << ',';
      os << components[c][i];
    }
    os << '}';
  }
  return os.str();
}

inline MleDiagnostics is_mle_safe(const ComparisonGraph& graph) {
  MleDiagnostics out;
  if (graph.num_objects < 1) return out;
  out.connected = connected_components(graph).size() == 1;
  if (!out.connected) return out;
  // Strongly connected iff every node reaches 0 and 0 reaches every node.
  std::vector<std::vector<int>> forward(graph.num_objects);
  std::vector<std::vector<int>> backward(graph.num_objects);
  auto add_arc = [&](int from, int to) {
    forward[from].push_back(to);
    backward[to].push_back(from);
  };
  for (const auto& e : graph.edges) {
    if (e.wins_j > 0) add_arc(e.j, e.l);
    if (e.wins_l > 0) add_arc(e.l, e.j);
  }
  const auto n = static_cast<std::size_t>(graph.num_objects);
  out.ford_condition = detail::reachable(forward, 0).size() == n &&
                       detail::reachable(backward, 0).size() == n;
  return out;
}

// Expands each ranking o_1 ≻ ... ≻ o_m into all m(m-1)/2 implied pairs.
inline std::vector<Comparison> full_breaking(
    std::span<const PartialRanking> rankings) {
  std::vector<Comparison> out;
  for (const auto& r : rankings) {
    const auto& o = r.ordered;
    if (o.size() < 2) {
      throw Error(ErrorCode::kInvalidArgument,
                  "ranking must contain at least two objects");
    }
    std::vector<int> sorted = o;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorCode::kDuplicateObject,
                  "ranking lists object " +
                      std::to_string(*std::adjacent_find(sorted.begin(),
                                                         sorted.end())) +
                      " more than once");
    }
    for (std::size_t a = 0; a < o.size(); ++a) {
      for (std::size_t b = a + 1; b < o.size(); ++b) {
        out.push_back({o[a], o[b], 1});
      }
    }
  }
  return out;
}

inline AttributeData full_breaking(const RankingAttribute& data) {
  return {data.attribute_id,
          full_breaking(std::span<const PartialRanking>(data.rankings)),
          data.label};
}

inline ComparisonDataset full_breaking(const RankingDataset& data) {
  ComparisonDataset out;
  out.num_objects = data.num_objects;
  out.object_names = data.object_names;
  for (const auto& a : data.attributes) out.attributes.push_back(full_breaking(a));
  return out;
}

inline AttributeData reverse_preferences(const AttributeData& data) {
  AttributeData out = data;
  for (auto& c : out.comparisons) std::swap(c.winner, c.loser);
  return out;
}

// Reversal of a ranking attribute reads every ranking worst-first.
inline RankingAttribute reverse_preferences(const RankingAttribute& data) {
  RankingAttribute out = data;
  for (auto& r : out.rankings) std::reverse(r.ordered.begin(), r.ordered.end());
  return out;
}

// Throws on any structural violation: out-of-range indices, self
// comparisons, non-positive counts, duplicate attribute ids, a missing
// primary attribute.
template <class Attribute>
void validate(const BasicDataset<Attribute>& dataset) {
  if (dataset.num_objects < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least two objects");
  }
  std::vector<int> ids;
  for (const auto& a : dataset.attributes) ids.push_back(a.attribute_id);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw Error(ErrorCode::kInvalidArgument, "duplicate attribute id");
  }
  if (!dataset.has_attribute(0)) {
    throw Error(ErrorCode::kInvalidArgument, "missing primary attribute 0");
  }
  for (const auto& a : dataset.attributes) {
    if constexpr (std::is_same_v<Attribute, AttributeData>) {
      for (const auto& c : a.comparisons) {
        detail::check_index(c.winner, dataset.num_objects);
        detail::check_index(c.loser, dataset.num_objects);
        if (c.winner == c.loser || c.count < 1) {
          throw Error(ErrorCode::kInvalidArgument, "malformed comparison");
        }
      }
    } else {
      for (const auto& r : a.rankings) {
        if (r.ordered.size() < 2 ||
            r.ordered.size() > static_cast<std::size_t>(dataset.num_objects)) {
          throw Error(ErrorCode::kInvalidArgument, "ranking length out of range");
        }
        for (int o : r.ordered) detail::check_index(o, dataset.num_objects);
      }
      (void)full_breaking(std::span<const PartialRanking>(a.rankings));
    }
  }
}

}  // namespace transrank

#endif  // TRANSRANK_CORE_HPP_
