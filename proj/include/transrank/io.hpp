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

// CSV ingestion and report serialization.
//
// Comparison files:  attribute,winner,loser[,count]
// Ranking files:     attribute,rank1,rank2,...   (variable length rows)
//
// The primary attribute is the one named by the caller, else the one
// labelled "0", else the first attribute in the file. Other attributes get
// ids 1, 2, ... in order of first appearance; object names map to dense
// indices the same way.

#ifndef TRANSRANK_IO_HPP_
#define TRANSRANK_IO_HPP_

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "transrank/core.hpp"
#include "transrank/discovery.hpp"
#include "transrank/error.hpp"
#include "transrank/inference.hpp"
#include "transrank/simulate.hpp"

namespace transrank {

struct IngestOptions {
  std::optional<std::string> primary;  // attribute label of the primary
};

namespace detail {

inline std::string trim(std::string s) {
  const auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

// Splits one CSV record; double-quoted fields may contain commas and "".
inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(trim(field));
      field.clear();
    } else {
      field += ch;
    }
  }
  out.push_back(trim(field));
  return out;
}

// Shortest text that reads back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

[[noreturn]] inline void parse_error(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": " + what);
}

class NameIndex {
 public:
  int get(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    const int id = static_cast<int>(names_.size());
    index_.emplace(name, id);
    names_.push_back(name);
    return id;
  }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::map<std::string, int> index_;
  std::vector<std::string> names_;
};

// Reads non-empty records; returns (line number, fields) pairs after the
// header, which is returned separately.
inline std::pair<std::vector<std::string>,
                 std::vector<std::pair<std::size_t, std::vector<std::string>>>>
read_records(std::istream& in) {
  std::string line;
  std::size_t number = 0;
  std::vector<std::string> header;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (number == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      line.erase(0, 3);
    }
    auto fields = split_csv(line);
    if (header.empty()) {
      header = std::move(fields);
    } else {
      rows.emplace_back(number, std::move(fields));
    }
  }
  if (header.empty()) throw Error(ErrorCode::kParse, "missing header row");
  return {header, rows};
}

// Orders attribute labels: primary first (id 0), the rest by appearance.
inline std::map<std::string, int> assign_attribute_ids(
    const std::vector<std::string>& labels_in_order,
    const std::optional<std::string>& primary) {
  std::string chosen;
  if (primary) {
    if (std::find(labels_in_order.begin(), labels_in_order.end(), *primary) ==
        labels_in_order.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "primary attribute '" + *primary + "' not found in input");
    }
    chosen = *primary;
  } else if (std::find(labels_in_order.begin(), labels_in_order.end(), "0") !=
             labels_in_order.end()) {
    chosen = "0";
  } else if (!labels_in_order.empty()) {
    chosen = labels_in_order.front();
  }
  std::map<std::string, int> ids;
  ids[chosen] = 0;
  int next = 1;
  for (const auto& label : labels_in_order) {
    if (!ids.count(label)) ids[label] = next++;
  }
  return ids;
}

template <class Attribute>
void sort_attributes(BasicDataset<Attribute>& dataset) {
  std::sort(dataset.attributes.begin(), dataset.attributes.end(),
            [](const Attribute& a, const Attribute& b) {
              return a.attribute_id < b.attribute_id;
            });
}

}  // namespace detail

inline ComparisonDataset ingest_comparisons(std::istream& in,
                                            const IngestOptions& options = {}) {
  auto [header, rows] = detail::read_records(in);
  int col_attr = -1, col_winner = -1, col_loser = -1, col_count = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto& name = header[c];
    int* slot = name == "attribute" ? &col_attr
                : name == "winner"  ? &col_winner
                : name == "loser"   ? &col_loser
                : name == "count"   ? &col_count
                                    : nullptr;
    if (!slot) detail::parse_error(1, "unknown column '" + name + "'");
    if (*slot >= 0) detail::parse_error(1, "duplicate column '" + name + "'");
    *slot = static_cast<int>(c);
  }
  if (col_attr < 0 || col_winner < 0 || col_loser < 0) {
    detail::parse_error(1, "header must contain attribute,winner,loser");
  }

  struct Row {
    std::string attribute;
    int winner;
    int loser;
    std::int64_t count;
  };
  detail::NameIndex objects;
  std::vector<std::string> labels;
  std::vector<Row> parsed;
  for (const auto& [line, fields] : rows) {
    if (fields.size() != header.size()) {
      detail::parse_error(line, "expected " + std::to_string(header.size()) +
                                    " fields, found " + std::to_string(fields.size()));
    }
    const auto& attr = fields[col_attr];
    const auto& winner = fields[col_winner];
    const auto& loser = fields[col_loser];
    if (attr.empty() || winner.empty() || loser.empty()) {
      detail::parse_error(line, "empty field");
    }
    if (winner == loser) detail::parse_error(line, "winner equals loser");
    std::int64_t count = 1;
    if (col_count >= 0) {
      const auto& text = fields[col_count];
      std::size_t used = 0;
      long long value = 0;
      try {
        value = std::stoll(text, &used);
      } catch (const std::exception&) {
        detail::parse_error(line, "count '" + text + "' is not an integer");
      }
      if (used != text.size()) {
        detail::parse_error(line, "count '" + text + "' is not an integer");
      }
      if (value < 1) detail::parse_error(line, "count must be positive");
      count = value;
    }
    if (std::find(labels.begin(), labels.end(), attr) == labels.end()) {
      labels.push_back(attr);
    }
    const int w = objects.get(winner);
    const int l = objects.get(loser);
    parsed.push_back({attr, w, l, count});
  }
  if (parsed.empty()) throw Error(ErrorCode::kNoComparisons, "no comparisons");

  const auto ids = detail::assign_attribute_ids(labels, options.primary);
  ComparisonDataset dataset;
  dataset.object_names = objects.names();
  dataset.num_objects = static_cast<int>(dataset.object_names.size());
  std::map<int, std::size_t> slot;
  std::map<std::tuple<int, int, int>, std::size_t> seen;
  for (const auto& label : labels) {
    slot[ids.at(label)] = dataset.attributes.size();
    dataset.attributes.push_back({ids.at(label), {}, label});
  }
  for (const auto& row : parsed) {
    const int id = ids.at(row.attribute);
    auto& attr = dataset.attributes[slot[id]];
    const auto key = std::make_tuple(id, row.winner, row.loser);
    auto it = seen.find(key);
    if (it != seen.end()) {
      attr.comparisons[it->second].count += row.count;
    } else {
      seen.emplace(key, attr.comparisons.size());
      attr.comparisons.push_back({row.winner, row.loser, row.count});
    }
  }
  detail::sort_attributes(dataset);
  return dataset;
}

inline RankingDataset read_rankings(std::istream& in, const IngestOptions& options = {}) {
  auto [header, rows] = detail::read_records(in);
  if (header.empty() || header.front() != "attribute") {
    detail::parse_error(1, "first column must be 'attribute'");
  }
  if (header.size() < 3) detail::parse_error(1, "need at least two rank columns");
  detail::NameIndex objects;
  std::vector<std::string> labels;
  std::vector<std::pair<std::string, PartialRanking>> parsed;
  for (const auto& [line, fields] : rows) {
    std::vector<std::string> names(fields.begin() + 1, fields.end());
    while (!names.empty() && names.back().empty()) names.pop_back();
    if (fields.front().empty()) detail::parse_error(line, "empty attribute");
    if (names.size() < 2) detail::parse_error(line, "ranking needs at least two objects");
    if (std::find(names.begin(), names.end(), std::string()) != names.end()) {
      detail::parse_error(line, "empty object name inside ranking");
    }
    auto sorted = names;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      detail::parse_error(line, "object listed twice in one ranking");
    }
    PartialRanking r;
    for (const auto& n : names) r.ordered.push_back(objects.get(n));
    if (std::find(labels.begin(), labels.end(), fields.front()) == labels.end()) {
      labels.push_back(fields.front());
    }
    parsed.emplace_back(fields.front(), std::move(r));
  }
  if (parsed.empty()) throw Error(ErrorCode::kNoComparisons, "no rankings");
  const auto ids = detail::assign_attribute_ids(labels, options.primary);
  RankingDataset dataset;
  dataset.object_names = objects.names();
  dataset.num_objects = static_cast<int>(dataset.object_names.size());
  std::map<int, std::size_t> slot;
  for (const auto& label : labels) {
    slot[ids.at(label)] = dataset.attributes.size();
    dataset.attributes.push_back({ids.at(label), {}, label});
  }
  for (auto& [label, r] : parsed) {
    dataset.attributes[slot[ids.at(label)]].rankings.push_back(std::move(r));
  }
  detail::sort_attributes(dataset);
  return dataset;
}

// With breaking, every ranking is expanded into its implied pairwise
// comparisons; otherwise the rankings are kept for Plackett-Luce fitting.
inline std::variant<ComparisonDataset, RankingDataset> ingest_rankings(
    std::istream& in, bool breaking, const IngestOptions& options = {}) {
  RankingDataset rankings = read_rankings(in, options);
  if (!breaking) return rankings;
  ComparisonDataset broken = full_breaking(rankings);
  for (auto& a : broken.attributes) {
    // merge duplicate pairs into counts
    std::map<std::pair<int, int>, std::size_t> seen;
    std::vector<Comparison> merged;
    for (const auto& c : a.comparisons) {
      auto [it, fresh] = seen.emplace(std::make_pair(c.winner, c.loser), merged.size());
      if (fresh) {
        merged.push_back(c);
      } else {
        merged[it->second].count += c.count;
      }
    }
    a.comparisons = std::move(merged);
  }
  return broken;
}

namespace detail {

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  return out;
}

inline std::string attribute_label(int id, const std::string& label) {
  return label.empty() ? std::to_string(id) : label;
}

}  // namespace detail

inline ComparisonDataset ingest_comparisons(const std::string& path,
                                            const IngestOptions& options = {}) {
  auto in = detail::open_input(path);
  return ingest_comparisons(in, options);
}

inline std::variant<ComparisonDataset, RankingDataset> ingest_rankings(
    const std::string& path, bool breaking, const IngestOptions& options = {}) {
  auto in = detail::open_input(path);
  return ingest_rankings(in, breaking, options);
}

// Writes `attribute,winner,loser,count`, primary attribute first.
inline void write_comparisons(const ComparisonDataset& dataset, std::ostream& out) {
  out << "attribute,winner,loser,count\n";
  auto attrs = dataset.attributes;
  std::stable_sort(attrs.begin(), attrs.end(),
                   [](const AttributeData& a, const AttributeData& b) {
                     return a.attribute_id < b.attribute_id;
                   });
  for (const auto& a : attrs) {
    const auto label = detail::csv_field(detail::attribute_label(a.attribute_id, a.label));
    for (const auto& c : a.comparisons) {
      out << label << ',' << detail::csv_field(dataset.object_name(c.winner)) << ','
          << detail::csv_field(dataset.object_name(c.loser)) << ',' << c.count << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// Reports

// Ranks by descending worth, ties broken by object index; 1 is best.
inline std::vector<int> ranks_descending(const WorthVector& worths) {
  std::vector<int> order(worths.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return worths[a] > worths[b]; });
  std::vector<int> ranks(worths.size());
  for (std::size_t r = 0; r < order.size(); ++r) ranks[order[r]] = static_cast<int>(r) + 1;
  return ranks;
}

struct GraphSummary {
  double p_hat = 0.0;
  bool connected = false;
  bool ford_condition = false;
  std::int64_t total_count = 0;
  std::vector<Edge> edges;

  friend bool operator==(const GraphSummary&, const GraphSummary&) = default;
};

inline GraphSummary summarize_graph(const ComparisonGraph& graph) {
  const auto diag = is_mle_safe(graph);
  return {graph.p_hat, diag.connected, diag.ford_condition, graph.total_count(),
          graph.edges};
}

struct SelectionSummary {
  std::vector<std::string> selected;
  std::vector<std::string> reversed;
  double primary_score = 0.0;
  double sigma_hat = 0.0;
  double threshold = 0.0;
  std::map<std::string, double> scores;
  std::map<std::string, double> reversed_scores;

  friend bool operator==(const SelectionSummary&, const SelectionSummary&) = default;
};

struct InferenceSummary {
  double level = 0.95;
  std::vector<double> std_errors;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  std::vector<double> estimate_before_debias;
  double kappa3_hat = 1.0;

  friend bool operator==(const InferenceSummary&, const InferenceSummary&) = default;
};

struct FitReport {
  static constexpr const char* kSchema = "transrank.report/1";

  std::string command;
  std::string method;
  std::string model = "bradley_terry";
  std::vector<std::string> objects;
  std::vector<double> worths;
  std::vector<int> ranks;
  std::optional<double> lambda_delta;
  std::vector<std::string> informative;
  std::optional<SelectionSummary> selection;
  std::optional<InferenceSummary> inference;
  std::optional<GraphSummary> primary_graph;
  bool converged = true;
  int iterations = 0;
  std::vector<std::string> warnings;

  friend bool operator==(const FitReport&, const FitReport&) = default;
};

inline FitReport make_report(const std::string& command, const std::string& method,
                             const std::vector<std::string>& objects,
                             const WorthVector& worths) {
  FitReport r;
  r.command = command;
  r.method = method;
  r.objects = objects;
  r.worths.assign(worths.data(), worths.data() + worths.size());
  r.ranks = ranks_descending(worths);
  return r;
}

namespace detail {

// JSON has no infinity; non-finite scores travel as null.
inline nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}
inline double number_from(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

inline nlohmann::json score_map(const std::map<std::string, double>& m) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : m) j[k] = number_or_null(v);
  return j;
}
inline std::map<std::string, double> score_map_from(const nlohmann::json& j) {
  std::map<std::string, double> m;
  for (const auto& [k, v] : j.items()) m[k] = number_from(v);
  return m;
}

}  // namespace detail

inline nlohmann::json to_json(const FitReport& r) {
  using nlohmann::json;
  json j;
  j["schema"] = FitReport::kSchema;
  j["command"] = r.command;
  j["method"] = r.method;
  j["model"] = r.model;
  j["objects"] = r.objects;
  j["worths"] = r.worths;
  j["ranks"] = r.ranks;
  j["lambda_delta"] = r.lambda_delta ? json(*r.lambda_delta) : json(nullptr);
  j["informative"] = r.informative;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["warnings"] = r.warnings;
  if (r.selection) {
    const auto& s = *r.selection;
    j["selection"] = {{"selected", s.selected},
                      {"reversed", s.reversed},
                      {"primary_score", s.primary_score},
                      {"sigma_hat", s.sigma_hat},
                      {"threshold", s.threshold},
                      {"scores", detail::score_map(s.scores)},
                      {"reversed_scores", detail::score_map(s.reversed_scores)}};
  }
  if (r.inference) {
    const auto& s = *r.inference;
    j["inference"] = {{"level", s.level},
                      {"std_errors", s.std_errors},
                      {"ci_low", s.ci_low},
                      {"ci_high", s.ci_high},
                      {"estimate_before_debias", s.estimate_before_debias},
                      {"kappa3_hat", s.kappa3_hat}};
  }
  if (r.primary_graph) {
    const auto& g = *r.primary_graph;
    json edges = json::array();
    for (const auto& e : g.edges) {
      edges.push_back({{"a", e.j}, {"b", e.l}, {"wins_a", e.wins_j}, {"wins_b", e.wins_l}});
    }
    j["primary_graph"] = {{"p_hat", g.p_hat},
                          {"connected", g.connected},
                          {"ford_condition", g.ford_condition},
                          {"total_count", g.total_count},
                          {"edges", edges}};
  }
  return j;
}

inline FitReport report_from_json(const nlohmann::json& j) {
  if (j.value("schema", std::string()) != FitReport::kSchema) {
    throw Error(ErrorCode::kParse, "unsupported report schema");
  }
  FitReport r;
  r.command = j.at("command").get<std::string>();
  r.method = j.at("method").get<std::string>();
  r.model = j.at("model").get<std::string>();
  r.objects = j.at("objects").get<std::vector<std::string>>();
  r.worths = j.at("worths").get<std::vector<double>>();
  r.ranks = j.at("ranks").get<std::vector<int>>();
  if (!j.at("lambda_delta").is_null()) r.lambda_delta = j.at("lambda_delta").get<double>();
  r.informative = j.at("informative").get<std::vector<std::string>>();
  r.converged = j.at("converged").get<bool>();
  r.iterations = j.at("iterations").get<int>();
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  if (j.contains("selection")) {
    const auto& s = j.at("selection");
    SelectionSummary out;
    out.selected = s.at("selected").get<std::vector<std::string>>();
    out.reversed = s.at("reversed").get<std::vector<std::string>>();
    out.primary_score = s.at("primary_score").get<double>();
    out.sigma_hat = s.at("sigma_hat").get<double>();
    out.threshold = s.at("threshold").get<double>();
    out.scores = detail::score_map_from(s.at("scores"));
    out.reversed_scores = detail::score_map_from(s.at("reversed_scores"));
    r.selection = std::move(out);
  }
  if (j.contains("inference")) {
    const auto& s = j.at("inference");
    InferenceSummary out;
    out.level = s.at("level").get<double>();
    out.std_errors = s.at("std_errors").get<std::vector<double>>();
    out.ci_low = s.at("ci_low").get<std::vector<double>>();
    out.ci_high = s.at("ci_high").get<std::vector<double>>();
    out.estimate_before_debias = s.at("estimate_before_debias").get<std::vector<double>>();
    out.kappa3_hat = s.at("kappa3_hat").get<double>();
    r.inference = std::move(out);
  }
  if (j.contains("primary_graph")) {
    const auto& g = j.at("primary_graph");
    GraphSummary out;
    out.p_hat = g.at("p_hat").get<double>();
    out.connected = g.at("connected").get<bool>();
    out.ford_condition = g.at("ford_condition").get<bool>();
    out.total_count = g.at("total_count").get<std::int64_t>();
    for (const auto& e : g.at("edges")) {
      out.edges.push_back({e.at("a").get<int>(), e.at("b").get<int>(),
                           e.at("wins_a").get<std::int64_t>(),
                           e.at("wins_b").get<std::int64_t>()});
    }
    r.primary_graph = std::move(out);
  }
  return r;
}

// object,estimated_worth,estimated_rank[,std_error,ci_low,ci_high]
inline void write_worth_table(const FitReport& r, std::ostream& out) {
  out << "object,estimated_worth,estimated_rank";
  if (r.inference) out << ",std_error,ci_low,ci_high";
  out << '\n';
  using detail::format_double;
  for (std::size_t i = 0; i < r.objects.size(); ++i) {
    out << detail::csv_field(r.objects[i]) << ',' << format_double(r.worths[i]) << ','
        << r.ranks[i];
    if (r.inference) {
      out << ',' << format_double(r.inference->std_errors[i]) << ','
          << format_double(r.inference->ci_low[i]) << ','
          << format_double(r.inference->ci_high[i]);
    }
    out << '\n';
  }
}

// Edge list of the primary comparison graph, one row per compared pair.
inline void write_graph_table(const GraphSummary& g,
                              const std::vector<std::string>& objects,
                              std::ostream& out) {
  out << "object_a,object_b,wins_a,wins_b,total\n";
  for (const auto& e : g.edges) {
    out << detail::csv_field(objects.at(e.j)) << ',' << detail::csv_field(objects.at(e.l))
        << ',' << e.wins_j << ',' << e.wins_l << ',' << e.total() << '\n';
  }
}

// ---------------------------------------------------------------------------
// Benchmarks

inline void write_benchmark_csv(const BenchmarkResult& result, std::ostream& out) {
  out << "M,S,h,N_s,informative_count,method,mean_l2,se_l2,reps,failures\n";
  using detail::format_double;
  for (const auto& row : result.rows) {
    out << row.num_objects << ',' << row.num_secondary << ',' << format_double(row.h) << ','
        << row.n_per_attribute << ','
        << (row.informative_count < 0 ? std::string("all")
                                      : std::to_string(row.informative_count))
        << ',' << row.method << ',' << format_double(row.mean_l2) << ','
        << format_double(row.se_l2) << ',' << row.reps << ',' << row.failures << '\n';
  }
}

inline nlohmann::json to_json(const BenchmarkResult& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : result.rows) {
    rows.push_back({{"M", row.num_objects},
                    {"S", row.num_secondary},
                    {"h", row.h},
                    {"N_s", row.n_per_attribute},
                    {"informative_count", row.informative_count < 0
                                              ? nlohmann::json("all")
                                              : nlohmann::json(row.informative_count)},
                    {"method", row.method},
                    {"mean_l2", detail::number_or_null(row.mean_l2)},
                    {"se_l2", detail::number_or_null(row.se_l2)},
                    {"reps", row.reps},
                    {"failures", row.failures}});
  }
  return {{"schema", "transrank.benchmark/1"}, {"rows", rows}};
}

namespace detail {

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double to_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw Error(ErrorCode::kParse, "config key '" + key + "': bad number '" + text + "'");
  }
  return v;
}

inline long long to_integer(const std::string& key, const std::string& text) {
  const double v = to_double(key, text);
  if (v != std::floor(v)) {
    throw Error(ErrorCode::kParse, "config key '" + key + "': expected an integer");
  }
  return static_cast<long long>(v);
}

inline void apply_sim_key(SimConfig& c, const std::string& key, const std::string& value) {
  if (key == "M") {
    c.num_objects = static_cast<int>(to_integer(key, value));
  } else if (key == "S") {
    c.num_secondary = static_cast<int>(to_integer(key, value));
  } else if (key == "h") {
    c.h = to_double(key, value);
  } else if (key == "N_s") {
    c.n_per_attribute = static_cast<int>(to_integer(key, value));
  } else if (key == "reps") {
    c.reps = static_cast<int>(to_integer(key, value));
  } else if (key == "seed") {
    c.seed = std::stoull(value);
  } else if (key == "mode") {
    if (value == "pairwise") {
      c.mode = SimMode::kPairwise;
    } else if (value == "ranking") {
      c.mode = SimMode::kRanking;
    } else {
      throw Error(ErrorCode::kParse, "config key 'mode': expected pairwise or ranking");
    }
  } else if (key == "m") {
    c.ranking_size = static_cast<int>(to_integer(key, value));
  } else if (key == "informative_count" || key == "informative_counts") {
    c.informative_counts.clear();
    for (const auto& item : split_list(value)) {
      c.informative_counts.push_back(static_cast<int>(to_integer(key, item)));
    }
  } else if (key == "methods") {
    c.methods.clear();
    for (const auto& item : split_list(value)) c.methods.push_back(parse_method(item));
  } else if (key == "metric") {
    if (value == "rms") {
      c.metric = ErrorMetric::kRms;
    } else if (value == "l2") {
      c.metric = ErrorMetric::kL2;
    } else {
      throw Error(ErrorCode::kParse, "config key 'metric': expected rms or l2");
    }
  } else if (key == "c_threshold") {
    c.c_threshold = to_double(key, value);
  } else if (key == "lambda_delta") {
    c.lambda_delta = to_double(key, value);
  } else if (key == "threads") {
    c.threads = static_cast<int>(to_integer(key, value));
  } else if (key == "max_iters") {
    c.optimizer.max_iters = static_cast<int>(to_integer(key, value));
  } else if (key == "grad_tol") {
    c.optimizer.grad_tol = to_double(key, value);
  } else {
    throw Error(ErrorCode::kParse, "unknown config key '" + key + "'");
  }
}

}  // namespace detail

// Accepts either a JSON object or `key = value` lines (`#` starts a
// comment). Keys: M, S, h, N_s, reps, seed, mode, m, informative_counts,
// methods, metric, c_threshold, lambda_delta, threads, max_iters, grad_tol.
inline SimConfig parse_sim_config(const std::string& text) {
  SimConfig config;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, std::string("config JSON: ") + e.what());
    }
    for (const auto& [key, value] : j.items()) {
      std::string s;
      if (value.is_string()) {
        s = value.get<std::string>();
      } else if (value.is_array()) {
        for (const auto& item : value) {
          if (!s.empty()) s += ',';
          s += item.is_string() ? item.get<std::string>() : item.dump();
        }
      } else {
        s = value.dump();
      }
      detail::apply_sim_key(config, key, s);
    }
  } else {
    std::stringstream ss(text);
    std::string line;
    std::size_t number = 0;
    while (std::getline(ss, line)) {
      ++number;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      line = detail::trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) detail::parse_error(number, "expected key = value");
      detail::apply_sim_key(config, detail::trim(line.substr(0, eq)),
                            detail::trim(line.substr(eq + 1)));
    }
  }
  config.validate();
  return config;
}

}  // namespace transrank

#endif  // TRANSRANK_IO_HPP_
