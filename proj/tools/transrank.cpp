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

// transrank command-line front end.
//
//   transrank fit      data.csv [--method bt|pooled|oracle|discovery] ...
//   transrank discover data.csv [--c-threshold 1.0] [--seed N] [--no-reversal]
//   transrank infer    data.csv [--level 0.95]
//   transrank simulate --config sim.conf
//   transrank convert  rankings.csv --breaking
//
// Errors go to stderr as `error[<code>]: <message>`; the exit status is 0
// only on success.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include "CLI11.hpp"
#endif
#include "transrank/transrank.hpp"

namespace {

using namespace transrank;

struct InputOptions {
  std::string path;
  bool rankings = false;  // input is `attribute,rank1,rank2,...`
  bool breaking = false;  // with --rankings: fit BT on broken comparisons
  std::string primary;
};

struct OutputOptions {
  std::string json_path;
  std::string csv_path;
  std::string graph_path;
};

struct FitOptions {
  std::string method = "bt";
  std::optional<double> lambda_delta;
  double lambda_c = 1.0;
  std::vector<std::string> informative;
  double c_threshold = 1.0;
  std::uint64_t seed = 0;
  bool no_reversal = false;
  double level = 0.95;
  int max_iters = 10000;
  double grad_tol = 1e-8;
  bool newton = false;
  bool force = false;
};

using AnyDataset = std::variant<ComparisonDataset, RankingDataset>;

AnyDataset load(const InputOptions& in) {
  IngestOptions options;
  if (!in.primary.empty()) options.primary = in.primary;
  if (in.rankings) return ingest_rankings(in.path, in.breaking, options);
  if (in.breaking) {
    throw Error(ErrorCode::kInvalidArgument, "--breaking requires --rankings");
  }
  return ingest_comparisons(in.path, options);
}

OptimizerConfig optimizer_from(const FitOptions& f) {
  OptimizerConfig c;
  c.max_iters = f.max_iters;
  c.grad_tol = f.grad_tol;
  c.newton = f.newton;
  c.validate();
  return c;
}

template <class Attribute>
std::string label_of(const BasicDataset<Attribute>& d, int id) {
  for (const auto& a : d.attributes) {
    if (a.attribute_id == id) return a.label.empty() ? std::to_string(id) : a.label;
  }
  return std::to_string(id);
}

// Informative attributes may be given by label or by numeric id.
template <class Attribute>
std::set<int> resolve_attributes(const BasicDataset<Attribute>& d,
                                 const std::vector<std::string>& names) {
  std::set<int> ids;
  for (const auto& name : names) {
    int found = -1;
    for (const auto& a : d.attributes) {
      if (a.label == name) found = a.attribute_id;
    }
    if (found < 0) {
      try {
        std::size_t used = 0;
        const int id = std::stoi(name, &used);
        if (used == name.size() && d.has_attribute(id)) found = id;
      } catch (const std::exception&) {
      }
    }
    if (found < 0) {
      throw Error(ErrorCode::kInvalidArgument, "unknown attribute '" + name + "'");
    }
    if (found == 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "'" + name + "' is the primary attribute, not a secondary one");
    }
    ids.insert(found);
  }
  return ids;
}

template <class Attribute>
std::vector<std::string> labels_of(const BasicDataset<Attribute>& d,
                                   const std::set<int>& ids) {
  std::vector<std::string> out;
  for (int id : ids) out.push_back(label_of(d, id));
  return out;
}

template <class Attribute>
SelectionSummary summarize(const BasicDataset<Attribute>& d, const DiscoverySelection& s) {
  SelectionSummary out;
  out.selected = labels_of(d, s.selected);
  out.reversed = labels_of(d, s.reversed);
  out.primary_score = s.primary_score;
  out.sigma_hat = s.sigma_hat;
  out.threshold = s.threshold_used;
  for (const auto& [id, v] : s.per_attribute_scores) out.scores[label_of(d, id)] = v;
  for (const auto& [id, v] : s.reversed_scores) out.reversed_scores[label_of(d, id)] = v;
  return out;
}

template <class Attribute>
typename ModelFor_t<Attribute>::Data primary_data(const BasicDataset<Attribute>& d) {
  using Model = ModelFor_t<Attribute>;
  const Attribute* parts[] = {&d.primary()};
  return Model::collect(std::span<const Attribute* const>(parts), d.num_objects);
}

template <class Attribute>
FitReport run_estimator(const std::string& command, const BasicDataset<Attribute>& d,
                        const FitOptions& f) {
  using Model = ModelFor_t<Attribute>;
  validate(d);
  const auto optimizer = optimizer_from(f);
  const bool ranking = std::is_same_v<Attribute, RankingAttribute>;
  const std::string base = ranking ? "pl" : "bt";
  FitReport report;
  if (f.method == "bt") {
    const MleFit fit = fit_mle(d.primary(), d.num_objects, optimizer, f.force);
    report = make_report(command, base, d.object_names, fit.worths);
    report.converged = fit.optim.converged;
    report.iterations = fit.optim.iterations;
    if (fit.mle_existence_warning) {
      report.warnings.push_back("Ford condition fails on the primary graph; the MLE may not exist");
    }
  } else if (f.method == "pooled") {
    std::vector<int> ids;
    for (const auto& a : d.attributes) ids.push_back(a.attribute_id);
    const MleFit fit = fit_pooled(d, std::span<const int>(ids), optimizer, f.force);
    report = make_report(command, "p" + base, d.object_names, fit.worths);
    report.converged = fit.optim.converged;
    report.iterations = fit.optim.iterations;
  } else if (f.method == "oracle" || f.method == "discovery") {
    TransferFit fit;
    std::optional<DiscoverySelection> selection;
    if (f.method == "oracle") {
      OracleOptions options;
      options.lambda_delta = f.lambda_delta;
      options.lambda_c = f.lambda_c;
      options.optimizer = optimizer;
      fit = fit_oracle(d, resolve_attributes(d, f.informative), options);
    } else {
      DiscoveryConfig config;
      config.c_threshold = f.c_threshold;
      config.seed = f.seed;
      config.enable_reversal = !f.no_reversal;
      config.lambda_delta = f.lambda_delta;
      config.lambda_c = f.lambda_c;
      config.optimizer = optimizer;
      config.validate();
      auto out = fit_discovery(d, config);
      fit = std::move(out.fit);
      selection = std::move(out.selection);
    }
    report = make_report(command, ranking ? f.method + "_pl" : f.method,
                         d.object_names, fit.alpha_hat);
    report.lambda_delta = fit.lambda_delta;
    report.informative = labels_of(d, fit.informative_set);
    report.converged = fit.transfer_optim.converged && fit.debias_optim.converged;
    report.iterations = fit.transfer_optim.iterations + fit.debias_optim.iterations;
    if (selection) {
      report.selection = summarize(d, *selection);
      report.warnings.insert(report.warnings.end(), selection->warnings.begin(),
                             selection->warnings.end());
    }
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown method '" + f.method + "'");
  }
  report.model = ranking ? "plackett_luce" : "bradley_terry";
  report.primary_graph = summarize_graph(Model::graph(primary_data(d)));
  if (!report.converged) report.warnings.push_back("optimizer did not converge");
  return report;
}

template <class Attribute>
FitReport run_infer(const BasicDataset<Attribute>& d, const FitOptions& f) {
  using Model = ModelFor_t<Attribute>;
  FitReport report = run_estimator("infer", d, f);
  WorthVector alpha(d.num_objects);
  for (int i = 0; i < d.num_objects; ++i) alpha[i] = report.worths[i];
  const InferenceReport inf = infer_with<Model>(alpha, primary_data(d), f.level);
  InferenceSummary s;
  s.level = inf.confidence_level;
  s.estimate_before_debias = report.worths;
  s.kappa3_hat = inf.kappa3_hat;
  for (int i = 0; i < d.num_objects; ++i) {
    s.std_errors.push_back(inf.std_errors[i]);
    s.ci_low.push_back(inf.intervals[i].first);
    s.ci_high.push_back(inf.intervals[i].second);
  }
  FitReport out = make_report("infer", report.method, d.object_names, inf.alpha_db);
  out.model = report.model;
  out.lambda_delta = report.lambda_delta;
  out.informative = report.informative;
  out.selection = report.selection;
  out.primary_graph = report.primary_graph;
  out.converged = report.converged;
  out.iterations = report.iterations;
  out.warnings = report.warnings;
  out.inference = std::move(s);
  return out;
}

void emit(const FitReport& report, const OutputOptions& out) {
  if (!out.json_path.empty()) {
    std::ofstream f(out.json_path);
    if (!f) throw Error(ErrorCode::kIo, "cannot write '" + out.json_path + "'");
    f << to_json(report).dump(2) << '\n';
  }
  if (!out.graph_path.empty()) {
    std::ofstream f(out.graph_path);
    if (!f) throw Error(ErrorCode::kIo, "cannot write '" + out.graph_path + "'");
    write_graph_table(*report.primary_graph, report.objects, f);
  }
  if (!out.csv_path.empty()) {
    std::ofstream f(out.csv_path);
    if (!f) throw Error(ErrorCode::kIo, "cannot write '" + out.csv_path + "'");
    write_worth_table(report, f);
  } else if (out.json_path.empty()) {
    write_worth_table(report, std::cout);
  }
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void add_input(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("input", in.path, "CSV input")->required()->check(CLI::ExistingFile);
  cmd->add_flag("--rankings", in.rankings, "input rows are attribute,rank1,rank2,...");
  cmd->add_flag("--breaking", in.breaking,
                "with --rankings: expand rankings into pairwise comparisons");
  cmd->add_option("--primary", in.primary, "label of the primary attribute");
}

void add_output(CLI::App* cmd, OutputOptions& out) {
  cmd->add_option("--json", out.json_path, "write the full JSON report here");
  cmd->add_option("--csv", out.csv_path, "write the worth table here (default: stdout)");
  cmd->add_option("--graph", out.graph_path, "write the primary comparison graph edges here");
}

void add_optimizer(CLI::App* cmd, FitOptions& f) {
  cmd->add_option("--max-iters", f.max_iters, "optimizer iteration cap")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--grad-tol", f.grad_tol, "gradient norm tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--newton", f.newton, "use Newton directions");
}

void add_method(CLI::App* cmd, FitOptions& f) {
  cmd->add_option("--method", f.method, "estimator")
      ->check(CLI::IsMember({"bt", "pooled", "oracle", "discovery"}));
  cmd->add_option("--lambda-delta", f.lambda_delta, "debias penalty (summed likelihood scale)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--lambda-c", f.lambda_c, "constant of the default penalty")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--informative", f.informative, "informative attributes for --method oracle")
      ->delimiter(',');
  cmd->add_option("--c-threshold", f.c_threshold, "discovery threshold constant")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "fold shuffling seed");
  cmd->add_flag("--no-reversal", f.no_reversal, "skip the reversal pass");
  cmd->add_flag("--force", f.force, "fit even when the comparison graph is disconnected");
}

int run(int argc, char** argv) {
  CLI::App app{"Transfer learning for Bradley-Terry and Plackett-Luce rankings"};
  app.require_subcommand(1);

  InputOptions in;
  OutputOptions out;
  FitOptions f;

  auto* fit = app.add_subcommand("fit", "estimate the primary attribute's worths");
  add_input(fit, in);
  add_output(fit, out);
  add_method(fit, f);
  add_optimizer(fit, f);

  auto* disc = app.add_subcommand("discover", "select informative attributes and fit");
  add_input(disc, in);
  add_output(disc, out);
  disc->add_option("--c-threshold", f.c_threshold, "threshold constant")
      ->check(CLI::PositiveNumber);
  disc->add_option("--seed", f.seed, "fold shuffling seed");
  disc->add_flag("--no-reversal", f.no_reversal, "skip the reversal pass");
  disc->add_option("--lambda-delta", f.lambda_delta, "debias penalty")
      ->check(CLI::NonNegativeNumber);
  add_optimizer(disc, f);

  auto* inf = app.add_subcommand("infer", "debiased worths with confidence intervals");
  add_input(inf, in);
  add_output(inf, out);
  add_method(inf, f);
  add_optimizer(inf, f);
  inf->add_option("--level", f.level, "confidence level")->check(CLI::Range(0.5, 0.9999999));

  std::string config_path;
  std::optional<std::uint64_t> sim_seed;
  std::optional<int> sim_reps;
  auto* sim = app.add_subcommand("simulate", "run the simulation benchmark");
  sim->add_option("--config", config_path, "key=value or JSON configuration")
      ->required()
      ->check(CLI::ExistingFile);
  sim->add_option("--seed", sim_seed, "override the configured seed");
  sim->add_option("--reps", sim_reps, "override the configured replication count")
      ->check(CLI::PositiveNumber);
  sim->add_option("--json", out.json_path, "write rows as JSON here");
  sim->add_option("--csv", out.csv_path, "write rows as CSV here (default: stdout)");

  auto* conv = app.add_subcommand("convert", "rewrite rankings as pairwise comparisons");
  conv->add_option("input", in.path, "ranking CSV")->required()->check(CLI::ExistingFile);
  conv->add_flag("--breaking", in.breaking, "apply full breaking")->required();
  conv->add_option("--primary", in.primary, "label of the primary attribute");
  conv->add_option("-o,--output", out.csv_path, "output CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() != 0) std::cerr << "error[usage]: ";
    return app.exit(e);
  }

  if (*fit || *inf) {
    const AnyDataset data = load(in);
    std::visit(
        [&](const auto& d) {
          emit(*fit ? run_estimator("fit", d, f) : run_infer(d, f), out);
        },
        data);
  } else if (*disc) {
    f.method = "discovery";
    const AnyDataset data = load(in);
    std::visit([&](const auto& d) { emit(run_estimator("discover", d, f), out); }, data);
  } else if (*sim) {
    SimConfig config = parse_sim_config(read_file(config_path));
    if (sim_seed) config.seed = *sim_seed;
    if (sim_reps) config.reps = *sim_reps;
    const BenchmarkResult result = run_benchmark(config);
    if (!out.json_path.empty()) {
      std::ofstream file(out.json_path);
      if (!file) throw Error(ErrorCode::kIo, "cannot write '" + out.json_path + "'");
      file << to_json(result).dump(2) << '\n';
    }
    if (!out.csv_path.empty()) {
      std::ofstream file(out.csv_path);
      if (!file) throw Error(ErrorCode::kIo, "cannot write '" + out.csv_path + "'");
      write_benchmark_csv(result, file);
    } else if (out.json_path.empty()) {
      write_benchmark_csv(result, std::cout);
    }
  } else if (*conv) {
    IngestOptions options;
    if (!in.primary.empty()) options.primary = in.primary;
    const auto data = std::get<ComparisonDataset>(ingest_rankings(in.path, true, options));
    if (out.csv_path.empty()) {
      write_comparisons(data, std::cout);
    } else {
      std::ofstream file(out.csv_path);
      if (!file) throw Error(ErrorCode::kIo, "cannot write '" + out.csv_path + "'");
      write_comparisons(data, file);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const transrank::Error& e) {
    std::cerr << "error[" << transrank::to_string(e.code()) << "]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << '\n';
    return 3;
  }
}
