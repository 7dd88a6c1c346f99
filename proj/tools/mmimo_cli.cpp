// Copyright 2026 The mmimo Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line driver: single-drop solvers and the experiment sweeps.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mmimo/coherent.hpp"
#include "mmimo/config_io.hpp"
#include "mmimo/csv.hpp"
#include "mmimo/experiments.hpp"
#include "mmimo/maxmin.hpp"
#include "mmimo/power_min.hpp"

namespace {

using namespace mmimo;

struct CommonFlags {
  std::string config_path;
  std::uint64_t seed = 1;
  std::optional<int> drops;
  std::string out_dir = "results";
  std::string scheme;
  double qos = 1.0;
};

NetworkConfig base_config(const CommonFlags& flags, const NetworkConfig& fallback) {
  return flags.config_path.empty() ? fallback : load_config(flags.config_path);
}

std::vector<Precoding> selected_schemes(const CommonFlags& flags) {
  if (flags.scheme.empty()) return {Precoding::mrt, Precoding::zf};
  return {precoding_from_string(flags.scheme)};
}

std::string scheme_label(Precoding scheme) {
  return scheme == Precoding::mrt ? "MRT" : "ZF";
}

std::filesystem::path output_file(const CommonFlags& flags, const std::string& name) {
  return std::filesystem::path(flags.out_dir) / (name + ".csv");
}

void emit(const CommonFlags& flags, const CsvTable& table,
          const std::vector<std::string>& log) {
  for (const auto& line : log) std::cerr << "warning: " << line << '\n';
  const auto path = output_file(flags, table.experiment);
  write_csv(path.string(), table);
  std::cout << path.string() << ": " << table.rows.size() << " data rows\n";
}

std::vector<std::string> power_header(int num_bs) {
  std::vector<std::string> h{"seed", "scheme", "M", "K"};
  for (int i = 0; i < num_bs; ++i) h.push_back("power_bs" + std::to_string(i));
  h.push_back("total_power");
  h.push_back("feasible");
  // Number of users served by exactly n BSs, n = 0..L.
  for (int n = 0; n <= num_bs; ++n) h.push_back("users_with_" + std::to_string(n) + "_bs");
  return h;
}

std::vector<std::string> power_row(std::uint64_t seed, const std::string& label,
                                   const NetworkRealization& net, bool feasible,
                                   const PowerAllocation& rho) {
  const int L = net.num_bs();
  std::vector<std::string> row{std::to_string(seed), label,
                               csv_number(net.config.antennas_per_bs),
                               csv_number(net.num_users())};
  const Eigen::VectorXd per_bs =
      feasible ? rho.per_bs() : Eigen::VectorXd::Constant(L, kNaN);
  for (int i = 0; i < L; ++i) row.push_back(csv_number(per_bs(i)));
  row.push_back(csv_number(feasible ? rho.total() : kNaN));
  row.push_back(feasible ? "1" : "0");
  std::vector<long> histogram(L + 1, 0);
  if (feasible) {
    for (const auto& s : extract_association(rho)) ++histogram[s.size()];
  }
  for (long count : histogram) row.push_back(csv_number(count));
  return row;
}

int run_powermin(const CommonFlags& flags, bool coherent) {
  const NetworkConfig base = base_config(flags, NetworkConfig::defaults(4, 200, 20));
  const int drops = flags.drops.value_or(1);
  CsvTable table;
  table.experiment = coherent ? "coherent" : "powermin";
  table.header = power_header(base.num_bs);
  std::vector<std::string> log;
  for (int d = 0; d < drops; ++d) {
    const std::uint64_t seed = drop_seed(flags.seed, d);
    const NetworkRealization net = generate_network(base, seed);
    const SinrTargets targets =
        SinrTargets::uniform(net.num_users(), flags.qos, net.config.prelog());
    for (Precoding scheme : selected_schemes(flags)) {
      if (coherent) {
        const CoherentResult r = solve_coherent_powermin(net, targets, scheme);
        table.add_row(power_row(seed, "coherent-" + scheme_label(scheme), net, r.feasible(),
                                r.allocation));
      } else {
        const PowerMinResult r = solve_powermin(net, targets, scheme);
        table.add_row(power_row(seed, to_string(scheme), net, r.feasible(), r.allocation));
      }
    }
  }
  emit(flags, table, log);
  return 0;
}

int run_maxmin(const CommonFlags& flags) {
  const NetworkConfig base = base_config(flags, NetworkConfig::defaults(4, 200, 20));
  const int drops = flags.drops.value_or(1);
  CsvTable table;
  table.experiment = "maxmin";
  table.header = {"seed", "scheme", "M", "K", "xi_lower", "iterations", "total_power"};
  std::vector<std::string> log;
  for (int d = 0; d < drops; ++d) {
    const std::uint64_t seed = drop_seed(flags.seed, d);
    const NetworkRealization net = generate_network(base, seed);
    for (Precoding scheme : selected_schemes(flags)) {
      const MaxMinResult r = maxmin_bisection(net, scheme);
      for (const auto& w : r.warnings) log.push_back("seed " + std::to_string(seed) + ": " + w);
      table.add_row({std::to_string(seed), to_string(scheme),
                     csv_number(net.config.antennas_per_bs), csv_number(net.num_users()),
                     csv_number(r.xi_lower), csv_number(r.iterations),
                     csv_number(r.allocation.total())});
    }
  }
  emit(flags, table, log);
  return 0;
}

int run_sweep(const CommonFlags& flags, ExperimentKind kind) {
  ExperimentSpec spec = ExperimentSpec::defaults(kind);
  if (!flags.config_path.empty()) {
    spec.base = load_config(flags.config_path);
    if (kind == ExperimentKind::validate_se || kind == ExperimentKind::association_map) {
      spec.antennas = {spec.base.antennas_per_bs};
    }
  }
  spec.seed = flags.seed;
  if (flags.drops) spec.num_drops = *flags.drops;
  spec.schemes = selected_schemes(flags);
  const ExperimentResult result = run_experiment(spec);
  emit(flags, result.table, result.log);
  return 0;
}

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool with_qos) {
  cmd->add_option("--config", flags.config_path, "YAML network config")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", flags.seed, "Run seed");
  cmd->add_option("--drops", flags.drops, "Number of random drops")->check(CLI::PositiveNumber);
  cmd->add_option("--out", flags.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--scheme", flags.scheme, "Precoding (default: both)")
      ->check(CLI::IsMember({"mrt", "zf"}));
  if (with_qos) {
    cmd->add_option("--qos", flags.qos, "QoS target, bit/symbol")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-cell Massive MIMO power allocation and user association"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto* powermin = app.add_subcommand("powermin", "Total power minimization per drop");
  add_common_flags(powermin, flags, true);
  auto* maxmin = app.add_subcommand("maxmin", "Max-min QoS by bisection per drop");
  add_common_flags(maxmin, flags, false);
  auto* coherent = app.add_subcommand("coherent", "Coherent joint transmission power min");
  add_common_flags(coherent, flags, true);
  auto* validate = app.add_subcommand("validate-se", "Closed-form SINR vs Monte Carlo");
  add_common_flags(validate, flags, false);
  auto* sweep = app.add_subcommand("sweep", "Run one experiment sweep");
  std::string experiment;
  std::vector<std::string> names;
  for (ExperimentKind k : all_experiments()) names.push_back(to_string(k));
  sweep->add_option("experiment", experiment, "Experiment name")
      ->required()
      ->check(CLI::IsMember(names));
  add_common_flags(sweep, flags, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*powermin) return run_powermin(flags, false);
    if (*coherent) return run_powermin(flags, true);
    if (*maxmin) return run_maxmin(flags);
    if (*validate) return run_sweep(flags, ExperimentKind::validate_se);
    if (*sweep) return run_sweep(flags, experiment_from_string(experiment));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
