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

#ifndef MMIMO_EXPERIMENTS_HPP_
#define MMIMO_EXPERIMENTS_HPP_

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "mmimo/csv.hpp"
#include "mmimo/power_min.hpp"
#include "mmimo/se_bounds.hpp"
#include "mmimo/system_model.hpp"

namespace mmimo {

enum class ExperimentKind {
  power_vs_antennas,
  power_vs_qos,
  bad_service_prob,
  maxmin_cdf,
  maxmin_vs_antennas,
  joint_tx_prob,
  association_map,
  validate_se,
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_from_string(const std::string& name);
const std::vector<ExperimentKind>& all_experiments();

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::power_vs_qos;
  /// Network parameters; antennas_per_bs is replaced by each sweep value.
  NetworkConfig base = NetworkConfig::defaults(4, 200, 20);
  std::vector<int> antennas;
  std::vector<double> qos;  // bit/symbol
  std::vector<Precoding> schemes{Precoding::mrt, Precoding::zf};
  int num_drops = 200;
  std::uint64_t seed = 1;
  double delta = 0.01;       // bisection tolerance, bit/symbol
  bool coherent = true;      // maxmin_vs_antennas: add the coherent curve
  int grid_size = 50;        // association_map cells per side
  long mc_samples = 100000;  // validate_se
  bool parallel = true;

  /// Sweep ranges and user counts of the reference study for each kind.
  static ExperimentSpec defaults(ExperimentKind kind);
  /// Throws std::invalid_argument on empty sweeps or num_drops < 1.
  void validate() const;
};

struct ExperimentResult {
  CsvTable table;
  /// One line per failed drop; the remaining drops still count.
  std::vector<std::string> log;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Seed of drop `drop` derived from the run seed.
std::uint64_t drop_seed(std::uint64_t seed, int drop);

NetworkConfig with_antennas(const NetworkConfig& base, int antennas);

/// Power minimization with every user tied to its largest-beta BS.
PowerMinResult max_snr_baseline(const NetworkRealization& net,
                                const SinrTargets& targets, Precoding scheme);

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Fixed-QoS statistics of one (M, QoS, scheme) point over all drops.
struct PowerSweepPoint {
  int antennas = 0;
  double qos = 0.0;
  Precoding scheme = Precoding::mrt;
  int drops = 0;
  int failed = 0;
  /// Drops where both the optimal and the max-SNR association are feasible;
  /// the power means are taken over these only.
  int both_feasible = 0;
  double mean_power_optimal = kNaN;
  double mean_power_baseline = kNaN;
  int infeasible_optimal = 0;
  int infeasible_baseline = 0;
  /// Users of feasible optimal drops, and those served by more than one BS.
  long served_users = 0;
  long multi_bs_users = 0;
  /// Drops where the baseline was feasible but the optimum was not, or the
  /// baseline needed less power; both would indicate a solver problem.
  int ordering_violations = 0;

  double bad_service_optimal() const;
  double bad_service_baseline() const;
  double joint_tx_fraction() const;
};

std::vector<PowerSweepPoint> power_sweep(const NetworkConfig& base,
                                         const std::vector<int>& antennas,
                                         const std::vector<double>& qos,
                                         const std::vector<Precoding>& schemes,
                                         int num_drops, std::uint64_t seed,
                                         bool parallel = true,
                                         std::vector<std::string>* log = nullptr);

struct MaxMinDrop {
  double optimal = kNaN;
  double baseline = kNaN;
  double coherent = kNaN;
  bool certified = true;
  int served_users = 0;
  int multi_bs_users = 0;
  /// Serving sets of the optimal max-min allocation.
  std::vector<std::vector<int>> serving_sets;
  std::vector<Point> user_positions;
  std::string error;
};

struct MaxMinSweepPoint {
  int antennas = 0;
  Precoding scheme = Precoding::mrt;
  std::vector<MaxMinDrop> drops;

  int failed() const;
  double mean_optimal() const;
  double mean_baseline() const;
  double mean_coherent() const;
  double joint_tx_fraction() const;
};

struct MaxMinSweepOptions {
  double delta = 0.01;
  bool baseline = true;
  bool coherent = false;
  bool parallel = true;
};

std::vector<MaxMinSweepPoint> maxmin_sweep(const NetworkConfig& base,
                                           const std::vector<int>& antennas,
                                           const std::vector<Precoding>& schemes,
                                           int num_drops, std::uint64_t seed,
                                           const MaxMinSweepOptions& options = {},
                                           std::vector<std::string>* log = nullptr);

}  // namespace mmimo

#endif  // MMIMO_EXPERIMENTS_HPP_
