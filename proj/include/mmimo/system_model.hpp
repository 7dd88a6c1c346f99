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

#ifndef MMIMO_SYSTEM_MODEL_HPP_
#define MMIMO_SYSTEM_MODEL_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mmimo {

/// Raised when a NetworkConfig violates its invariants.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when random geometry cannot satisfy the minimum-distance rule.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PilotPolicy { orthogonal, round_robin };

std::string to_string(PilotPolicy policy);
PilotPolicy pilot_policy_from_string(const std::string& name);

/// Network parameters. Distances in km, powers and variances in W.
///
/// BSs sit on the boundary of a square of side `square_side` centred at the
/// origin (the four corners when num_bs == 4). Users are dropped uniformly in
/// the concentric square of side `coverage_side`.
struct NetworkConfig {
  int num_bs = 4;
  int antennas_per_bs = 200;
  int num_users = 20;
  int coherence_length = 200;
  int pilot_length = 20;
  double dl_fraction = 1.0;
  double square_side = 1.0;
  double coverage_side = 1.0;
  double min_bs_user_distance = 0.1;
  double shadow_std_db = 7.0;
  double pathloss_intercept_db = 148.1;
  double pathloss_slope = 37.6;
  PilotPolicy pilot_policy = PilotPolicy::orthogonal;
  std::vector<double> pilot_power;     // per user
  double ul_noise = 0.0;
  double dl_noise = 0.0;
  std::vector<double> amp_efficiency;  // per BS
  std::vector<double> max_power;       // per BS

  /// Simulation defaults: 40 W per BS, 200 mW pilots, -96 dBm noise,
  /// 7 dB shadowing, tau_c = 200 and tau_p = K.
  static NetworkConfig defaults(int num_bs, int antennas, int num_users);

  /// Throws ConfigError listing the first violated invariant.
  void validate() const;

  /// gamma_DL * (1 - tau_p / tau_c).
  double prelog() const;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point& a, const Point& b);

using PilotSets = std::vector<std::vector<int>>;

/// One network drop. beta and theta are num_bs x num_users, linear scale.
struct NetworkRealization {
  NetworkConfig config;
  std::vector<Point> bs_positions;
  std::vector<Point> user_positions;
  Eigen::MatrixXd beta;
  Eigen::MatrixXd theta;
  PilotSets pilot_sets;

  int num_bs() const { return static_cast<int>(beta.rows()); }
  int num_users() const { return static_cast<int>(beta.cols()); }
};

/// intercept + slope * log10(d). Throws std::domain_error for d <= 0.
double path_loss_db(double distance_km, double intercept_db = 148.1,
                    double slope = 37.6);

std::vector<Point> bs_layout(int num_bs, double square_side);

PilotSets assign_pilots(int num_users, int pilot_length, PilotPolicy policy);

/// MMSE estimate variance per (BS, user):
///   theta = p_k tau_p beta^2 / (tau_p sum_{t in P_k} p_t beta_t + sigma_ul^2)
Eigen::MatrixXd estimation_quality(const Eigen::MatrixXd& beta,
                                   const std::vector<double>& pilot_powers,
                                   const PilotSets& pilot_sets, int pilot_length,
                                   double ul_noise);

/// Draws a full network drop. Pure function of (config, seed).
NetworkRealization generate_network(const NetworkConfig& config,
                                    std::uint64_t seed);

/// Builds a realization from explicit large-scale fading; theta and pilot
/// sets are derived from the config. Positions are left empty.
NetworkRealization realization_from_beta(const NetworkConfig& config,
                                         const Eigen::MatrixXd& beta);

}  // namespace mmimo

#endif  // MMIMO_SYSTEM_MODEL_HPP_
