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

#ifndef MMIMO_POWER_MIN_HPP_
#define MMIMO_POWER_MIN_HPP_

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mmimo/lp.hpp"
#include "mmimo/se_bounds.hpp"
#include "mmimo/system_model.hpp"

namespace mmimo {

/// allowed(i, k) == false pins rho_{i,k} to zero; an empty mask allows all.
using AssociationMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Data of the total-power minimization LP for one precoding scheme.
///
/// Column (i, k) of each L x K matrix holds the coefficient of BS i in the
/// QoS row of user k:
///   contamination = gain * theta    (applied to pilot-sharing users)
///   interference  = beta or beta - theta
///   signal        = gain * theta    (divided by the SINR target)
/// where gain is M for MRT and M - K for ZF.
struct PowerMinInstance {
  Precoding scheme = Precoding::mrt;
  Eigen::MatrixXd contamination;
  Eigen::MatrixXd interference;
  Eigen::MatrixXd signal;
  Eigen::VectorXd xi_hat;
  Eigen::VectorXd amp_efficiency;
  Eigen::VectorXd max_power;
  double dl_noise = 0.0;
  PilotSets pilot_sets;
  AssociationMask allowed;

  int num_bs() const { return static_cast<int>(signal.rows()); }
  int num_users() const { return static_cast<int>(signal.cols()); }
  bool is_allowed(int bs, int user) const {
    return allowed.size() == 0 || allowed(bs, user);
  }

  /// Coefficients from the network; Delta, P_max and the DL noise come from
  /// net.config. Throws std::invalid_argument for ZF with M < K + 1.
  static PowerMinInstance from_network(const NetworkRealization& net,
                                       const SinrTargets& targets,
                                       Precoding scheme);
};

/// The LP together with the (bs, user) pair behind every column.
///
/// Unmasked variables are ordered rho_{1,1..K}, ..., rho_{L,1..K}. Rows
/// 0..K-1 are the QoS rows, rows K..K+L-1 the per-BS power rows.
struct PowerMinLp {
  LinearProgram lp;
  std::vector<std::pair<int, int>> columns;
};

/// QoS row of user k:
///   sum_{t in P_k\k} contamination_k^T rho_t + sum_t interference_k^T rho_t
///     - (signal_k / xi_hat_k)^T rho_k <= -sigma^2.
/// A zero target turns the row into -signal_k^T rho_k <= 0.
PowerMinLp build_powermin_lp(const PowerMinInstance& instance);
PowerMinLp build_powermin_lp(const NetworkRealization& net,
                             const SinrTargets& targets, Precoding scheme);

/// Serving BSs and the nonnegative multipliers of an optimal solve.
struct AssociationResult {
  std::vector<std::vector<int>> serving_sets;
  Eigen::VectorXd qos_multipliers;    // one per user, >= 0
  Eigen::VectorXd power_multipliers;  // one per BS, >= 0
  /// Per-(BS, user) association score; the minimum over BSs of column t
  /// equals the QoS multiplier of user t. Infinite for masked pairs.
  Eigen::MatrixXd scores;
};

struct PowerMinResult {
  LpStatus status = LpStatus::infeasible;
  PowerAllocation allocation;
  AssociationResult association;
  double objective = 0.0;
  /// max_k (xi_hat_k - sinr_k) / xi_hat_k from the closed-form SINR; only
  /// set by the network overload.
  double target_shortfall = 0.0;
  LpSolution lp_solution;

  bool feasible() const { return status == LpStatus::optimal; }
};

constexpr double kAssociationThreshold = 1e-9;  // W

PowerMinResult solve_powermin(const PowerMinInstance& instance,
                              const LpOptions& options = {});

/// Solves and re-evaluates the allocation through sinr_closed_form().
PowerMinResult solve_powermin(
    const NetworkRealization& net, const SinrTargets& targets, Precoding scheme,
    const AssociationMask& allowed = {},
    const LpOptions& options = {});

/// Keeps only the BS with the largest beta for every user.
AssociationMask max_snr_mask(const NetworkRealization& net);

/// S_t = { i : rho_{i,t} > threshold }.
std::vector<std::vector<int>> extract_association(
    const PowerAllocation& rho, double threshold = kAssociationThreshold);

/// Score of BS i for user t:
///   (Delta_i + sum_{k : t in P_k\k} lambda_k contamination_{i,k}
///      + sum_k lambda_k interference_{i,k} + mu_i) / (signal_{i,t} / xi_hat_t)
Eigen::MatrixXd association_scores(const PowerMinInstance& instance,
                                   const Eigen::VectorXd& qos_multipliers,
                                   const Eigen::VectorXd& power_multipliers);

struct AssociationCheck {
  bool ok = true;
  double max_relative_gap = 0.0;
  std::vector<std::pair<int, int>> violations;  // (bs, user)
  Eigen::MatrixXd scores;

  std::string describe() const;
};

/// The per-user minimum score must equal lambda_t, and every served pair
/// (rho > rho_threshold) must reach that minimum, both within rel_tol.
/// Users with a zero target are skipped.
AssociationCheck association_rule_check(const PowerMinInstance& instance,
                                        const Eigen::VectorXd& qos_multipliers,
                                        const Eigen::VectorXd& power_multipliers,
                                        const PowerAllocation& rho,
                                        double rel_tol = 1e-6,
                                        double rho_threshold = kAssociationThreshold);

}  // namespace mmimo

#endif  // MMIMO_POWER_MIN_HPP_
