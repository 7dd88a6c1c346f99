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

#ifndef MMIMO_MAXMIN_HPP_
#define MMIMO_MAXMIN_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mmimo/se_bounds.hpp"
#include "mmimo/system_model.hpp"

namespace mmimo {

/// Final bisection interval for the weighted max-min QoS level, in
/// bit/symbol. The allocation meets xi_k = w_k * xi_lower.
struct MaxMinResult {
  double xi_lower = 0.0;
  double xi_upper = 0.0;
  PowerAllocation allocation;
  int iterations = 0;
  /// Initial upper end of the search range (after any widening).
  double xi0 = 0.0;
  /// True when xi0 itself was checked to be infeasible.
  bool xi0_certified = false;
  std::vector<std::string> warnings;
};

struct MaxMinOptions {
  double delta = 0.01;
  /// Per-user weights; empty means all ones.
  std::vector<double> weights;
  /// Widening steps allowed when xi0 turns out feasible.
  int max_widenings = 8;
  /// Restricts the serving BSs (non-coherent only); empty allows all.
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> allowed;
};

/// Returns a feasible allocation for per-user QoS targets xi, or nothing.
using FeasibilityOracle =
    std::function<std::optional<PowerAllocation>(const Eigen::VectorXd& xi)>;

/// Bisection on [0, xi0] with targets w * xi. Checks xi0 first; if it is
/// feasible the range is doubled (with a warning) until it is not.
/// Without widening this takes exactly ceil(log2(xi0 / delta)) midpoint
/// solves.
MaxMinResult bisect_maxmin(double xi0, const Eigen::VectorXd& weights,
                           const FeasibilityOracle& feasible,
                           const MaxMinOptions& options, int num_bs,
                           int num_users);

/// ceil(log2(xi0 / delta)), and 0 when xi0 <= delta.
int bisection_iterations(double xi0, double delta);

Eigen::VectorXd resolve_weights(const std::vector<double>& weights, int num_users);

/// Search-range upper end:
///   MRT: prelog * min_k log2(1 + M) / w_k
///   ZF:  prelog * min_k log2(1 + (M - K) p_k tau_p / sigma_ul^2
///                                  * sum_i beta_{i,k}) / w_k
double upper_bound_xi0(const NetworkRealization& net, Precoding scheme,
                       const std::vector<double>& weights = {});

/// Max-min QoS with the power-minimization LP as feasibility oracle.
MaxMinResult maxmin_bisection(const NetworkRealization& net, Precoding scheme,
                              const MaxMinOptions& options = {});

/// min_k R_k / w_k of an allocation under the closed-form SINR.
double min_weighted_rate(const NetworkRealization& net, const PowerAllocation& rho,
                         Precoding scheme, const std::vector<double>& weights = {});

}  // namespace mmimo

#endif  // MMIMO_MAXMIN_HPP_
