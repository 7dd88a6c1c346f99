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

#ifndef MMIMO_COHERENT_HPP_
#define MMIMO_COHERENT_HPP_

#include <Eigen/Dense>

#include "mmimo/maxmin.hpp"
#include "mmimo/se_bounds.hpp"
#include "mmimo/socp.hpp"
#include "mmimo/system_model.hpp"

namespace mmimo {

// Coherent joint transmission: all serving BSs send the same symbol, so the
// desired amplitudes add before squaring.
//
//   sinr_k = (sum_i sqrt(rho_ik g_ik))^2 /
//            (sum_i sum_{t in P_k\k} rho_it g_ik + sum_i sum_t rho_it z_ik + sigma^2)
//
// with g = M theta, z = beta for MRT and g = (M - K) theta, z = beta - theta
// for ZF.

Eigen::VectorXd coherent_sinr(const NetworkRealization& net,
                              const PowerAllocation& rho, Precoding scheme,
                              double dl_noise);

/// Power minimization in amplitudes u_{i,t} = sqrt(rho_{i,t}), variable
/// index i * K + t. One cone per user with a positive target (scaled by
/// 1/sigma) and one cone ||u_i|| <= sqrt(P_max,i) per BS.
SocProgram build_coherent_socp(const NetworkRealization& net,
                               const SinrTargets& targets, Precoding scheme);

struct CoherentResult {
  SocStatus status = SocStatus::infeasible;
  PowerAllocation allocation;
  double objective = 0.0;
  SocCertificate certificate;
  /// max_k (xi_hat_k - sinr_k) / xi_hat_k under coherent_sinr().
  double target_shortfall = 0.0;
  int newton_steps = 0;

  bool feasible() const { return status == SocStatus::optimal; }
};

CoherentResult solve_coherent_powermin(const NetworkRealization& net,
                                       const SinrTargets& targets, Precoding scheme,
                                       const SocOptions& options = {});

/// Search-range upper end for coherent max-min:
///   MRT: prelog * min_k log2(1 + L M) / w_k
///   ZF:  same as the non-coherent bound.
double coherent_upper_bound_xi0(const NetworkRealization& net, Precoding scheme,
                                const std::vector<double>& weights = {});

MaxMinResult coherent_maxmin(const NetworkRealization& net, Precoding scheme,
                             const MaxMinOptions& options = {});

}  // namespace mmimo

#endif  // MMIMO_COHERENT_HPP_
