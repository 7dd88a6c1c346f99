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

#ifndef MMIMO_SE_BOUNDS_HPP_
#define MMIMO_SE_BOUNDS_HPP_

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "mmimo/system_model.hpp"

namespace mmimo {

enum class Precoding { mrt, zf };

std::string to_string(Precoding scheme);
Precoding precoding_from_string(const std::string& name);

/// Expectation terms of the downlink SINR bounds for one network.
///
/// mean_gain(i, k) = E{h_{i,k}^H w_{i,k}};
/// second_moment[i](k, t) = E{|h_{i,k}^H w_{i,t}|^2}.
struct GainStatistics {
  Eigen::MatrixXcd mean_gain;
  std::vector<Eigen::MatrixXd> second_moment;

  int num_bs() const { return static_cast<int>(mean_gain.rows()); }
  int num_users() const { return static_cast<int>(mean_gain.cols()); }

  /// Shape checks plus E|x|^2 >= |E x|^2 on the diagonal, up to `rel_tol`.
  void validate(double rel_tol = 1e-12) const;
};

/// Per-BS per-user downlink powers in W (num_bs x num_users).
struct PowerAllocation {
  Eigen::MatrixXd rho;

  static PowerAllocation zeros(int num_bs, int num_users) {
    return {Eigen::MatrixXd::Zero(num_bs, num_users)};
  }
  double total() const { return rho.sum(); }
  Eigen::VectorXd per_bs() const { return rho.rowwise().sum(); }
  /// Sum_i delta_i * sum_t rho_{i,t}.
  double consumed(const std::vector<double>& amp_efficiency) const;
  bool within_budget(const std::vector<double>& max_power,
                     double rel_tol = 1e-9) const;
};

/// Per-user QoS targets (bit/symbol) and the equivalent SINR targets.
struct SinrTargets {
  Eigen::VectorXd xi;
  Eigen::VectorXd xi_hat;

  static SinrTargets from_qos(const Eigen::VectorXd& xi, double prelog);
  static SinrTargets uniform(int num_users, double xi, double prelog);
};

/// prelog * log2(1 + sinr) with prelog = gamma_DL (1 - tau_p / tau_c).
double rate_from_sinr(double sinr, double prelog);
double rate_from_sinr(double sinr, double dl_fraction, int pilot_length,
                      int coherence_length);
/// Inverse of rate_from_sinr: 2^(rate / prelog) - 1.
double sinr_from_rate(double rate, double prelog);

/// Effective SINR of the sum-SE bound with successive decoding over BSs.
Eigen::VectorXd sinr_general(const GainStatistics& stats,
                             const PowerAllocation& rho, double dl_noise);

/// SINR of the stream from BS `bs` to `user` when the user cancels the BSs
/// preceding `bs` in `decoding_order` (identity order when empty).
double sinr_per_bs(const GainStatistics& stats, const PowerAllocation& rho,
                   double dl_noise, int user, int bs,
                   const std::vector<int>& decoding_order = {});

/// Closed-form SINR under Rayleigh fading with MRT precoding.
Eigen::VectorXd sinr_mrt(const NetworkRealization& net,
                         const PowerAllocation& rho, double dl_noise);

/// Closed-form SINR under Rayleigh fading with ZF precoding. Needs M >= K + 1.
Eigen::VectorXd sinr_zf(const NetworkRealization& net,
                        const PowerAllocation& rho, double dl_noise);

Eigen::VectorXd sinr_closed_form(const NetworkRealization& net,
                                 const PowerAllocation& rho, double dl_noise,
                                 Precoding scheme);

/// Analytic expectation terms for MRT/ZF; sinr_general() of this equals the
/// closed forms above.
GainStatistics closed_form_gain_statistics(const NetworkRealization& net,
                                           Precoding scheme);

/// Array gain factor: M for MRT, M - K for ZF.
double array_gain(const NetworkConfig& config, Precoding scheme);

/// Marker for users whose SINR grows without bound in M (no contaminating
/// user transmits).
struct UnboundedSinr {};
using AsymptoticSinr = std::variant<double, UnboundedSinr>;

/// Large-antenna limit of the MRT/ZF SINR, per user.
std::vector<AsymptoticSinr> sinr_asymptotic(const NetworkRealization& net,
                                            const PowerAllocation& rho);

}  // namespace mmimo

#endif  // MMIMO_SE_BOUNDS_HPP_
