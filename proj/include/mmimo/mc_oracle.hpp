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

#ifndef MMIMO_MC_ORACLE_HPP_
#define MMIMO_MC_ORACLE_HPP_

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "mmimo/se_bounds.hpp"
#include "mmimo/system_model.hpp"

namespace mmimo {

// Monte Carlo model of one coherence block: Rayleigh channels
// h_{l,k} ~ CN(0, beta_{l,k} I_M), the pilot observation
//   y_{l,k} = tau_p sum_{t in P_k} sqrt(p_t) h_{l,t} + n,  n ~ CN(0, tau_p sigma_ul^2 I_M)
// (one noise draw per pilot and BS) and the MMSE estimate
//   hhat_{l,k} = sqrt(p_k) beta_{l,k} / (tau_p sum_{t in P_k} p_t beta_{l,t} + sigma_ul^2) y_{l,k}.
//
// Samples are drawn in streams of kSamplesPerStream; stream j uses its own
// generator seeded from (seed, j), so any sample is reproducible no matter
// how streams are scheduled.

constexpr int kSamplesPerStream = 1024;

struct ChannelSample {
  std::vector<Eigen::MatrixXcd> channel;   // per BS, M x K
  std::vector<Eigen::MatrixXcd> estimate;  // per BS, M x K

  /// Estimation error hhat - h of BS `bs`.
  Eigen::MatrixXcd error(int bs) const { return estimate[bs] - channel[bs]; }
};

struct ChannelBatch {
  std::vector<ChannelSample> samples;
  int size() const { return static_cast<int>(samples.size()); }
};

ChannelBatch sample_pilot_pipeline(const NetworkRealization& net, int num_samples,
                                   std::uint64_t seed);

/// Raised when a ZF Gram matrix cannot be inverted.
class RankDeficientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precoders of one BS, M x K, column t is w_{bs,t}:
///   MRT: hhat_t / sqrt(M theta_t)
///   ZF:  sqrt((M - K) theta_t) Hhat (Hhat^H Hhat)^{-1} e_t
/// ZF needs M >= K + 1 and distinct pilots for every user (shared pilots
/// make the estimates collinear); otherwise std::invalid_argument.
Eigen::MatrixXcd precoders(const NetworkRealization& net, int bs,
                           const Eigen::MatrixXcd& estimate, Precoding scheme);

/// precoders[sample][bs].
std::vector<std::vector<Eigen::MatrixXcd>> build_precoders(
    const NetworkRealization& net, const ChannelBatch& batch, Precoding scheme);

/// Sample means of h^H w and |h^H w|^2 with their standard errors.
struct EmpiricalGainStatistics {
  Precoding scheme = Precoding::mrt;
  long num_samples = 0;
  GainStatistics mean;
  /// sqrt(E|x - E x|^2 / N) for the complex mean gains.
  Eigen::MatrixXd mean_gain_std_error;
  std::vector<Eigen::MatrixXd> second_moment_std_error;
  /// Statistics of disjoint sample groups, used for jackknife errors.
  std::vector<GainStatistics> group_means;
  std::vector<long> group_sizes;
};

struct McOptions {
  long num_samples = 100000;
  int num_groups = 20;
  /// OpenMP across streams. Results are bitwise identical either way.
  bool parallel = true;
};

/// Streams num_samples draws without storing them. One entry per scheme,
/// all computed from the same channel draws.
std::vector<EmpiricalGainStatistics> empirical_gain_statistics(
    const NetworkRealization& net, const std::vector<Precoding>& schemes,
    std::uint64_t seed, const McOptions& options = {});

/// Statistics of a stored batch (single group).
EmpiricalGainStatistics empirical_gain_statistics(const NetworkRealization& net,
                                                  const ChannelBatch& batch,
                                                  Precoding scheme);

struct SinrEstimate {
  Eigen::VectorXd sinr;
  Eigen::VectorXd std_error;  // grouped jackknife
};

/// sinr_general() on the empirical statistics, with jackknife errors.
SinrEstimate empirical_sinr(const EmpiricalGainStatistics& stats,
                            const PowerAllocation& rho, double dl_noise);

}  // namespace mmimo

#endif  // MMIMO_MC_ORACLE_HPP_
