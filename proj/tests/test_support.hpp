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

#ifndef MMIMO_TESTS_TEST_SUPPORT_HPP_
#define MMIMO_TESTS_TEST_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "mmimo/lp.hpp"
#include "mmimo/se_bounds.hpp"
#include "mmimo/system_model.hpp"
#include "mmimo/units.hpp"

namespace mmimo::testing {

// One BS, one user: beta = 1e-10, p = 0.2 W, tau_p = 1, -96 dBm noise on
// both links. theta comes out at ~9.876e-11.
inline NetworkConfig single_link_config(int antennas = 100) {
  NetworkConfig cfg = NetworkConfig::defaults(1, antennas, 1);
  cfg.pilot_length = 1;
  return cfg;
}

inline NetworkRealization single_link(int antennas = 100, double beta = 1e-10) {
  return realization_from_beta(single_link_config(antennas),
                               Eigen::MatrixXd::Constant(1, 1, beta));
}

/// Random well-formed expectation tables (second moments dominate the
/// squared means).
inline GainStatistics random_gain_statistics(int L, int K, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  GainStatistics s;
  s.mean_gain.resize(L, K);
  s.second_moment.assign(L, Eigen::MatrixXd(K, K));
  for (int i = 0; i < L; ++i) {
    for (int k = 0; k < K; ++k) {
      s.mean_gain(i, k) = {normal(rng), normal(rng)};
      for (int t = 0; t < K; ++t) s.second_moment[i](k, t) = 2.0 * unit(rng);
      s.second_moment[i](k, k) = std::norm(s.mean_gain(i, k)) * (1.0 + unit(rng));
    }
  }
  return s;
}

inline PowerAllocation random_allocation(int L, int K, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PowerAllocation rho = PowerAllocation::zeros(L, K);
  for (int i = 0; i < L; ++i) {
    for (int k = 0; k < K; ++k) rho.rho(i, k) = unit(rng);
  }
  return rho;
}

/// Feasible, bounded random LP: a row of ones caps the sum of x and b is
/// built around a nonnegative interior point.
inline LinearProgram random_bounded_lp(int rows, int cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  LinearProgram lp;
  lp.A.resize(rows, cols);
  lp.b.resize(rows);
  lp.c.resize(cols);
  Eigen::VectorXd x0(cols);
  for (int j = 0; j < cols; ++j) {
    x0(j) = unit(rng);
    lp.c(j) = sym(rng);
  }
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) lp.A(i, j) = i == 0 ? 1.0 : sym(rng);
  }
  lp.b = lp.A * x0 + Eigen::VectorXd::NullaryExpr(rows, [&] { return unit(rng); });
  return lp;
}

inline double relative_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

}  // namespace mmimo::testing

#endif  // MMIMO_TESTS_TEST_SUPPORT_HPP_
