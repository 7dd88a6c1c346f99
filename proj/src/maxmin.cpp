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

#include "mmimo/maxmin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mmimo/power_min.hpp"

namespace mmimo {

Eigen::VectorXd resolve_weights(const std::vector<double>& weights, int num_users) {
  if (weights.empty()) return Eigen::VectorXd::Ones(num_users);
  if (static_cast<int>(weights.size()) != num_users) {
    throw std::invalid_argument("max-min: need one weight per user");
  }
  Eigen::VectorXd w(num_users);
  for (int k = 0; k < num_users; ++k) {
    if (!(weights[k] > 0.0)) throw std::invalid_argument("max-min: weights must be positive");
    w(k) = weights[k];
  }
  return w;
}

int bisection_iterations(double xi0, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("bisection: delta must be positive");
  if (xi0 <= delta) return 0;
  return static_cast<int>(std::ceil(std::log2(xi0 / delta)));
}

MaxMinResult bisect_maxmin(double xi0, const Eigen::VectorXd& weights,
                           const FeasibilityOracle& feasible,
                           const MaxMinOptions& options, int num_bs,
                           int num_users) {
  if (!(options.delta > 0.0)) throw std::invalid_argument("bisection: delta must be positive");
  if (!(xi0 > 0.0)) throw std::invalid_argument("bisection: xi0 must be positive");
  MaxMinResult result;
  result.allocation = PowerAllocation::zeros(num_bs, num_users);

  int widenings = 0;
  double lower = 0.0;
  while (true) {
    auto at_top = feasible(weights * xi0);
    if (!at_top) {
      result.xi0_certified = true;
      break;
    }
    std::ostringstream msg;
    msg << "upper end " << xi0 << " bit/symbol is feasible; doubling the range";
    result.warnings.push_back(msg.str());
    lower = xi0;
    result.allocation = *at_top;
    xi0 *= 2.0;
    if (++widenings > options.max_widenings) {
      result.warnings.push_back("giving up on widening; range left uncertified");
      break;
    }
  }
  result.xi0 = xi0;

  double upper = xi0;
  while (upper - lower > options.delta) {
    const double mid = 0.5 * (lower + upper);
    if (auto alloc = feasible(weights * mid)) {
      lower = mid;
      result.allocation = std::move(*alloc);
    } else {
      upper = mid;
    }
    ++result.iterations;
  }
  result.xi_lower = lower;
  result.xi_upper = upper;
  return result;
}

double upper_bound_xi0(const NetworkRealization& net, Precoding scheme,
                       const std::vector<double>& weights) {
  const NetworkConfig& cfg = net.config;
  const int K = net.num_users();
  const Eigen::VectorXd w = resolve_weights(weights, K);
  const double gain = array_gain(cfg, scheme);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < K; ++k) {
    double snr_cap;
    if (scheme == Precoding::mrt) {
      snr_cap = gain;
    } else {
      snr_cap = gain * cfg.pilot_power[k] * cfg.pilot_length / cfg.ul_noise *
                net.beta.col(k).sum();
    }
    best = std::min(best, std::log2(1.0 + snr_cap) / w(k));
  }
  return cfg.prelog() * best;
}

MaxMinResult maxmin_bisection(const NetworkRealization& net, Precoding scheme,
                              const MaxMinOptions& options) {
  const int K = net.num_users();
  const Eigen::VectorXd w = resolve_weights(options.weights, K);
  const double prelog = net.config.prelog();
  FeasibilityOracle oracle =
      [&](const Eigen::VectorXd& xi) -> std::optional<PowerAllocation> {
    PowerMinResult r =
        solve_powermin(net, SinrTargets::from_qos(xi, prelog), scheme, options.allowed);
    if (!r.feasible()) return std::nullopt;
    return r.allocation;
  };
  return bisect_maxmin(upper_bound_xi0(net, scheme, options.weights), w, oracle,
                       options, net.num_bs(), K);
}

double min_weighted_rate(const NetworkRealization& net, const PowerAllocation& rho,
                         Precoding scheme, const std::vector<double>& weights) {
  const Eigen::VectorXd w = resolve_weights(weights, net.num_users());
  const Eigen::VectorXd sinr = sinr_closed_form(net, rho, net.config.dl_noise, scheme);
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < net.num_users(); ++k) {
    worst = std::min(worst, rate_from_sinr(std::max(0.0, sinr(k)), net.config.prelog()) / w(k));
  }
  return worst;
}

}  // namespace mmimo
