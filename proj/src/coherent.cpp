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

#include "mmimo/coherent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace mmimo {

namespace {

struct Coefficients {
  Eigen::MatrixXd gain;          // g
  Eigen::MatrixXd interference;  // z
};

Coefficients coefficients(const NetworkRealization& net, Precoding scheme) {
  const double a = array_gain(net.config, scheme);
  Coefficients c;
  c.gain = a * net.theta;
  c.interference =
      scheme == Precoding::mrt ? net.beta : Eigen::MatrixXd(net.beta - net.theta);
  return c;
}

bool shares_pilot(const PilotSets& sets, int k, int t) {
  return t != k && std::find(sets[k].begin(), sets[k].end(), t) != sets[k].end();
}

}  // namespace

Eigen::VectorXd coherent_sinr(const NetworkRealization& net,
                              const PowerAllocation& rho, Precoding scheme,
                              double dl_noise) {
  const int L = net.num_bs();
  const int K = net.num_users();
  if (rho.rho.rows() != L || rho.rho.cols() != K) {
    throw std::invalid_argument("coherent_sinr: allocation does not match network");
  }
  if ((rho.rho.array() < 0.0).any()) {
    throw std::invalid_argument("coherent_sinr: powers must be >= 0");
  }
  const Coefficients c = coefficients(net, scheme);
  const Eigen::VectorXd per_bs = rho.rho.rowwise().sum();
  Eigen::VectorXd sinr(K);
  for (int k = 0; k < K; ++k) {
    double amplitude = 0.0;
    double denom = dl_noise;
    for (int i = 0; i < L; ++i) {
      amplitude += std::sqrt(rho.rho(i, k) * c.gain(i, k));
      denom += per_bs(i) * c.interference(i, k);
      for (int t = 0; t < K; ++t) {
        if (shares_pilot(net.pilot_sets, k, t)) denom += rho.rho(i, t) * c.gain(i, k);
      }
    }
    sinr(k) = amplitude * amplitude / denom;
  }
  return sinr;
}

SocProgram build_coherent_socp(const NetworkRealization& net,
                               const SinrTargets& targets, Precoding scheme) {
  const int L = net.num_bs();
  const int K = net.num_users();
  const int n = L * K;
  if (targets.xi_hat.size() != K) {
    throw std::invalid_argument("coherent: need one SINR target per user");
  }
  const Coefficients c = coefficients(net, scheme);
  const double sigma = std::sqrt(net.config.dl_noise);

  SocProgram p;
  p.quad.resize(n);
  for (int i = 0; i < L; ++i) {
    for (int t = 0; t < K; ++t) p.quad(i * K + t) = net.config.amp_efficiency[i];
  }
  p.linear = Eigen::VectorXd::Zero(n);

  for (int k = 0; k < K; ++k) {
    const double target = targets.xi_hat(k);
    if (!(target >= 0.0) || !std::isfinite(target)) {
      throw std::invalid_argument("coherent: SINR targets must be finite and >= 0");
    }
    if (target == 0.0) continue;
    const double root = std::sqrt(target);
    std::vector<Eigen::Triplet<double>> entries;
    int row = 0;
    for (int i = 0; i < L; ++i) {
      for (int t = 0; t < K; ++t) {
        if (shares_pilot(net.pilot_sets, k, t)) {
          entries.emplace_back(row++, i * K + t, root * std::sqrt(c.gain(i, k)) / sigma);
        }
      }
    }
    for (int i = 0; i < L; ++i) {
      for (int t = 0; t < K; ++t) {
        entries.emplace_back(row++, i * K + t,
                             root * std::sqrt(c.interference(i, k)) / sigma);
      }
    }
    SocCone cone;
    cone.A.resize(row + 1, n);
    cone.A.setFromTriplets(entries.begin(), entries.end());
    cone.b = Eigen::VectorXd::Zero(row + 1);
    cone.b(row) = root;
    cone.c = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < L; ++i) cone.c(i * K + k) = std::sqrt(c.gain(i, k)) / sigma;
    p.cones.push_back(std::move(cone));
  }
  for (int i = 0; i < L; ++i) {
    std::vector<Eigen::Triplet<double>> entries;
    for (int t = 0; t < K; ++t) entries.emplace_back(t, i * K + t, 1.0);
    SocCone cone;
    cone.A.resize(K, n);
    cone.A.setFromTriplets(entries.begin(), entries.end());
    cone.b = Eigen::VectorXd::Zero(K);
    cone.c = Eigen::VectorXd::Zero(n);
    cone.d = std::sqrt(net.config.max_power[i]);
    p.cones.push_back(std::move(cone));
  }
  return p;
}

CoherentResult solve_coherent_powermin(const NetworkRealization& net,
                                       const SinrTargets& targets, Precoding scheme,
                                       const SocOptions& options) {
  const int L = net.num_bs();
  const int K = net.num_users();
  CoherentResult result;
  result.allocation = PowerAllocation::zeros(L, K);
  if ((targets.xi_hat.array() == 0.0).all()) {
    result.status = SocStatus::optimal;
    return result;
  }
  const SocProgram program = build_coherent_socp(net, targets, scheme);
  const SocSolution sol = solve_soc(program, options);
  result.status = sol.status;
  result.newton_steps = sol.newton_steps;
  result.certificate = sol.certificate;
  if (sol.status != SocStatus::optimal) return result;

  // Flipping signs keeps every cone satisfied and the objective unchanged.
  for (int i = 0; i < L; ++i) {
    for (int t = 0; t < K; ++t) {
      const double u = std::abs(sol.x(i * K + t));
      result.allocation.rho(i, t) = u * u;
    }
  }
  result.objective = result.allocation.consumed(net.config.amp_efficiency);
  const Eigen::VectorXd sinr =
      coherent_sinr(net, result.allocation, scheme, net.config.dl_noise);
  for (int k = 0; k < K; ++k) {
    if (targets.xi_hat(k) <= 0.0) continue;
    result.target_shortfall = std::max(
        result.target_shortfall, (targets.xi_hat(k) - sinr(k)) / targets.xi_hat(k));
  }
  return result;
}

double coherent_upper_bound_xi0(const NetworkRealization& net, Precoding scheme,
                                const std::vector<double>& weights) {
  if (scheme == Precoding::zf) return upper_bound_xi0(net, scheme, weights);
  const Eigen::VectorXd w = resolve_weights(weights, net.num_users());
  const double cap = std::log2(1.0 + static_cast<double>(net.num_bs()) *
                                         net.config.antennas_per_bs);
  return net.config.prelog() * cap / w.maxCoeff();
}

MaxMinResult coherent_maxmin(const NetworkRealization& net, Precoding scheme,
                             const MaxMinOptions& options) {
  if (options.allowed.size() != 0) {
    throw std::invalid_argument("coherent_maxmin: association masks are not supported");
  }
  const int K = net.num_users();
  const Eigen::VectorXd w = resolve_weights(options.weights, K);
  const double prelog = net.config.prelog();
  FeasibilityOracle oracle =
      [&](const Eigen::VectorXd& xi) -> std::optional<PowerAllocation> {
    const CoherentResult r =
        solve_coherent_powermin(net, SinrTargets::from_qos(xi, prelog), scheme);
    if (r.status == SocStatus::iteration_limit) {
      throw std::runtime_error("coherent power minimization hit the iteration limit");
    }
    if (!r.feasible()) return std::nullopt;
    return r.allocation;
  };
  return bisect_maxmin(coherent_upper_bound_xi0(net, scheme, options.weights), w,
                       oracle, options, net.num_bs(), K);
}

}  // namespace mmimo
