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

#include "mmimo/power_min.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mmimo {

PowerMinInstance PowerMinInstance::from_network(const NetworkRealization& net,
                                                const SinrTargets& targets,
                                                Precoding scheme) {
  const int L = net.num_bs();
  if (targets.xi_hat.size() != net.num_users()) {
    throw std::invalid_argument("power-min: need one SINR target per user");
  }
  if (!targets.xi_hat.allFinite() || (targets.xi_hat.array() < 0.0).any()) {
    throw std::invalid_argument("power-min: SINR targets must be finite and >= 0");
  }
  const double gain = array_gain(net.config, scheme);
  PowerMinInstance inst;
  inst.scheme = scheme;
  inst.signal = gain * net.theta;
  inst.contamination = inst.signal;
  inst.interference =
      scheme == Precoding::mrt ? net.beta : Eigen::MatrixXd(net.beta - net.theta);
  inst.xi_hat = targets.xi_hat;
  inst.amp_efficiency = Eigen::Map<const Eigen::VectorXd>(
      net.config.amp_efficiency.data(), L);
  inst.max_power = Eigen::Map<const Eigen::VectorXd>(net.config.max_power.data(), L);
  inst.dl_noise = net.config.dl_noise;
  inst.pilot_sets = net.pilot_sets;
  return inst;
}

PowerMinLp build_powermin_lp(const PowerMinInstance& inst) {
  const int L = inst.num_bs();
  const int K = inst.num_users();
  if (inst.xi_hat.size() != K || inst.interference.rows() != L ||
      inst.interference.cols() != K || inst.contamination.rows() != L ||
      inst.contamination.cols() != K || inst.amp_efficiency.size() != L ||
      inst.max_power.size() != L || static_cast<int>(inst.pilot_sets.size()) != K) {
    throw std::invalid_argument("build_powermin_lp: inconsistent instance dimensions");
  }
  if (inst.allowed.size() != 0 && (inst.allowed.rows() != L || inst.allowed.cols() != K)) {
    throw std::invalid_argument("build_powermin_lp: mask must be L x K");
  }

  PowerMinLp out;
  std::vector<int> column_of(static_cast<std::size_t>(L) * K, -1);
  for (int i = 0; i < L; ++i) {
    for (int t = 0; t < K; ++t) {
      if (!inst.is_allowed(i, t)) continue;
      column_of[i * K + t] = static_cast<int>(out.columns.size());
      out.columns.emplace_back(i, t);
    }
  }
  const int n = static_cast<int>(out.columns.size());
  LinearProgram& lp = out.lp;
  lp.c.resize(n);
  lp.A = Eigen::MatrixXd::Zero(K + L, n);
  lp.b.resize(K + L);

  for (int j = 0; j < n; ++j) lp.c(j) = inst.amp_efficiency(out.columns[j].first);

  for (int k = 0; k < K; ++k) {
    const double target = inst.xi_hat(k);
    if (target == 0.0) {
      for (int i = 0; i < L; ++i) {
        const int j = column_of[i * K + k];
        if (j >= 0) lp.A(k, j) = -inst.signal(i, k);
      }
      lp.b(k) = 0.0;
      continue;
    }
    for (int j = 0; j < n; ++j) {
      const auto [i, t] = out.columns[j];
      double a = inst.interference(i, k);
      if (t == k) {
        a -= inst.signal(i, k) / target;
      } else if (std::find(inst.pilot_sets[k].begin(), inst.pilot_sets[k].end(), t) !=
                 inst.pilot_sets[k].end()) {
        a += inst.contamination(i, k);
      }
      lp.A(k, j) = a;
    }
    lp.b(k) = -inst.dl_noise;
  }
  for (int j = 0; j < n; ++j) lp.A(K + out.columns[j].first, j) = 1.0;
  lp.b.tail(L) = inst.max_power;
  return out;
}

PowerMinLp build_powermin_lp(const NetworkRealization& net,
                             const SinrTargets& targets, Precoding scheme) {
  return build_powermin_lp(PowerMinInstance::from_network(net, targets, scheme));
}

PowerMinResult solve_powermin(const PowerMinInstance& inst,
                              const LpOptions& options) {
  const int L = inst.num_bs();
  const int K = inst.num_users();
  const PowerMinLp built = build_powermin_lp(inst);

  PowerMinResult result;
  result.allocation = PowerAllocation::zeros(L, K);
  result.lp_solution = solve_lp(built.lp, options);
  result.status = result.lp_solution.status;
  if (!result.feasible()) return result;

  const LpSolution& sol = result.lp_solution;
  for (std::size_t j = 0; j < built.columns.size(); ++j) {
    result.allocation.rho(built.columns[j].first, built.columns[j].second) = sol.x(j);
  }
  result.objective = sol.objective;

  // y <= 0 by the solver convention; the multipliers are its negation.
  AssociationResult& assoc = result.association;
  assoc.qos_multipliers = -sol.y.head(K);
  assoc.power_multipliers = -sol.y.tail(L);
  for (int k = 0; k < K; ++k) {
    if (inst.xi_hat(k) == 0.0) assoc.qos_multipliers(k) = 0.0;
  }
  assoc.serving_sets = extract_association(result.allocation);
  assoc.scores =
      association_scores(inst, assoc.qos_multipliers, assoc.power_multipliers);
  return result;
}

PowerMinResult solve_powermin(
    const NetworkRealization& net, const SinrTargets& targets, Precoding scheme,
    const AssociationMask& allowed,
    const LpOptions& options) {
  PowerMinInstance inst = PowerMinInstance::from_network(net, targets, scheme);
  inst.allowed = allowed;
  PowerMinResult result = solve_powermin(inst, options);
  if (!result.feasible()) return result;
  const Eigen::VectorXd sinr =
      sinr_closed_form(net, result.allocation, net.config.dl_noise, scheme);
  for (int k = 0; k < net.num_users(); ++k) {
    if (targets.xi_hat(k) <= 0.0) continue;
    result.target_shortfall = std::max(
        result.target_shortfall, (targets.xi_hat(k) - sinr(k)) / targets.xi_hat(k));
  }
  return result;
}

AssociationMask max_snr_mask(const NetworkRealization& net) {
  AssociationMask mask = AssociationMask::Constant(net.num_bs(), net.num_users(), false);
  for (int k = 0; k < net.num_users(); ++k) {
    Eigen::Index best = 0;
    net.beta.col(k).maxCoeff(&best);
    mask(best, k) = true;
  }
  return mask;
}

std::vector<std::vector<int>> extract_association(const PowerAllocation& rho,
                                                  double threshold) {
  if (!(threshold > 0.0)) {
    throw std::invalid_argument("extract_association: threshold must be positive");
  }
  std::vector<std::vector<int>> sets(rho.rho.cols());
  for (Eigen::Index t = 0; t < rho.rho.cols(); ++t) {
    for (Eigen::Index i = 0; i < rho.rho.rows(); ++i) {
      if (rho.rho(i, t) > threshold) sets[t].push_back(static_cast<int>(i));
    }
  }
  return sets;
}

Eigen::MatrixXd association_scores(const PowerMinInstance& inst,
                                   const Eigen::VectorXd& lambda,
                                   const Eigen::VectorXd& mu) {
  const int L = inst.num_bs();
  const int K = inst.num_users();
  if (lambda.size() != K || mu.size() != L) {
    throw std::invalid_argument("association_scores: multiplier size mismatch");
  }
  const double inf = std::numeric_limits<double>::infinity();
  // Interference load common to every user served by BS i.
  const Eigen::VectorXd load = inst.interference * lambda;
  Eigen::MatrixXd scores(L, K);
  for (int t = 0; t < K; ++t) {
    for (int i = 0; i < L; ++i) {
      if (!inst.is_allowed(i, t) || inst.xi_hat(t) == 0.0) {
        scores(i, t) = inf;
        continue;
      }
      double num = inst.amp_efficiency(i) + load(i) + mu(i);
      for (int k = 0; k < K; ++k) {
        if (k == t) continue;
        const auto& pk = inst.pilot_sets[k];
        if (std::find(pk.begin(), pk.end(), t) != pk.end()) {
          num += lambda(k) * inst.contamination(i, k);
        }
      }
      scores(i, t) = num / (inst.signal(i, t) / inst.xi_hat(t));
    }
  }
  return scores;
}

std::string AssociationCheck::describe() const {
  std::ostringstream out;
  out << (ok ? "ok" : "violated") << " (max relative gap " << max_relative_gap << ")";
  for (const auto& [i, t] : violations) out << " (bs " << i << ", user " << t << ")";
  return out.str();
}

AssociationCheck association_rule_check(const PowerMinInstance& inst,
                                        const Eigen::VectorXd& lambda,
                                        const Eigen::VectorXd& mu,
                                        const PowerAllocation& rho, double rel_tol,
                                        double rho_threshold) {
  AssociationCheck check;
  check.scores = association_scores(inst, lambda, mu);
  for (int t = 0; t < inst.num_users(); ++t) {
    if (inst.xi_hat(t) == 0.0) continue;
    Eigen::Index argmin = 0;
    const double best = check.scores.col(t).minCoeff(&argmin);
    // Dual feasibility and complementary slackness pin the minimum to lambda_t.
    const double dual_gap = std::abs(best - lambda(t)) / std::abs(best);
    check.max_relative_gap = std::max(check.max_relative_gap, dual_gap);
    if (!(dual_gap <= rel_tol)) {
      check.ok = false;
      check.violations.emplace_back(static_cast<int>(argmin), t);
    }
    for (int i = 0; i < inst.num_bs(); ++i) {
      if (!(rho.rho(i, t) > rho_threshold)) continue;
      const double gap = (check.scores(i, t) - best) / std::abs(best);
      check.max_relative_gap = std::max(check.max_relative_gap, gap);
      if (!(gap <= rel_tol)) {
        check.ok = false;
        check.violations.emplace_back(i, t);
      }
    }
  }
  return check;
}

}  // namespace mmimo
