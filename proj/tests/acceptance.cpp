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

// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Usage: mmimo_acceptance [criterion...]   (default: all seven)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mmimo/coherent.hpp"
#include "mmimo/experiments.hpp"
#include "mmimo/lp.hpp"
#include "mmimo/maxmin.hpp"
#include "mmimo/mc_oracle.hpp"
#include "mmimo/power_min.hpp"
#include "mmimo/se_bounds.hpp"
#include "mmimo/system_model.hpp"
#include "oracles/vertex_enumeration.hpp"
#include "test_support.hpp"

namespace mmimo {
namespace {

using testing::relative_error;

constexpr double kDelta = 0.01;

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  // Records a sub-check; a false `ok` fails the criterion.
  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { details.push_back("     " + what); }
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

// 1. Closed forms against Monte Carlo at L=4, K=10, M=100.
Outcome closed_form_validation() {
  Outcome out;
  const NetworkRealization net = generate_network(NetworkConfig::defaults(4, 100, 10), 2026);
  PowerAllocation rho = PowerAllocation::zeros(4, 10);
  for (int i = 0; i < 4; ++i) rho.rho.row(i).setConstant(net.config.max_power[i] / 10.0);
  McOptions mc;
  mc.num_samples = 100000;
  const auto start = std::chrono::steady_clock::now();
  const auto stats =
      empirical_gain_statistics(net, {Precoding::mrt, Precoding::zf}, 99, mc);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (const auto& s : stats) {
    const Eigen::VectorXd closed = sinr_closed_form(net, rho, net.config.dl_noise, s.scheme);
    const SinrEstimate est = empirical_sinr(s, rho, net.config.dl_noise);
    double worst_z = 0.0;
    double worst_rel = 0.0;
    for (int k = 0; k < 10; ++k) {
      worst_z = std::max(worst_z, std::abs(est.sinr(k) - closed(k)) / est.std_error(k));
      worst_rel = std::max(worst_rel, relative_error(est.sinr(k), closed(k)));
    }
    out.check(worst_z <= 3.0, fmt("%s: max |MC - closed| / SE = %.2f (<= 3)",
                                  to_string(s.scheme).c_str(), worst_z));
    out.check(worst_rel <= 0.01, fmt("%s: max relative deviation = %.2e (<= 1e-2)",
                                     to_string(s.scheme).c_str(), worst_rel));
  }
  out.check(seconds <= 120.0, fmt("sampling time %.1f s for N = 1e5 (<= 120 s)", seconds));
  return out;
}

// 2. Per-BS rates sum to the total rate in any decoding order.
Outcome telescoping() {
  Outcome out;
  std::mt19937_64 rng(7);
  double worst_sum = 0.0;
  double worst_perm = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int L = 1 + trial % 6;
    const int K = 1 + (trial / 6) % 8;
    const GainStatistics s = testing::random_gain_statistics(L, K, rng);
    const PowerAllocation rho = testing::random_allocation(L, K, rng);
    const double noise = 0.1 + std::uniform_real_distribution<double>(0.0, 2.0)(rng);
    const Eigen::VectorXd total = sinr_general(s, rho, noise);

    std::vector<int> order(L);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (int k = 0; k < K; ++k) {
      double identity = 0.0;
      double shuffled = 0.0;
      for (int l = 0; l < L; ++l) {
        identity += rate_from_sinr(sinr_per_bs(s, rho, noise, k, l), 1.0);
        shuffled += rate_from_sinr(sinr_per_bs(s, rho, noise, k, l, order), 1.0);
      }
      const double want = rate_from_sinr(total(k), 1.0);
      worst_sum = std::max({worst_sum, relative_error(identity, want),
                            relative_error(shuffled, want)});
    }

    // Relabelling the BSs leaves the total unchanged.
    GainStatistics p = s;
    PowerAllocation prho = rho;
    for (int l = 0; l < L; ++l) {
      p.mean_gain.row(l) = s.mean_gain.row(order[l]);
      p.second_moment[l] = s.second_moment[order[l]];
      prho.rho.row(l) = rho.rho.row(order[l]);
    }
    const Eigen::VectorXd permuted = sinr_general(p, prho, noise);
    for (int k = 0; k < K; ++k) {
      worst_perm = std::max(worst_perm, relative_error(permuted(k), total(k)));
    }
  }
  out.check(worst_sum <= 1e-10,
            fmt("1000 instances, sum of per-BS rates vs total: max rel err %.2e", worst_sum));
  out.check(worst_perm <= 1e-10,
            fmt("BS relabelling: max rel change of total SINR %.2e", worst_perm));
  return out;
}

// 3. LP: analytic single-link optimum, certificates, vertex enumeration.
Outcome lp_correctness() {
  Outcome out;
  int solves = 0;
  int uncertified = 0;
  std::string first_failure;
  const auto certify = [&](const LinearProgram& lp, const LpSolution& sol) {
    ++solves;
    std::string why;
    if (sol.status == LpStatus::optimal && !certifies_optimality(lp, sol, &why)) {
      if (uncertified++ == 0) first_failure = why;
    }
  };

  double worst_analytic = 0.0;
  for (int m : {20, 64, 100, 200, 400}) {
    for (double beta : {1e-12, 1e-10, 1e-8}) {
      for (Precoding scheme : {Precoding::mrt, Precoding::zf}) {
        const NetworkRealization net = testing::single_link(m, beta);
        const double g = array_gain(net.config, scheme);
        const double z =
            scheme == Precoding::mrt ? beta : beta - net.theta(0, 0);
        const double xi_hat = sinr_from_rate(1.0, net.config.prelog());
        const double analytic =
            xi_hat * net.config.dl_noise / (g * net.theta(0, 0) - xi_hat * z);
        const PowerMinInstance inst = PowerMinInstance::from_network(
            net, SinrTargets::uniform(1, 1.0, net.config.prelog()), scheme);
        const PowerMinResult r = solve_powermin(inst);
        certify(build_powermin_lp(inst).lp, r.lp_solution);
        if (analytic > 0.0 && analytic <= net.config.max_power[0]) {
          worst_analytic = std::max(worst_analytic, relative_error(r.objective, analytic));
        } else {
          worst_analytic = std::max(worst_analytic, r.feasible() ? 1.0 : 0.0);
        }
      }
    }
  }
  out.check(worst_analytic <= 1e-9,
            fmt("single link, 30 cases: max rel err vs analytic optimum %.2e", worst_analytic));

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const NetworkRealization net = generate_network(NetworkConfig::defaults(4, 200, 20), seed);
    for (Precoding scheme : {Precoding::mrt, Precoding::zf}) {
      for (double qos : {0.5, 1.0, 2.0}) {
        const PowerMinInstance inst = PowerMinInstance::from_network(
            net, SinrTargets::uniform(20, qos, net.config.prelog()), scheme);
        certify(build_powermin_lp(inst).lp, solve_powermin(inst).lp_solution);
      }
    }
  }
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const LinearProgram lp = testing::random_bounded_lp(3 + trial % 8, 4 + trial % 13, rng);
    certify(lp, solve_lp(lp));
  }
  out.check(uncertified == 0,
            fmt("%d LP solves, %d fail gap/slackness <= 1e-8%s%s", solves, uncertified,
                first_failure.empty() ? "" : ": ", first_failure.c_str()));

  double worst_vertex = 0.0;
  int mismatched = 0;
  for (int trial = 0; trial < 4; ++trial) {
    const LinearProgram lp = testing::random_bounded_lp(10, 20, rng);
    const auto oracle = testing::enumerate_vertices(lp.A, lp.b, lp.c);
    const LpSolution sol = solve_lp(lp);
    certify(lp, sol);
    if (!oracle || sol.status != LpStatus::optimal) {
      ++mismatched;
      continue;
    }
    worst_vertex = std::max(worst_vertex,
                            std::abs(sol.objective - oracle->objective) /
                                std::max(1.0, std::abs(oracle->objective)));
  }
  out.check(mismatched == 0 && worst_vertex <= 1e-8,
            fmt("4 random 10x20 LPs vs vertex enumeration: max err %.2e, %d status "
                "mismatches",
                worst_vertex, mismatched));
  return out;
}

// 4. Served BSs attain the per-user minimum association score.
Outcome kkt_consistency() {
  Outcome out;
  NetworkConfig orthogonal = NetworkConfig::defaults(4, 200, 20);
  NetworkConfig reuse = orthogonal;
  reuse.pilot_policy = PilotPolicy::round_robin;
  reuse.pilot_length = 10;
  int checked = 0;
  int violated = 0;
  double worst = 0.0;
  std::string example;
  for (const NetworkConfig& cfg : {orthogonal, reuse}) {
    int feasible = 0;
    for (std::uint64_t seed = 0; feasible < 250 && seed < 2000; ++seed) {
      const NetworkRealization net = generate_network(cfg, 1000 + seed);
      const Precoding scheme = seed % 2 == 0 ? Precoding::mrt : Precoding::zf;
      const PowerMinInstance inst = PowerMinInstance::from_network(
          net, SinrTargets::uniform(20, 1.0, net.config.prelog()), scheme);
      const PowerMinResult r = solve_powermin(inst);
      if (!r.feasible()) continue;
      ++feasible;
      ++checked;
      const AssociationCheck c = association_rule_check(
          inst, r.association.qos_multipliers, r.association.power_multipliers,
          r.allocation, 1e-6, 1e-9);
      worst = std::max(worst, c.max_relative_gap);
      if (!c.ok && violated++ == 0) example = c.describe();
    }
    out.note(fmt("%s pilots: %d feasible drops", to_string(cfg.pilot_policy).c_str(), feasible));
    if (feasible < 250) out.check(false, "could not collect 250 feasible drops");
  }
  out.check(violated == 0, fmt("%d drops, %d with a served BS off the minimum score "
                               "(max rel gap %.2e, tol 1e-6)%s%s",
                               checked, violated, worst, example.empty() ? "" : ": ",
                               example.c_str()));
  return out;
}

// 5. Bisection iteration count, certified range, feasible result, saturation.
Outcome bisection() {
  Outcome out;
  int runs = 0;
  int wrong_count = 0;
  int uncertified = 0;
  int infeasible_result = 0;
  int warned = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const NetworkRealization net =
        generate_network(NetworkConfig::defaults(4, 200, 20), 5000 + seed);
    for (Precoding scheme : {Precoding::mrt, Precoding::zf}) {
      const MaxMinResult r = maxmin_bisection(net, scheme);
      ++runs;
      warned += !r.warnings.empty();
      uncertified += !r.xi0_certified;
      wrong_count += r.iterations != bisection_iterations(r.xi0, kDelta);
      const bool meets = min_weighted_rate(net, r.allocation, scheme) >= r.xi_lower - 1e-9 &&
                         r.allocation.within_budget(net.config.max_power);
      const bool resolves =
          r.xi_lower == 0.0 ||
          solve_powermin(net, SinrTargets::uniform(20, r.xi_lower, net.config.prelog()), scheme)
              .feasible();
      infeasible_result += !(meets && resolves);
    }
  }
  out.check(wrong_count == 0 && warned == 0,
            fmt("%d runs: %d with iterations != ceil(log2(xi0/delta)), %d widened", runs,
                wrong_count, warned));
  out.check(uncertified == 0, fmt("%d runs with xi0 not certified infeasible", uncertified));
  out.check(infeasible_result == 0,
            fmt("%d runs whose allocation misses xi_lower or the budget", infeasible_result));

  double worst = 0.0;
  for (int m : {50, 100, 300}) {
    for (double beta : {1e-11, 1e-10, 1e-9}) {
      for (Precoding scheme : {Precoding::mrt, Precoding::zf}) {
        const NetworkRealization net = testing::single_link(m, beta);
        const double p = net.config.max_power[0];
        const double z = scheme == Precoding::mrt ? beta : beta - net.theta(0, 0);
        const double limit = rate_from_sinr(
            array_gain(net.config, scheme) * net.theta(0, 0) * p /
                (p * z + net.config.dl_noise),
            net.config.prelog());
        const MaxMinResult r = maxmin_bisection(net, scheme);
        const double err = r.xi_lower > limit ? r.xi_lower - limit + kDelta
                                              : limit - r.xi_lower;
        worst = std::max(worst, err);
      }
    }
  }
  out.check(worst <= kDelta,
            fmt("single-BS saturation, 18 cases: max |xi_lower - limit| %.4f (<= %.2f)", worst,
                kDelta));
  return out;
}

// 6. Trends at the reference parameters over 200 drops.
Outcome reference_trends() {
  Outcome out;
  const NetworkConfig base = NetworkConfig::defaults(4, 200, 20);
  const std::vector<int> antennas = {50, 100, 150, 200, 250, 300};
  const std::vector<Precoding> schemes = {Precoding::mrt, Precoding::zf};
  std::vector<std::string> log;
  const auto start = std::chrono::steady_clock::now();
  const auto by_m = power_sweep(base, antennas, {1.0}, schemes, 200, 2026, true, &log);
  const auto by_qos =
      power_sweep(base, {200}, {0.5, 1.0, 1.5, 2.0, 2.5}, schemes, 200, 2026, true, &log);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const auto at = [](const std::vector<PowerSweepPoint>& pts, int m, double q, Precoding s) {
    for (const auto& p : pts) {
      if (p.antennas == m && p.qos == q && p.scheme == s) return p;
    }
    throw std::logic_error("missing sweep point");
  };
  const auto mrt = [&](double q) { return at(by_qos, 200, q, Precoding::mrt); };
  const auto zf = [&](double q) { return at(by_qos, 200, q, Precoding::zf); };

  const double p_mrt = mrt(1.0).mean_power_optimal;
  const double p_zf = zf(1.0).mean_power_optimal;
  out.check(p_mrt >= 4.0 && p_mrt <= 20.0 && p_zf >= 4.0 && p_zf <= 20.0,
            fmt("(a) M=200, QoS 1: mean power MRT %.2f W, ZF %.2f W (in [4, 20])", p_mrt, p_zf));
  for (double q : {0.5, 1.0}) {
    out.check(mrt(q).mean_power_optimal <= zf(q).mean_power_optimal,
              fmt("(a) QoS %.1f: MRT %.2f W <= ZF %.2f W", q, mrt(q).mean_power_optimal,
                  zf(q).mean_power_optimal));
  }
  out.check(zf(2.5).mean_power_optimal < mrt(2.5).mean_power_optimal,
            fmt("(a) QoS 2.5: ZF %.2f W < MRT %.2f W", zf(2.5).mean_power_optimal,
                mrt(2.5).mean_power_optimal));

  for (Precoding s : schemes) {
    std::ostringstream curve;
    bool decreasing = true;
    double previous = std::numeric_limits<double>::infinity();
    for (int m : antennas) {
      const double p = at(by_m, m, 1.0, s).mean_power_optimal;
      curve << " " << m << ":" << fmt("%.2f", p);
      decreasing = decreasing && p < previous;
      previous = p;
    }
    out.check(decreasing, fmt("(b) %s mean power strictly decreasing in M:%s",
                              to_string(s).c_str(), curve.str().c_str()));
  }

  double min_single = 1.0;
  int bad_points = 0;
  int violations = 0;
  for (const auto* pts : {&by_m, &by_qos}) {
    for (const auto& p : *pts) {
      if (p.served_users > 0) min_single = std::min(min_single, 1.0 - p.joint_tx_fraction());
      bad_points += p.infeasible_optimal > p.infeasible_baseline;
      violations += p.ordering_violations;
    }
  }
  out.check(min_single >= 0.85,
            fmt("(c) single-BS association fraction, worst sweep point %.4f (>= 0.85)",
                min_single));
  out.check(bad_points == 0 && violations == 0,
            fmt("(d) %d sweep points with more optimal than max-SNR infeasibility, %d drops "
                "where max-SNR beats the optimum",
                bad_points, violations));
  out.check(log.empty(), fmt("%zu drops failed with an error", log.size()));
  out.check(seconds <= 900.0, fmt("sweep time %.1f s (<= 900 s)", seconds));
  return out;
}

// 7. Coherent joint transmission against non-coherent.
Outcome coherent_dominance() {
  Outcome out;
  double worst_certificate = 0.0;
  double worst_shortfall = 0.0;
  int soc_solves = 0;
  const auto coherent_oracle = [&](const NetworkRealization& net, Precoding scheme) {
    return [&, scheme](const Eigen::VectorXd& xi) -> std::optional<PowerAllocation> {
      const CoherentResult r = solve_coherent_powermin(
          net, SinrTargets::from_qos(xi, net.config.prelog()), scheme);
      ++soc_solves;
      if (!r.feasible()) return std::nullopt;
      worst_certificate = std::max(worst_certificate, r.certificate.worst());
      worst_shortfall = std::max(worst_shortfall, r.target_shortfall);
      return r.allocation;
    };
  };

  int drops = 0;
  int dominated = 0;
  double gain_sum = 0.0;
  double gain_max = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const NetworkRealization net =
        generate_network(NetworkConfig::defaults(4, 100, 20), 7000 + seed);
    for (Precoding scheme : {Precoding::mrt, Precoding::zf}) {
      const MaxMinResult nc = maxmin_bisection(net, scheme);
      const MaxMinResult co =
          bisect_maxmin(coherent_upper_bound_xi0(net, scheme), Eigen::VectorXd::Ones(20),
                        coherent_oracle(net, scheme), {}, 4, 20);
      ++drops;
      dominated += co.xi_lower < nc.xi_lower - kDelta;
      const double gain = (co.xi_lower - nc.xi_lower) / nc.xi_lower;
      gain_sum += gain;
      gain_max = std::max(gain_max, gain);
    }
  }
  out.check(dominated == 0,
            fmt("%d drops (M=100, K=20, MRT and ZF): %d with coherent < non-coherent - delta",
                drops, dominated));
  out.check(gain_sum / drops <= 0.10,
            fmt("mean relative max-min gain %.1f%% (<= 10%%), largest %.1f%%",
                100.0 * gain_sum / drops, 100.0 * gain_max));

  double worst_single = 0.0;
  int status_mismatch = 0;
  int compared = 0;
  // One BS, users with log-uniform large-scale fading in [1e-12, 1e-10].
  std::mt19937_64 rng(8000);
  std::uniform_real_distribution<double> exponent(-12.0, -10.0);
  int maxmin_mismatch = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd beta =
        Eigen::MatrixXd::NullaryExpr(1, 10, [&] { return std::pow(10.0, exponent(rng)); });
    const NetworkRealization net =
        realization_from_beta(NetworkConfig::defaults(1, 100, 10), beta);
    for (Precoding scheme : {Precoding::mrt, Precoding::zf}) {
      for (double qos : {0.5, 1.0, 1.5}) {
        const SinrTargets t = SinrTargets::uniform(10, qos, net.config.prelog());
        const PowerMinResult lp = solve_powermin(net, t, scheme);
        const CoherentResult soc = solve_coherent_powermin(net, t, scheme);
        ++soc_solves;
        if (soc.feasible()) {
          worst_certificate = std::max(worst_certificate, soc.certificate.worst());
        }
        if (lp.feasible() != soc.feasible()) {
          ++status_mismatch;
        } else if (lp.feasible()) {
          ++compared;
          worst_single = std::max(worst_single, relative_error(lp.objective, soc.objective));
        }
      }
      const MaxMinResult nc = maxmin_bisection(net, scheme);
      const MaxMinResult co = bisect_maxmin(nc.xi0, Eigen::VectorXd::Ones(10),
                                            coherent_oracle(net, scheme), {}, 1, 10);
      maxmin_mismatch += co.xi_lower != nc.xi_lower;
    }
  }
  out.check(status_mismatch == 0 && compared >= 20 && worst_single <= 1e-6,
            fmt("single-BS instances: %d feasible pairs, max rel power difference SOCP vs "
                "LP %.2e, %d feasibility mismatches",
                compared, worst_single, status_mismatch));
  out.check(maxmin_mismatch == 0,
            fmt("single-BS max-min: %d of 20 runs where the coherent level differs",
                maxmin_mismatch));
  out.check(worst_certificate <= 1e-6 && worst_shortfall <= 1e-6,
            fmt("%d SOCP solves: worst certificate residual %.2e, worst SINR shortfall %.2e "
                "(<= 1e-6)",
                soc_solves, worst_certificate, worst_shortfall));
  return out;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace mmimo

int main(int argc, char** argv) {
  using namespace mmimo;
  const std::vector<Criterion> criteria = {
      {1, "closed-form SINR vs Monte Carlo", closed_form_validation},
      {2, "per-BS rate telescoping", telescoping},
      {3, "LP optimum and certificates", lp_correctness},
      {4, "association rule at the LP optimum", kkt_consistency},
      {5, "max-min bisection", bisection},
      {6, "power and association trends", reference_trends},
      {7, "coherent joint transmission", coherent_dominance},
  };
  std::set<int> selected;
  for (int a = 1; a < argc; ++a) selected.insert(std::stoi(argv[a]));

  bool all_pass = true;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome.check(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << c.id << " " << (outcome.pass ? "PASS" : "FAIL") << "  "
              << c.name << fmt("  (%.1f s)", seconds) << "\n";
    for (const auto& line : outcome.details) std::cout << "    " << line << "\n";
    std::cout.flush();
    all_pass = all_pass && outcome.pass;
  }
  return all_pass ? 0 : 1;
}
