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

#include "mmimo/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "mmimo/coherent.hpp"
#include "mmimo/maxmin.hpp"
#include "mmimo/mc_oracle.hpp"

namespace mmimo {

namespace {

struct KindName {
  ExperimentKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {ExperimentKind::power_vs_antennas, "power_vs_antennas"},
    {ExperimentKind::power_vs_qos, "power_vs_qos"},
    {ExperimentKind::bad_service_prob, "bad_service_prob"},
    {ExperimentKind::maxmin_cdf, "maxmin_cdf"},
    {ExperimentKind::maxmin_vs_antennas, "maxmin_vs_antennas"},
    {ExperimentKind::joint_tx_prob, "joint_tx_prob"},
    {ExperimentKind::association_map, "association_map"},
    {ExperimentKind::validate_se, "validate_se"},
};

double mean_of(const std::vector<double>& values) {
  double sum = 0.0;
  int n = 0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    sum += v;
    ++n;
  }
  return n > 0 ? sum / n : kNaN;
}

int multi_bs_count(const std::vector<std::vector<int>>& sets) {
  return static_cast<int>(
      std::count_if(sets.begin(), sets.end(), [](const auto& s) { return s.size() > 1; }));
}

// Per-drop outcome of one fixed-QoS point.
struct PowerOutcome {
  bool ok = false;
  bool optimal_feasible = false;
  bool baseline_feasible = false;
  double optimal_power = 0.0;
  double baseline_power = 0.0;
  int served_users = 0;
  int multi_bs_users = 0;
};

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& kn : kKindNames) {
    if (kn.kind == kind) return kn.name;
  }
  return "unknown";
}

ExperimentKind experiment_from_string(const std::string& name) {
  for (const auto& kn : kKindNames) {
    if (name == kn.name) return kn.kind;
  }
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

const std::vector<ExperimentKind>& all_experiments() {
  static const std::vector<ExperimentKind> kinds = [] {
    std::vector<ExperimentKind> v;
    for (const auto& kn : kKindNames) v.push_back(kn.kind);
    return v;
  }();
  return kinds;
}

ExperimentSpec ExperimentSpec::defaults(ExperimentKind kind) {
  ExperimentSpec spec;
  spec.kind = kind;
  const std::vector<int> antenna_sweep{50, 100, 150, 200, 250, 300};
  switch (kind) {
    case ExperimentKind::power_vs_antennas:
      spec.antennas = antenna_sweep;
      spec.qos = {1.0};
      break;
    case ExperimentKind::power_vs_qos:
      spec.antennas = {200};
      spec.qos = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
      break;
    case ExperimentKind::bad_service_prob:
      spec.antennas = antenna_sweep;
      spec.qos = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
      break;
    case ExperimentKind::maxmin_cdf:
      spec.antennas = {150, 300};
      break;
    case ExperimentKind::maxmin_vs_antennas:
      spec.antennas = antenna_sweep;
      break;
    case ExperimentKind::joint_tx_prob:
      spec.antennas = antenna_sweep;
      spec.qos = {1.0};
      break;
    case ExperimentKind::association_map:
      spec.base = NetworkConfig::defaults(4, 200, 40);
      spec.antennas = {200};
      break;
    case ExperimentKind::validate_se:
      spec.base = NetworkConfig::defaults(4, 100, 10);
      spec.antennas = {100};
      spec.num_drops = 3;
      break;
  }
  return spec;
}

void ExperimentSpec::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("experiment: " + what); };
  if (num_drops < 1) fail("num_drops must be >= 1");
  if (antennas.empty()) fail("antenna sweep is empty");
  if (schemes.empty()) fail("scheme list is empty");
  const bool needs_qos = kind == ExperimentKind::power_vs_antennas ||
                         kind == ExperimentKind::power_vs_qos ||
                         kind == ExperimentKind::bad_service_prob ||
                         kind == ExperimentKind::joint_tx_prob;
  if (needs_qos && qos.empty()) fail("QoS sweep is empty");
  for (int m : antennas) {
    if (m < 1) fail("antenna counts must be positive");
  }
  for (double q : qos) {
    if (!(q >= 0.0)) fail("QoS values must be >= 0");
  }
  if (!(delta > 0.0)) fail("delta must be positive");
  if (grid_size < 1) fail("grid_size must be >= 1");
  if (mc_samples < 1) fail("mc_samples must be >= 1");
  base.validate();
}

std::uint64_t drop_seed(std::uint64_t seed, int drop) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(drop), 0x64726f70u};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

NetworkConfig with_antennas(const NetworkConfig& base, int antennas) {
  NetworkConfig config = base;
  config.antennas_per_bs = antennas;
  return config;
}

PowerMinResult max_snr_baseline(const NetworkRealization& net, const SinrTargets& targets,
                                Precoding scheme) {
  return solve_powermin(net, targets, scheme, max_snr_mask(net));
}

double PowerSweepPoint::bad_service_optimal() const {
  const int n = drops - failed;
  return n > 0 ? static_cast<double>(infeasible_optimal) / n : kNaN;
}

double PowerSweepPoint::bad_service_baseline() const {
  const int n = drops - failed;
  return n > 0 ? static_cast<double>(infeasible_baseline) / n : kNaN;
}

double PowerSweepPoint::joint_tx_fraction() const {
  return served_users > 0 ? static_cast<double>(multi_bs_users) / served_users : kNaN;
}

std::vector<PowerSweepPoint> power_sweep(const NetworkConfig& base,
                                         const std::vector<int>& antennas,
                                         const std::vector<double>& qos,
                                         const std::vector<Precoding>& schemes,
                                         int num_drops, std::uint64_t seed, bool parallel,
                                         std::vector<std::string>* log) {
  std::vector<PowerSweepPoint> points;
  for (int m : antennas) {
    for (double q : qos) {
      for (Precoding s : schemes) {
        PowerSweepPoint p;
        p.antennas = m;
        p.qos = q;
        p.scheme = s;
        points.push_back(p);
      }
    }
  }
  const int P = static_cast<int>(points.size());
  std::vector<std::vector<PowerOutcome>> outcomes(num_drops, std::vector<PowerOutcome>(P));
  std::vector<std::string> errors(num_drops);

#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int d = 0; d < num_drops; ++d) {
    try {
      const std::uint64_t s = drop_seed(seed, d);
      for (int p = 0; p < P; ++p) {
        const PowerSweepPoint& pt = points[p];
        const NetworkRealization net = generate_network(with_antennas(base, pt.antennas), s);
        const SinrTargets targets =
            SinrTargets::uniform(net.num_users(), pt.qos, net.config.prelog());
        const PowerMinResult opt = solve_powermin(net, targets, pt.scheme);
        const PowerMinResult bas = max_snr_baseline(net, targets, pt.scheme);
        PowerOutcome& o = outcomes[d][p];
        o.optimal_feasible = opt.feasible();
        o.baseline_feasible = bas.feasible();
        o.optimal_power = opt.allocation.total();
        o.baseline_power = bas.allocation.total();
        if (opt.feasible()) {
          o.served_users = net.num_users();
          o.multi_bs_users = multi_bs_count(opt.association.serving_sets);
        }
        o.ok = true;
      }
    } catch (const std::exception& e) {
      errors[d] = e.what();
    }
  }

  for (int d = 0; d < num_drops; ++d) {
    if (!errors[d].empty() && log) {
      log->push_back("drop " + std::to_string(d) + ": " + errors[d]);
    }
  }
  for (int p = 0; p < P; ++p) {
    PowerSweepPoint& pt = points[p];
    double sum_opt = 0.0;
    double sum_bas = 0.0;
    for (int d = 0; d < num_drops; ++d) {
      const PowerOutcome& o = outcomes[d][p];
      ++pt.drops;
      if (!o.ok) {
        ++pt.failed;
        continue;
      }
      pt.infeasible_optimal += !o.optimal_feasible;
      pt.infeasible_baseline += !o.baseline_feasible;
      pt.served_users += o.served_users;
      pt.multi_bs_users += o.multi_bs_users;
      if (o.baseline_feasible &&
          (!o.optimal_feasible || o.baseline_power < o.optimal_power * (1.0 - 1e-9))) {
        ++pt.ordering_violations;
      }
      if (o.optimal_feasible && o.baseline_feasible) {
        ++pt.both_feasible;
        sum_opt += o.optimal_power;
        sum_bas += o.baseline_power;
      }
    }
    if (pt.both_feasible > 0) {
      pt.mean_power_optimal = sum_opt / pt.both_feasible;
      pt.mean_power_baseline = sum_bas / pt.both_feasible;
    }
  }
  return points;
}

int MaxMinSweepPoint::failed() const {
  return static_cast<int>(std::count_if(drops.begin(), drops.end(),
                                        [](const MaxMinDrop& d) { return !d.error.empty(); }));
}

double MaxMinSweepPoint::mean_optimal() const {
  std::vector<double> v;
  for (const auto& d : drops) v.push_back(d.optimal);
  return mean_of(v);
}

double MaxMinSweepPoint::mean_baseline() const {
  std::vector<double> v;
  for (const auto& d : drops) v.push_back(d.baseline);
  return mean_of(v);
}

double MaxMinSweepPoint::mean_coherent() const {
  std::vector<double> v;
  for (const auto& d : drops) v.push_back(d.coherent);
  return mean_of(v);
}

double MaxMinSweepPoint::joint_tx_fraction() const {
  long served = 0;
  long multi = 0;
  for (const auto& d : drops) {
    served += d.served_users;
    multi += d.multi_bs_users;
  }
  return served > 0 ? static_cast<double>(multi) / served : kNaN;
}

std::vector<MaxMinSweepPoint> maxmin_sweep(const NetworkConfig& base,
                                           const std::vector<int>& antennas,
                                           const std::vector<Precoding>& schemes,
                                           int num_drops, std::uint64_t seed,
                                           const MaxMinSweepOptions& options,
                                           std::vector<std::string>* log) {
  std::vector<MaxMinSweepPoint> points;
  for (int m : antennas) {
    for (Precoding s : schemes) {
      MaxMinSweepPoint p;
      p.antennas = m;
      p.scheme = s;
      p.drops.resize(num_drops);
      points.push_back(std::move(p));
    }
  }
  const int P = static_cast<int>(points.size());

#pragma omp parallel for schedule(dynamic) if (options.parallel)
  for (int d = 0; d < num_drops; ++d) {
    const std::uint64_t s = drop_seed(seed, d);
    for (int p = 0; p < P; ++p) {
      MaxMinDrop& out = points[p].drops[d];
      try {
        const NetworkRealization net =
            generate_network(with_antennas(base, points[p].antennas), s);
        MaxMinOptions mo;
        mo.delta = options.delta;
        const MaxMinResult opt = maxmin_bisection(net, points[p].scheme, mo);
        out.optimal = opt.xi_lower;
        out.certified = opt.xi0_certified;
        out.serving_sets = extract_association(opt.allocation);
        out.served_users = opt.xi_lower > 0.0 ? net.num_users() : 0;
        out.multi_bs_users = opt.xi_lower > 0.0 ? multi_bs_count(out.serving_sets) : 0;
        out.user_positions = net.user_positions;
        if (options.baseline) {
          mo.allowed = max_snr_mask(net);
          out.baseline = maxmin_bisection(net, points[p].scheme, mo).xi_lower;
          mo.allowed.resize(0, 0);
        }
        if (options.coherent) {
          const MaxMinResult coh = coherent_maxmin(net, points[p].scheme, mo);
          out.coherent = coh.xi_lower;
          out.certified = out.certified && coh.xi0_certified;
        }
      } catch (const std::exception& e) {
        out.error = e.what();
      }
    }
  }

  if (log) {
    for (const auto& p : points) {
      for (int d = 0; d < num_drops; ++d) {
        if (!p.drops[d].error.empty()) {
          log->push_back("drop " + std::to_string(d) + " (M=" + std::to_string(p.antennas) +
                         ", " + to_string(p.scheme) + "): " + p.drops[d].error);
        }
      }
    }
  }
  return points;
}

namespace {

ExperimentResult power_table(const ExperimentSpec& spec) {
  ExperimentResult result;
  result.table.experiment = to_string(spec.kind);
  result.table.header = {"M", "K", "qos", "scheme", "drops", "failed_drops", "both_feasible",
                         "mean_power_optimal", "mean_power_max_snr", "infeasible_optimal",
                         "infeasible_max_snr", "bad_service_optimal", "bad_service_max_snr",
                         "joint_tx_fraction"};
  const auto points = power_sweep(spec.base, spec.antennas, spec.qos, spec.schemes,
                                  spec.num_drops, spec.seed, spec.parallel, &result.log);
  for (const auto& p : points) {
    result.table.add_row({csv_number(p.antennas), csv_number(spec.base.num_users),
                          csv_number(p.qos), to_string(p.scheme), csv_number(p.drops),
                          csv_number(p.failed), csv_number(p.both_feasible),
                          csv_number(p.mean_power_optimal), csv_number(p.mean_power_baseline),
                          csv_number(p.infeasible_optimal), csv_number(p.infeasible_baseline),
                          csv_number(p.bad_service_optimal()),
                          csv_number(p.bad_service_baseline()),
                          csv_number(p.joint_tx_fraction())});
  }
  return result;
}

ExperimentResult maxmin_cdf_table(const ExperimentSpec& spec) {
  ExperimentResult result;
  result.table.experiment = to_string(spec.kind);
  result.table.header = {"M", "K", "scheme", "drop", "seed", "xi_optimal", "xi_max_snr",
                         "certified"};
  MaxMinSweepOptions mo;
  mo.delta = spec.delta;
  mo.parallel = spec.parallel;
  const auto points = maxmin_sweep(spec.base, spec.antennas, spec.schemes, spec.num_drops,
                                   spec.seed, mo, &result.log);
  for (const auto& p : points) {
    for (int d = 0; d < spec.num_drops; ++d) {
      const MaxMinDrop& dr = p.drops[d];
      result.table.add_row({csv_number(p.antennas), csv_number(spec.base.num_users),
                            to_string(p.scheme), csv_number(d),
                            std::to_string(drop_seed(spec.seed, d)), csv_number(dr.optimal),
                            csv_number(dr.baseline), dr.certified ? "1" : "0"});
    }
  }
  return result;
}

ExperimentResult maxmin_mean_table(const ExperimentSpec& spec) {
  ExperimentResult result;
  result.table.experiment = to_string(spec.kind);
  result.table.header = {"M", "K", "scheme", "drops", "failed_drops", "mean_xi_optimal",
                         "mean_xi_max_snr", "mean_xi_coherent"};
  MaxMinSweepOptions mo;
  mo.delta = spec.delta;
  mo.coherent = spec.coherent;
  mo.parallel = spec.parallel;
  const auto points = maxmin_sweep(spec.base, spec.antennas, spec.schemes, spec.num_drops,
                                   spec.seed, mo, &result.log);
  for (const auto& p : points) {
    result.table.add_row({csv_number(p.antennas), csv_number(spec.base.num_users),
                          to_string(p.scheme), csv_number(spec.num_drops),
                          csv_number(p.failed()), csv_number(p.mean_optimal()),
                          csv_number(p.mean_baseline()), csv_number(p.mean_coherent())});
  }
  return result;
}

ExperimentResult joint_tx_table(const ExperimentSpec& spec) {
  ExperimentResult result;
  result.table.experiment = to_string(spec.kind);
  result.table.header = {"M", "K", "scheme", "mode", "qos", "drops", "users",
                         "joint_tx_probability"};
  const auto fixed = power_sweep(spec.base, spec.antennas, spec.qos, spec.schemes,
                                 spec.num_drops, spec.seed, spec.parallel, &result.log);
  for (const auto& p : fixed) {
    result.table.add_row({csv_number(p.antennas), csv_number(spec.base.num_users),
                          to_string(p.scheme), "fixed_qos", csv_number(p.qos),
                          csv_number(p.drops), csv_number(p.served_users),
                          csv_number(p.joint_tx_fraction())});
  }
  MaxMinSweepOptions mo;
  mo.delta = spec.delta;
  mo.baseline = false;
  mo.parallel = spec.parallel;
  const auto maxmin = maxmin_sweep(spec.base, spec.antennas, spec.schemes, spec.num_drops,
                                   spec.seed, mo, &result.log);
  for (const auto& p : maxmin) {
    long served = 0;
    for (const auto& d : p.drops) served += d.served_users;
    result.table.add_row({csv_number(p.antennas), csv_number(spec.base.num_users),
                          to_string(p.scheme), "maxmin", "nan", csv_number(spec.num_drops),
                          csv_number(served), csv_number(p.joint_tx_fraction())});
  }
  return result;
}

ExperimentResult association_map_table(const ExperimentSpec& spec) {
  ExperimentResult result;
  result.table.experiment = to_string(spec.kind);
  result.table.header = {"M", "K", "scheme", "ix", "iy", "x_km", "y_km", "users",
                         "served_by_bs1", "probability"};
  MaxMinSweepOptions mo;
  mo.delta = spec.delta;
  mo.baseline = false;
  mo.parallel = spec.parallel;
  const auto points = maxmin_sweep(spec.base, spec.antennas, spec.schemes, spec.num_drops,
                                   spec.seed, mo, &result.log);
  const int G = spec.grid_size;
  const double side = spec.base.coverage_side;
  const double cell = side / G;
  for (const auto& p : points) {
    std::vector<long> users(static_cast<std::size_t>(G) * G, 0);
    std::vector<long> served(users.size(), 0);
    for (const auto& d : p.drops) {
      if (!d.error.empty() || !(d.optimal > 0.0)) continue;
      for (std::size_t k = 0; k < d.user_positions.size(); ++k) {
        const Point& u = d.user_positions[k];
        const int ix = std::clamp(static_cast<int>((u.x + side / 2) / cell), 0, G - 1);
        const int iy = std::clamp(static_cast<int>((u.y + side / 2) / cell), 0, G - 1);
        const std::size_t c = static_cast<std::size_t>(iy) * G + ix;
        ++users[c];
        const auto& s = d.serving_sets[k];
        if (std::find(s.begin(), s.end(), 0) != s.end()) ++served[c];
      }
    }
    for (int iy = 0; iy < G; ++iy) {
      for (int ix = 0; ix < G; ++ix) {
        const std::size_t c = static_cast<std::size_t>(iy) * G + ix;
        const double prob = users[c] > 0 ? static_cast<double>(served[c]) / users[c] : kNaN;
        result.table.add_row({csv_number(p.antennas), csv_number(spec.base.num_users),
                              to_string(p.scheme), csv_number(ix), csv_number(iy),
                              csv_number(-side / 2 + (ix + 0.5) * cell),
                              csv_number(-side / 2 + (iy + 0.5) * cell), csv_number(users[c]),
                              csv_number(served[c]), csv_number(prob)});
      }
    }
  }
  return result;
}

ExperimentResult validate_se_table(const ExperimentSpec& spec) {
  ExperimentResult result;
  result.table.experiment = to_string(spec.kind);
  result.table.header = {"M", "K", "drop", "scheme", "user", "sinr_closed_form",
                         "sinr_monte_carlo", "std_error", "z_score", "relative_error"};
  for (int m : spec.antennas) {
    for (int d = 0; d < spec.num_drops; ++d) {
      try {
        const std::uint64_t s = drop_seed(spec.seed, d);
        const NetworkRealization net = generate_network(with_antennas(spec.base, m), s);
        const int L = net.num_bs();
        const int K = net.num_users();
        // Equal split of every BS budget over all users.
        PowerAllocation rho = PowerAllocation::zeros(L, K);
        for (int i = 0; i < L; ++i) rho.rho.row(i).setConstant(net.config.max_power[i] / K);
        McOptions mc;
        mc.num_samples = spec.mc_samples;
        mc.parallel = spec.parallel;
        const auto stats = empirical_gain_statistics(net, spec.schemes, s, mc);
        for (std::size_t j = 0; j < spec.schemes.size(); ++j) {
          const Eigen::VectorXd closed =
              sinr_closed_form(net, rho, net.config.dl_noise, spec.schemes[j]);
          const SinrEstimate est = empirical_sinr(stats[j], rho, net.config.dl_noise);
          for (int k = 0; k < K; ++k) {
            result.table.add_row(
                {csv_number(m), csv_number(K), csv_number(d), to_string(spec.schemes[j]),
                 csv_number(k), csv_number(closed(k)), csv_number(est.sinr(k)),
                 csv_number(est.std_error(k)),
                 csv_number((est.sinr(k) - closed(k)) / est.std_error(k)),
                 csv_number((est.sinr(k) - closed(k)) / closed(k))});
          }
        }
      } catch (const std::exception& e) {
        result.log.push_back("drop " + std::to_string(d) + " (M=" + std::to_string(m) +
                             "): " + e.what());
      }
    }
  }
  return result;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case ExperimentKind::power_vs_antennas:
    case ExperimentKind::power_vs_qos:
    case ExperimentKind::bad_service_prob:
      return power_table(spec);
    case ExperimentKind::maxmin_cdf:
      return maxmin_cdf_table(spec);
    case ExperimentKind::maxmin_vs_antennas:
      return maxmin_mean_table(spec);
    case ExperimentKind::joint_tx_prob:
      return joint_tx_table(spec);
    case ExperimentKind::association_map:
      return association_map_table(spec);
    case ExperimentKind::validate_se:
      return validate_se_table(spec);
  }
  throw std::invalid_argument("unknown experiment kind");
}

}  // namespace mmimo
