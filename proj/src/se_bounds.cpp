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

#include "mmimo/se_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mmimo {

std::string to_string(Precoding scheme) {
  return scheme == Precoding::mrt ? "mrt" : "zf";
}

Precoding precoding_from_string(const std::string& name) {
  if (name == "mrt" || name == "MRT") return Precoding::mrt;
  if (name == "zf" || name == "ZF") return Precoding::zf;
  throw std::invalid_argument("unknown precoding scheme '" + name + "'");
}

void GainStatistics::validate(double rel_tol) const {
  const int L = num_bs();
  const int K = num_users();
  if (static_cast<int>(second_moment.size()) != L) {
    throw std::invalid_argument("GainStatistics: need one second-moment table per BS");
  }
  for (int i = 0; i < L; ++i) {
    if (second_moment[i].rows() != K || second_moment[i].cols() != K) {
      throw std::invalid_argument("GainStatistics: second-moment table must be K x K");
    }
    for (int k = 0; k < K; ++k) {
      const double m2 = second_moment[i](k, k);
      const double m1 = std::norm(mean_gain(i, k));
      if (m2 < m1 * (1.0 - rel_tol)) {
        throw std::invalid_argument("GainStatistics: negative gain variance");
      }
    }
  }
}

double PowerAllocation::consumed(const std::vector<double>& amp_efficiency) const {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    sum += amp_efficiency.at(i) * rho.row(i).sum();
  }
  return sum;
}

bool PowerAllocation::within_budget(const std::vector<double>& max_power,
                                    double rel_tol) const {
  if ((rho.array() < 0.0).any()) return false;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    if (rho.row(i).sum() > max_power.at(i) * (1.0 + rel_tol)) return false;
  }
  return true;
}

SinrTargets SinrTargets::from_qos(const Eigen::VectorXd& xi, double prelog) {
  SinrTargets out;
  out.xi = xi;
  out.xi_hat.resize(xi.size());
  for (Eigen::Index k = 0; k < xi.size(); ++k) {
    if (!(xi(k) >= 0.0)) throw std::domain_error("QoS targets must be >= 0");
    out.xi_hat(k) = sinr_from_rate(xi(k), prelog);
  }
  return out;
}

SinrTargets SinrTargets::uniform(int num_users, double xi, double prelog) {
  return from_qos(Eigen::VectorXd::Constant(num_users, xi), prelog);
}

double rate_from_sinr(double sinr, double prelog) {
  if (!(sinr >= 0.0)) throw std::domain_error("rate_from_sinr: sinr must be >= 0");
  return prelog * std::log2(1.0 + sinr);
}

double rate_from_sinr(double sinr, double dl_fraction, int pilot_length,
                      int coherence_length) {
  return rate_from_sinr(
      sinr, dl_fraction * (1.0 - static_cast<double>(pilot_length) /
                                     static_cast<double>(coherence_length)));
}

double sinr_from_rate(double rate, double prelog) {
  if (!(rate >= 0.0)) throw std::domain_error("sinr_from_rate: rate must be >= 0");
  return std::exp2(rate / prelog) - 1.0;
}

namespace {

void check_shapes(const GainStatistics& stats, const PowerAllocation& rho) {
  if (rho.rho.rows() != stats.num_bs() || rho.rho.cols() != stats.num_users() ||
      static_cast<int>(stats.second_moment.size()) != stats.num_bs()) {
    throw std::invalid_argument("power allocation does not match gain statistics");
  }
}

// sum_i sum_t rho_{i,t} E{|h_{i,k}^H w_{i,t}|^2}
double received_power(const GainStatistics& stats, const PowerAllocation& rho,
                      int k) {
  double sum = 0.0;
  for (int i = 0; i < stats.num_bs(); ++i) {
    sum += stats.second_moment[i].row(k).dot(rho.rho.row(i));
  }
  return sum;
}

void check_net(const NetworkRealization& net, const PowerAllocation& rho) {
  if (rho.rho.rows() != net.num_bs() || rho.rho.cols() != net.num_users()) {
    throw std::invalid_argument("power allocation does not match the network");
  }
}

// Shared closed form: gain * sum_i rho_ik theta_ik over
// gain * contamination + sum_i sum_t rho_it z_ik + noise.
Eigen::VectorXd closed_form(const NetworkRealization& net,
                            const PowerAllocation& rho, double dl_noise,
                            double gain, bool subtract_theta) {
  check_net(net, rho);
  const int L = net.num_bs();
  const int K = net.num_users();
  Eigen::VectorXd sinr(K);
  const Eigen::VectorXd per_bs = rho.rho.rowwise().sum();
  for (int k = 0; k < K; ++k) {
    double signal = 0.0;
    double contamination = 0.0;
    double interference = 0.0;
    for (int i = 0; i < L; ++i) {
      signal += rho.rho(i, k) * net.theta(i, k);
      for (int t : net.pilot_sets[k]) {
        if (t != k) contamination += rho.rho(i, t) * net.theta(i, k);
      }
      const double z = subtract_theta ? net.beta(i, k) - net.theta(i, k)
                                      : net.beta(i, k);
      interference += per_bs(i) * z;
    }
    sinr(k) = gain * signal / (gain * contamination + interference + dl_noise);
  }
  return sinr;
}

}  // namespace

Eigen::VectorXd sinr_general(const GainStatistics& stats,
                             const PowerAllocation& rho, double dl_noise) {
  check_shapes(stats, rho);
  const int L = stats.num_bs();
  const int K = stats.num_users();
  Eigen::VectorXd sinr(K);
  for (int k = 0; k < K; ++k) {
    double signal = 0.0;
    for (int i = 0; i < L; ++i) signal += rho.rho(i, k) * std::norm(stats.mean_gain(i, k));
    // Denominator = total received - coherent desired part + noise, which is
    // the uncertainty + interference + noise decomposition.
    const double denom = received_power(stats, rho, k) - signal + dl_noise;
    sinr(k) = signal / denom;
  }
  return sinr;
}

double sinr_per_bs(const GainStatistics& stats, const PowerAllocation& rho,
                   double dl_noise, int user, int bs,
                   const std::vector<int>& decoding_order) {
  check_shapes(stats, rho);
  const int L = stats.num_bs();
  if (user < 0 || user >= stats.num_users() || bs < 0 || bs >= L) {
    throw std::out_of_range("sinr_per_bs: index out of range");
  }
  std::vector<int> order = decoding_order;
  if (order.empty()) {
    order.resize(L);
    std::iota(order.begin(), order.end(), 0);
  }
  if (static_cast<int>(order.size()) != L) {
    throw std::invalid_argument("sinr_per_bs: decoding order must list every BS");
  }
  double cancelled = 0.0;
  bool found = false;
  for (int i : order) {
    cancelled += rho.rho(i, user) * std::norm(stats.mean_gain(i, user));
    if (i == bs) {
      found = true;
      break;
    }
  }
  if (!found) throw std::invalid_argument("sinr_per_bs: bs missing from decoding order");
  const double desired = rho.rho(bs, user) * std::norm(stats.mean_gain(bs, user));
  return desired / (received_power(stats, rho, user) - cancelled + dl_noise);
}

double array_gain(const NetworkConfig& config, Precoding scheme) {
  if (scheme == Precoding::mrt) return config.antennas_per_bs;
  if (config.antennas_per_bs < config.num_users + 1) {
    throw std::invalid_argument("ZF precoding needs antennas_per_bs >= num_users + 1");
  }
  return config.antennas_per_bs - config.num_users;
}

Eigen::VectorXd sinr_mrt(const NetworkRealization& net,
                         const PowerAllocation& rho, double dl_noise) {
  return closed_form(net, rho, dl_noise, array_gain(net.config, Precoding::mrt),
                     false);
}

Eigen::VectorXd sinr_zf(const NetworkRealization& net,
                        const PowerAllocation& rho, double dl_noise) {
  return closed_form(net, rho, dl_noise, array_gain(net.config, Precoding::zf),
                     true);
}

Eigen::VectorXd sinr_closed_form(const NetworkRealization& net,
                                 const PowerAllocation& rho, double dl_noise,
                                 Precoding scheme) {
  return scheme == Precoding::mrt ? sinr_mrt(net, rho, dl_noise)
                                  : sinr_zf(net, rho, dl_noise);
}

GainStatistics closed_form_gain_statistics(const NetworkRealization& net,
                                           Precoding scheme) {
  const int L = net.num_bs();
  const int K = net.num_users();
  const double gain = array_gain(net.config, scheme);
  GainStatistics stats;
  stats.mean_gain.resize(L, K);
  stats.second_moment.assign(L, Eigen::MatrixXd::Zero(K, K));
  for (int i = 0; i < L; ++i) {
    for (int k = 0; k < K; ++k) {
      const double theta = net.theta(i, k);
      const double beta = net.beta(i, k);
      stats.mean_gain(i, k) = std::sqrt(gain * theta);
      for (int t = 0; t < K; ++t) {
        const bool shares = std::find(net.pilot_sets[k].begin(),
                                      net.pilot_sets[k].end(),
                                      t) != net.pilot_sets[k].end();
        if (scheme == Precoding::mrt) {
          // E|e^H w|^2 + E|hhat^H w|^2 with the fourth moment M(M+1)theta^2.
          stats.second_moment[i](k, t) = beta + (shares ? gain * theta : 0.0);
        } else {
          stats.second_moment[i](k, t) =
              (beta - theta) + (shares ? gain * theta : 0.0);
        }
      }
    }
  }
  return stats;
}

std::vector<AsymptoticSinr> sinr_asymptotic(const NetworkRealization& net,
                                            const PowerAllocation& rho) {
  check_net(net, rho);
  const int L = net.num_bs();
  const int K = net.num_users();
  std::vector<AsymptoticSinr> out;
  out.reserve(K);
  for (int k = 0; k < K; ++k) {
    double signal = 0.0;
    double contamination = 0.0;
    for (int i = 0; i < L; ++i) {
      signal += rho.rho(i, k) * net.theta(i, k);
      for (int t : net.pilot_sets[k]) {
        if (t != k) contamination += rho.rho(i, t) * net.theta(i, k);
      }
    }
    if (contamination > 0.0) {
      out.emplace_back(signal / contamination);
    } else {
      out.emplace_back(UnboundedSinr{});
    }
  }
  return out;
}

}  // namespace mmimo
