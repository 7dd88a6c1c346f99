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

#include "mmimo/system_model.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "mmimo/units.hpp"

namespace mmimo {

std::string to_string(PilotPolicy policy) {
  return policy == PilotPolicy::orthogonal ? "orthogonal" : "round_robin";
}

PilotPolicy pilot_policy_from_string(const std::string& name) {
  if (name == "orthogonal") return PilotPolicy::orthogonal;
  if (name == "round_robin") return PilotPolicy::round_robin;
  throw ConfigError("unknown pilot policy '" + name + "'");
}

NetworkConfig NetworkConfig::defaults(int num_bs, int antennas, int num_users) {
  NetworkConfig config;
  config.num_bs = num_bs;
  config.antennas_per_bs = antennas;
  config.num_users = num_users;
  config.pilot_length = num_users;
  config.pilot_power.assign(num_users, 0.2);
  config.ul_noise = dbm_to_watt(-96.0);
  config.dl_noise = dbm_to_watt(-96.0);
  config.amp_efficiency.assign(num_bs, 1.0);
  config.max_power.assign(num_bs, 40.0);
  return config;
}

void NetworkConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (num_bs < 1) fail("num_bs must be >= 1");
  if (antennas_per_bs < 1) fail("antennas_per_bs must be >= 1");
  if (num_users < 1) fail("num_users must be >= 1");
  if (pilot_length < 1 || pilot_length > coherence_length) {
    fail("pilot_length must satisfy 1 <= pilot_length <= coherence_length");
  }
  if (!(dl_fraction > 0.0 && dl_fraction <= 1.0)) {
    fail("dl_fraction must lie in (0, 1]");
  }
  if (!(square_side > 0.0) || !(coverage_side > 0.0)) {
    fail("square_side and coverage_side must be positive");
  }
  if (!(min_bs_user_distance >= 0.0 && min_bs_user_distance < square_side)) {
    fail("min_bs_user_distance must lie in [0, square_side)");
  }
  if (!(shadow_std_db >= 0.0)) fail("shadow_std_db must be >= 0");
  if (static_cast<int>(pilot_power.size()) != num_users) {
    fail("pilot_power needs one entry per user");
  }
  if (static_cast<int>(amp_efficiency.size()) != num_bs ||
      static_cast<int>(max_power.size()) != num_bs) {
    fail("amp_efficiency and max_power need one entry per BS");
  }
  for (double p : pilot_power) {
    if (!(p > 0.0)) fail("pilot_power entries must be positive");
  }
  for (double d : amp_efficiency) {
    if (!(d > 0.0)) fail("amp_efficiency entries must be positive");
  }
  for (double p : max_power) {
    if (!(p > 0.0)) fail("max_power entries must be positive");
  }
  if (!(ul_noise > 0.0) || !(dl_noise > 0.0)) {
    fail("ul_noise and dl_noise must be positive");
  }
  if (pilot_policy == PilotPolicy::orthogonal && pilot_length < num_users) {
    fail("orthogonal pilots need pilot_length >= num_users");
  }
}

double NetworkConfig::prelog() const {
  return dl_fraction * (1.0 - static_cast<double>(pilot_length) /
                                  static_cast<double>(coherence_length));
}

double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double path_loss_db(double distance_km, double intercept_db, double slope) {
  if (!(distance_km > 0.0)) {
    throw std::domain_error("path_loss_db: distance must be positive");
  }
  return intercept_db + slope * std::log10(distance_km);
}

// Walks the square boundary counter-clockwise from (+s/2, +s/2) with equal
// arc-length spacing, so num_bs == 4 lands exactly on the corners.
std::vector<Point> bs_layout(int num_bs, double square_side) {
  const double h = square_side / 2.0;
  const Point corners[4] = {{h, h}, {-h, h}, {-h, -h}, {h, -h}};
  std::vector<Point> out;
  out.reserve(num_bs);
  const double perimeter = 4.0 * square_side;
  for (int l = 0; l < num_bs; ++l) {
    double arc = perimeter * l / num_bs;
    int edge = static_cast<int>(arc / square_side);
    if (edge > 3) edge = 3;
    const double frac = (arc - edge * square_side) / square_side;
    const Point& a = corners[edge];
    const Point& b = corners[(edge + 1) % 4];
    out.push_back({a.x + frac * (b.x - a.x), a.y + frac * (b.y - a.y)});
  }
  return out;
}

PilotSets assign_pilots(int num_users, int pilot_length, PilotPolicy policy) {
  if (num_users < 1 || pilot_length < 1) {
    throw ConfigError("assign_pilots: counts must be positive");
  }
  PilotSets sets(num_users);
  if (policy == PilotPolicy::orthogonal) {
    if (pilot_length < num_users) {
      throw ConfigError("orthogonal pilots need pilot_length >= num_users");
    }
    for (int k = 0; k < num_users; ++k) sets[k] = {k};
    return sets;
  }
  for (int k = 0; k < num_users; ++k) {
    for (int t = 0; t < num_users; ++t) {
      if (k % pilot_length == t % pilot_length) sets[k].push_back(t);
    }
  }
  return sets;
}

Eigen::MatrixXd estimation_quality(const Eigen::MatrixXd& beta,
                                   const std::vector<double>& pilot_powers,
                                   const PilotSets& pilot_sets, int pilot_length,
                                   double ul_noise) {
  const Eigen::Index L = beta.rows();
  const Eigen::Index K = beta.cols();
  if (static_cast<Eigen::Index>(pilot_powers.size()) != K ||
      static_cast<Eigen::Index>(pilot_sets.size()) != K) {
    throw std::invalid_argument("estimation_quality: size mismatch");
  }
  if ((beta.array() <= 0.0).any()) {
    throw std::domain_error("estimation_quality: beta entries must be positive");
  }
  const double tau = static_cast<double>(pilot_length);
  Eigen::MatrixXd theta(L, K);
  for (Eigen::Index l = 0; l < L; ++l) {
    for (Eigen::Index k = 0; k < K; ++k) {
      double received = 0.0;
      for (int t : pilot_sets[k]) received += pilot_powers[t] * beta(l, t);
      theta(l, k) = pilot_powers[k] * tau * beta(l, k) * beta(l, k) /
                    (tau * received + ul_noise);
    }
  }
  return theta;
}

NetworkRealization realization_from_beta(const NetworkConfig& config,
                                         const Eigen::MatrixXd& beta) {
  config.validate();
  if (beta.rows() != config.num_bs || beta.cols() != config.num_users) {
    throw std::invalid_argument("realization_from_beta: beta has wrong shape");
  }
  NetworkRealization net;
  net.config = config;
  net.beta = beta;
  net.pilot_sets =
      assign_pilots(config.num_users, config.pilot_length, config.pilot_policy);
  net.theta = estimation_quality(beta, config.pilot_power, net.pilot_sets,
                                 config.pilot_length, config.ul_noise);
  return net;
}

NetworkRealization generate_network(const NetworkConfig& config,
                                    std::uint64_t seed) {
  config.validate();
  const int L = config.num_bs;
  const int K = config.num_users;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-config.coverage_side / 2.0,
                                               config.coverage_side / 2.0);
  std::normal_distribution<double> shadow(0.0, 1.0);

  NetworkRealization net;
  net.config = config;
  net.bs_positions = bs_layout(L, config.square_side);
  net.user_positions.reserve(K);

  const int budget = 10 * K;
  for (int k = 0; k < K; ++k) {
    bool placed = false;
    for (int attempt = 0; attempt < budget && !placed; ++attempt) {
      Point p{coord(rng), coord(rng)};
      bool ok = true;
      for (const Point& bs : net.bs_positions) {
        if (distance(p, bs) < config.min_bs_user_distance) {
          ok = false;
          break;
        }
      }
      if (ok) {
        net.user_positions.push_back(p);
        placed = true;
      }
    }
    if (!placed) {
      std::ostringstream msg;
      msg << "generate_network: could not place user " << k << " within "
          << budget << " attempts (min distance "
          << config.min_bs_user_distance << " km)";
      throw GenerationError(msg.str());
    }
  }

  net.beta.resize(L, K);
  for (int l = 0; l < L; ++l) {
    for (int k = 0; k < K; ++k) {
      const double d = distance(net.bs_positions[l], net.user_positions[k]);
      const double z = config.shadow_std_db * shadow(rng);
      net.beta(l, k) =
          std::pow(10.0, (-path_loss_db(d, config.pathloss_intercept_db,
                                        config.pathloss_slope) + z) / 10.0);
    }
  }
  net.pilot_sets = assign_pilots(K, config.pilot_length, config.pilot_policy);
  net.theta = estimation_quality(net.beta, config.pilot_power, net.pilot_sets,
                                 config.pilot_length, config.ul_noise);
  return net;
}

}  // namespace mmimo
