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

#include <cmath>

#include <gtest/gtest.h>

#include "mmimo/maxmin.hpp"
#include "mmimo/power_min.hpp"
#include "mmimo/socp.hpp"
#include "test_support.hpp"

namespace mmimo {
namespace {

using testing::relative_error;

TEST(Socp, UnconstrainedQuadraticInBall) {
  // min (x0 - 1)^2 + x1^2 written as x0^2 - 2 x0 + x1^2, within ||x|| <= 0.5.
  SocProgram p;
  p.quad = Eigen::VectorXd::Ones(2);
  p.linear = (Eigen::VectorXd(2) << -2.0, 0.0).finished();
  SocCone ball;
  ball.A.resize(2, 2);
  ball.A.setIdentity();
  ball.b = Eigen::VectorXd::Zero(2);
  ball.c = Eigen::VectorXd::Zero(2);
  ball.d = 0.5;
  p.cones.push_back(ball);
  const SocSolution s = solve_soc(p);
  ASSERT_EQ(s.status, SocStatus::optimal);
  EXPECT_NEAR(s.x(0), 0.5, 1e-7);
  EXPECT_NEAR(s.x(1), 0.0, 1e-7);
  EXPECT_LE(s.certificate.worst(), 1e-6);
}

TEST(Socp, DetectsInfeasibility) {
  // ||x|| <= 1 and x0 >= 2.
  SocProgram p;
  p.quad = Eigen::VectorXd::Ones(2);
  p.linear = Eigen::VectorXd::Zero(2);
  SocCone ball;
  ball.A.resize(2, 2);
  ball.A.setIdentity();
  ball.b = Eigen::VectorXd::Zero(2);
  ball.c = Eigen::VectorXd::Zero(2);
  ball.d = 1.0;
  SocCone half;
  half.A.resize(0, 2);
  half.b.resize(0);
  half.c = (Eigen::VectorXd(2) << 1.0, 0.0).finished();
  half.d = -2.0;
  p.cones = {ball, half};
  const SocSolution s = solve_soc(p);
  EXPECT_EQ(s.status, SocStatus::infeasible);
  EXPECT_GT(s.phase1_value, 0.0);
}

TEST(CoherentSinr, SingleBsEqualsNonCoherent) {
  const NetworkRealization net = generate_network(NetworkConfig::defaults(1, 64, 6), 1);
  std::mt19937_64 rng(1);
  const PowerAllocation rho = testing::random_allocation(1, 6, rng);
  for (Precoding scheme : {Precoding::mrt, Precoding::zf}) {
    const Eigen::VectorXd a = coherent_sinr(net, rho, scheme, 1e-13);
    const Eigen::VectorXd b = sinr_closed_form(net, rho, 1e-13, scheme);
    for (int k = 0; k < 6; ++k) EXPECT_LT(relative_error(a(k), b(k)), 1e-13);
  }
}

TEST(CoherentSinr, TwoEqualLinksDoubleTheGain) {
  NetworkConfig cfg = NetworkConfig::defaults(2, 50, 1);
  cfg.pilot_length = 1;
  const NetworkRealization net = realization_from_beta(cfg, Eigen::MatrixXd::Constant(2, 1, 1e-10));
  const PowerAllocation rho{Eigen::MatrixXd::Constant(2, 1, 0.01)};
  // Zero z removes interference so only the numerator differs.
  NetworkRealization clean = net;
  clean.beta = clean.theta;
  const double coh = coherent_sinr(clean, rho, Precoding::zf, 1e-13)(0);
  const double non = sinr_zf(clean, rho, 1e-13)(0);
  EXPECT_NEAR(coh / non, 2.0, 1e-12);
}

TEST(CoherentSinr, DominatesNonCoherentForMrt) {
  const NetworkRealization net = generate_network(NetworkConfig::defaults(4, 100, 8), 3);
  std::mt19937_64 rng(3);
  const PowerAllocation rho = testing::random_allocation(4, 8, rng);
  const Eigen::VectorXd coh = coherent_sinr(net, rho, Precoding::mrt, net.config.dl_noise);
  const Eigen::VectorXd non = sinr_mrt(net, rho, net.config.dl_noise);
  for (int k = 0; k < 8; ++k) EXPECT_GE(coh(k), non(k) * (1.0 - 1e-14));
}

TEST(CoherentSocp, ConeNormReproducesDenominator) {
  NetworkConfig cfg = NetworkConfig::defaults(3, 40, 6);
  cfg.pilot_policy = PilotPolicy::round_robin;
  cfg.pilot_length = 3;
  const NetworkRealization net = generate_network(cfg, 5);
  const SinrTargets targets = SinrTargets::uniform(6, 1.0, cfg.prelog());
  const SocProgram p = build_coherent_socp(net, targets, Precoding::mrt);
  ASSERT_EQ(p.cones.size(), 6u + 3u);
  std::mt19937_64 rng(5);
  const PowerAllocation rho = testing::random_allocation(3, 6, rng);
  Eigen::VectorXd u(18);
  for (int i = 0; i < 3; ++i) {
    for (int t = 0; t < 6; ++t) u(i * 6 + t) = std::sqrt(rho.rho(i, t));
  }
  const Eigen::VectorXd sinr = coherent_sinr(net, rho, Precoding::mrt, cfg.dl_noise);
  for (int k = 0; k < 6; ++k) {
    const SocCone& cone = p.cones[k];
    const double lhs = (cone.A * u + cone.b).squaredNorm();
    const double rhs = std::pow(cone.c.dot(u) + cone.d, 2);
    // ||s_k||^2 = xi_hat * denominator / sigma^2 and rhs = numerator / sigma^2.
    EXPECT_LT(relative_error(rhs / lhs, sinr(k) / targets.xi_hat(k)), 1e-12);
  }
}

TEST(CoherentPowerMin, SingleBsMatchesLp) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> exponent(-12.0, -10.0);
  int compared = 0;
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXd beta =
        Eigen::MatrixXd::NullaryExpr(1, 5, [&] { return std::pow(10.0, exponent(rng)); });
    const NetworkRealization net = realization_from_beta(NetworkConfig::defaults(1, 80, 5), beta);
    const SinrTargets t = SinrTargets::uniform(5, 1.0, net.config.prelog());
    for (Precoding scheme : {Precoding::mrt, Precoding::zf}) {
      const PowerMinResult lp = solve_powermin(net, t, scheme);
      const CoherentResult soc = solve_coherent_powermin(net, t, scheme);
      ASSERT_EQ(lp.feasible(), soc.feasible());
      if (!lp.feasible()) continue;
      ++compared;
      EXPECT_LT(relative_error(lp.objective, soc.objective), 1e-6);
      EXPECT_LE(soc.certificate.worst(), 1e-6);
    }
  }
  EXPECT_GE(compared, 5);
}

TEST(CoherentPowerMin, NeverNeedsMorePowerThanNonCoherent) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const NetworkRealization net = generate_network(NetworkConfig::defaults(4, 150, 12), seed);
    const SinrTargets t = SinrTargets::uniform(12, 1.0, net.config.prelog());
    for (Precoding scheme : {Precoding::mrt, Precoding::zf}) {
      const PowerMinResult lp = solve_powermin(net, t, scheme);
      if (!lp.feasible()) continue;
      const CoherentResult soc = solve_coherent_powermin(net, t, scheme);
      ASSERT_TRUE(soc.feasible());
      EXPECT_LE(soc.objective, lp.objective + 1e-6);
      EXPECT_LE(soc.target_shortfall, 1e-6);
      EXPECT_LE(soc.certificate.worst(), 1e-6);
      EXPECT_TRUE(soc.allocation.within_budget(net.config.max_power, 1e-6));
    }
  }
}

TEST(CoherentPowerMin, SymmetricUserObjective) {
  NetworkConfig cfg = NetworkConfig::defaults(2, 100, 1);
  cfg.pilot_length = 1;
  const NetworkRealization net = realization_from_beta(cfg, Eigen::MatrixXd::Constant(2, 1, 1e-10));
  SinrTargets t;
  t.xi_hat = Eigen::VectorXd::Constant(1, 4.0);
  t.xi = Eigen::VectorXd::Constant(1, rate_from_sinr(4.0, cfg.prelog()));
  const CoherentResult r = solve_coherent_powermin(net, t, Precoding::mrt);
  ASSERT_TRUE(r.feasible());
  // Equal split rho on both BSs: 4 rho g = xi (2 rho beta + sigma^2).
  const double g = 100.0 * net.theta(0, 0);
  const double rho = 4.0 * cfg.dl_noise / (4.0 * g - 8.0 * net.beta(0, 0));
  EXPECT_LT(relative_error(r.objective, 2.0 * rho), 1e-6);
}

TEST(CoherentMaxMin, DominatesNonCoherent) {
  const NetworkRealization net = generate_network(NetworkConfig::defaults(4, 100, 8), 12);
  for (Precoding scheme : {Precoding::mrt, Precoding::zf}) {
    const MaxMinResult non = maxmin_bisection(net, scheme);
    const MaxMinResult coh = coherent_maxmin(net, scheme);
    EXPECT_TRUE(coh.xi0_certified);
    EXPECT_EQ(coh.iterations, bisection_iterations(coh.xi0, 0.01));
    EXPECT_GE(coh.xi_lower, non.xi_lower - 0.01);
  }
}

TEST(CoherentMaxMin, RejectsMask) {
  const NetworkRealization net = generate_network(NetworkConfig::defaults(2, 20, 2), 1);
  MaxMinOptions opt;
  opt.allowed = max_snr_mask(net);
  EXPECT_THROW(coherent_maxmin(net, Precoding::mrt, opt), std::invalid_argument);
}

}  // namespace
}  // namespace mmimo
