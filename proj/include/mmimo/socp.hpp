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

#ifndef MMIMO_SOCP_HPP_
#define MMIMO_SOCP_HPP_

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace mmimo {

/// || A x + b ||_2 <= c^T x + d
struct SocCone {
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  double d = 0.0;
};

/// minimize sum_j quad_j x_j^2 + linear^T x over the intersection of cones.
/// quad must be nonnegative.
struct SocProgram {
  Eigen::VectorXd quad;
  Eigen::VectorXd linear;
  std::vector<SocCone> cones;

  int num_vars() const { return static_cast<int>(quad.size()); }
  void validate() const;
  double objective(const Eigen::VectorXd& x) const;
};

enum class SocStatus { optimal, infeasible, iteration_limit };

std::string to_string(SocStatus status);

/// Optimality certificate of a barrier solution.
struct SocCertificate {
  double gap = 0.0;            // (f(x) - dual bound) / max(1, |f(x)|)
  double stationarity = 0.0;   // |grad f - sum_j (A_j^T z_j + c_j eta_j)|_inf, scaled
  double cone_residual = 0.0;  // max over cones of ||A x + b|| - (c^T x + d), >= 0

  double worst() const;
};

struct SocSolution {
  SocStatus status = SocStatus::infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  SocCertificate certificate;
  int newton_steps = 0;
  /// Smallest cone margin the feasibility phase reached (negative when the
  /// program has strictly feasible points).
  double phase1_value = 0.0;
};

struct SocOptions {
  /// Stop once (number of cones * 2) / t <= rel_gap * |f|.
  double rel_gap = 1e-8;
  double barrier_growth = 10.0;
  int max_newton_steps = 3000;
  /// Newton decrement (squared, halved) that ends a centering step.
  double centering_tol = 1e-14;
};

/// Log-barrier interior-point method with a slack-variable feasibility
/// phase. Barrier for each cone: -log((c^T x + d)^2 - ||A x + b||^2).
SocSolution solve_soc(const SocProgram& program, const SocOptions& options = {});

/// Certificate of a feasible point x. Cones with relative margin below
/// 1e-4 are treated as active and receive fitted multipliers; the gap is
/// measured against the Lagrangian bound of that dual point and is infinite
/// if the bound is -inf (a linear coordinate with nonzero residual).
SocCertificate soc_certificate(const SocProgram& program, const Eigen::VectorXd& x);

}  // namespace mmimo

#endif  // MMIMO_SOCP_HPP_
