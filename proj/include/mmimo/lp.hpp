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

#ifndef MMIMO_LP_HPP_
#define MMIMO_LP_HPP_

#include <iosfwd>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mmimo {

/// minimize c^T x  subject to  A x <= b,  x >= 0.
struct LinearProgram {
  Eigen::VectorXd c;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;

  int num_rows() const { return static_cast<int>(A.rows()); }
  int num_cols() const { return static_cast<int>(A.cols()); }
  void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded };

std::string to_string(LpStatus status);

/// Dual convention: y has one entry per row of A, y <= 0, A^T y <= c, and at
/// an optimum c^T x == b^T y. The nonnegative Lagrange multiplier of row i
/// is therefore -y(i).
struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  double objective = 0.0;
  int iterations = 0;
  /// Phase-1 optimum on the row-equilibrated program.
  double phase1_infeasibility = 0.0;
  bool used_bland = false;
};

struct LpOptions {
  double infeasibility_tol = 1e-9;
  double optimality_tol = 1e-11;
  double pivot_tol = 1e-11;
  int max_iterations = 100000;
  /// Consecutive degenerate pivots tolerated before switching to Bland's
  /// rule for the remainder of the phase.
  int degenerate_limit = 50;
};

/// Raised on a numerically singular basis or an iteration-limit overrun.
class LpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense two-phase revised simplex. Rows are equilibrated internally; the
/// returned duals refer to the original rows. Deterministic for a given
/// input.
LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options = {});

/// Optimality residuals of a solution against the original program.
struct LpResiduals {
  double primal = 0.0;           // max violation of A x <= b and x >= 0
  double dual = 0.0;             // max violation of A^T y <= c and y <= 0
  double complementarity = 0.0;  // max |y_i s_i| and |x_j d_j|
  double gap = 0.0;              // |c^T x - b^T y|
};

LpResiduals lp_residuals(const LinearProgram& lp, const LpSolution& solution);

/// Checks the residuals of an optimal solution against the solver's
/// guarantees: primal <= 1e-9 (1 + |b|_inf), dual <= 1e-9,
/// complementarity <= 1e-8, gap <= 1e-8 (1 + |c^T x|).
bool certifies_optimality(const LinearProgram& lp, const LpSolution& solution,
                          std::string* why = nullptr);

// Plain-text dump for cross-checking against external solvers:
//
//   lp <rows> <cols>
//   min c_1 ... c_n
//   row a_i1 ... a_in <= b_i        (one line per row)
//
// Numbers are written with 17 significant digits.
void write_lp(std::ostream& out, const LinearProgram& lp);
LinearProgram read_lp(std::istream& in);

}  // namespace mmimo

#endif  // MMIMO_LP_HPP_
