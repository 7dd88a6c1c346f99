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

#include "mmimo/lp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

namespace mmimo {

void LinearProgram::validate() const {
  if (c.size() != A.cols() || b.size() != A.rows()) {
    throw std::invalid_argument("LinearProgram: inconsistent dimensions");
  }
  if (!c.allFinite() || !A.allFinite() || !b.allFinite()) {
    throw std::invalid_argument("LinearProgram: non-finite entries");
  }
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal:
      return "optimal";
    case LpStatus::infeasible:
      return "infeasible";
    case LpStatus::unbounded:
      return "unbounded";
  }
  return "unknown";
}

namespace {

// Standard form [A_s | I | -E] over structural, slack and artificial
// columns, where E selects the rows whose scaled rhs is negative.
class RevisedSimplex {
 public:
  RevisedSimplex(const LinearProgram& lp, const LpOptions& options)
      : opt_(options), m_(lp.num_rows()), n_(lp.num_cols()) {
    row_scale_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      double s = std::abs(lp.b(i));
      if (n_ > 0) s = std::max(s, lp.A.row(i).cwiseAbs().maxCoeff());
      row_scale_(i) = s > 0.0 ? 1.0 / s : 1.0;
    }
    b_ = row_scale_.asDiagonal() * lp.b;

    for (int i = 0; i < m_; ++i) {
      if (b_(i) < 0.0) artificial_rows_.push_back(i);
    }
    const int cols = n_ + m_ + static_cast<int>(artificial_rows_.size());
    A_ = Eigen::MatrixXd::Zero(m_, cols);
    A_.leftCols(n_) = row_scale_.asDiagonal() * lp.A;
    A_.block(0, n_, m_, m_).setIdentity();
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) basis_[i] = n_ + i;
    for (std::size_t a = 0; a < artificial_rows_.size(); ++a) {
      const int row = artificial_rows_[a];
      A_(row, n_ + m_ + static_cast<int>(a)) = -1.0;
      basis_[row] = n_ + m_ + static_cast<int>(a);
    }
    cost_ = Eigen::VectorXd::Zero(cols);
    objective_ = lp.c;
  }

  LpSolution run() {
    LpSolution sol;
    sol.x = Eigen::VectorXd::Zero(n_);
    sol.y = Eigen::VectorXd::Zero(m_);

    if (!artificial_rows_.empty()) {
      cost_.setZero();
      cost_.tail(artificial_rows_.size()).setOnes();
      const auto status = iterate(/*phase_one=*/true, sol);
      (void)status;  // phase 1 is bounded below by zero
      double w = 0.0;
      for (int r = 0; r < m_; ++r) {
        if (is_artificial(basis_[r])) w += std::max(0.0, x_basic_(r));
      }
      sol.phase1_infeasibility = w;
      if (w > opt_.infeasibility_tol) {
        sol.status = LpStatus::infeasible;
        return sol;
      }
      drive_out_artificials();
    }

    cost_.setZero();
    cost_.head(n_) = objective_;
    const auto status = iterate(/*phase_one=*/false, sol);
    if (status == LpStatus::unbounded) {
      sol.status = LpStatus::unbounded;
      return sol;
    }

    factor();
    x_basic_ = lu_.solve(b_);
    Eigen::VectorXd c_basic(m_);
    for (int r = 0; r < m_; ++r) c_basic(r) = cost_(basis_[r]);
    const Eigen::VectorXd y_scaled = lu_.transpose().solve(c_basic);
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < n_) sol.x(basis_[r]) = std::max(0.0, x_basic_(r));
    }
    // The slack reduced cost is -y_i, so clip round-off of the wrong sign.
    sol.y = (row_scale_.array() * y_scaled.array()).min(0.0).matrix();
    sol.objective = objective_.dot(sol.x);
    sol.status = LpStatus::optimal;
    return sol;
  }

 private:
  bool is_artificial(int col) const { return col >= n_ + m_; }

  void factor() {
    Eigen::MatrixXd B(m_, m_);
    for (int r = 0; r < m_; ++r) B.col(r) = A_.col(basis_[r]);
    lu_.compute(B);
    if (lu_.rank() < m_) {
      std::ostringstream msg;
      msg << "solve_lp: singular basis (rank " << lu_.rank() << " of " << m_
          << ", max pivot " << lu_.maxPivot() << ")";
      throw LpError(msg.str());
    }
  }

  LpStatus iterate(bool phase_one, LpSolution& sol) {
    bool bland = false;
    int degenerate_run = 0;
    std::vector<char> in_basis(A_.cols(), 0);
    const int cols = static_cast<int>(A_.cols());

    while (true) {
      if (sol.iterations >= opt_.max_iterations) {
        throw LpError("solve_lp: iteration limit reached");
      }
      factor();
      x_basic_ = lu_.solve(b_);
      Eigen::VectorXd c_basic(m_);
      std::fill(in_basis.begin(), in_basis.end(), 0);
      for (int r = 0; r < m_; ++r) {
        c_basic(r) = cost_(basis_[r]);
        in_basis[basis_[r]] = 1;
      }
      const Eigen::VectorXd y = lu_.transpose().solve(c_basic);

      // Pricing. Artificial columns never re-enter.
      int entering = -1;
      double best = -opt_.optimality_tol;
      for (int j = 0; j < n_ + m_; ++j) {
        if (in_basis[j]) continue;
        const double d = cost_(j) - A_.col(j).dot(y);
        if (bland) {
          if (d < -opt_.optimality_tol) {
            entering = j;
            break;
          }
        } else if (d < best) {
          best = d;
          entering = j;
        }
      }
      (void)cols;
      if (entering < 0) return LpStatus::optimal;

      const Eigen::VectorXd dir = lu_.solve(A_.col(entering));
      int leaving = -1;
      double min_ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m_; ++r) {
        double ratio;
        if (!phase_one && is_artificial(basis_[r]) &&
            std::abs(dir(r)) > opt_.pivot_tol) {
          ratio = 0.0;  // a zero-level artificial must stay at zero
        } else if (dir(r) > opt_.pivot_tol) {
          ratio = std::max(0.0, x_basic_(r)) / dir(r);
        } else {
          continue;
        }
        bool take = false;
        if (ratio < min_ratio - 1e-14) {
          take = true;
        } else if (ratio <= min_ratio + 1e-14 && leaving >= 0) {
          take = bland ? basis_[r] < basis_[leaving]
                       : std::abs(dir(r)) > std::abs(dir(leaving));
        }
        if (take) {
          min_ratio = std::min(ratio, min_ratio);
          leaving = r;
        }
      }
      if (leaving < 0) {
        if (phase_one) throw LpError("solve_lp: unbounded phase-1 problem");
        return LpStatus::unbounded;
      }

      if (min_ratio <= 1e-14) {
        if (++degenerate_run > opt_.degenerate_limit && !bland) {
          bland = true;
          sol.used_bland = true;
        }
      } else {
        degenerate_run = 0;
      }
      basis_[leaving] = entering;
      ++sol.iterations;
    }
  }

  void drive_out_artificials() {
    factor();
    for (int r = 0; r < m_; ++r) {
      if (!is_artificial(basis_[r])) continue;
      Eigen::VectorXd unit = Eigen::VectorXd::Zero(m_);
      unit(r) = 1.0;
      const Eigen::VectorXd row = lu_.transpose().solve(unit);
      int best = -1;
      double best_abs = opt_.pivot_tol;
      for (int j = 0; j < n_ + m_; ++j) {
        if (std::find(basis_.begin(), basis_.end(), j) != basis_.end()) continue;
        const double v = std::abs(A_.col(j).dot(row));
        if (v > best_abs) {
          best_abs = v;
          best = j;
        }
      }
      // Redundant rows keep their artificial; phase 2 pins it at zero.
      if (best >= 0) {
        basis_[r] = best;
        factor();
      }
    }
  }

  LpOptions opt_;
  int m_;
  int n_;
  Eigen::VectorXd row_scale_;
  Eigen::VectorXd b_;
  Eigen::MatrixXd A_;
  Eigen::VectorXd cost_;
  Eigen::VectorXd objective_;
  std::vector<int> artificial_rows_;
  std::vector<int> basis_;
  Eigen::VectorXd x_basic_;
  Eigen::FullPivLU<Eigen::MatrixXd> lu_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options) {
  lp.validate();
  if (lp.num_rows() == 0) {
    LpSolution sol;
    sol.x = Eigen::VectorXd::Zero(lp.num_cols());
    sol.y = Eigen::VectorXd::Zero(0);
    if ((lp.c.array() < 0.0).any()) {
      sol.status = LpStatus::unbounded;
    } else {
      sol.status = LpStatus::optimal;
    }
    return sol;
  }
  RevisedSimplex simplex(lp, options);
  return simplex.run();
}

LpResiduals lp_residuals(const LinearProgram& lp, const LpSolution& sol) {
  LpResiduals res;
  const Eigen::VectorXd slack = lp.b - lp.A * sol.x;
  const Eigen::VectorXd reduced = lp.c - lp.A.transpose() * sol.y;
  if (lp.num_rows() > 0) {
    res.primal = std::max(0.0, -slack.minCoeff());
    res.dual = std::max(0.0, sol.y.maxCoeff());
    res.complementarity = (sol.y.array() * slack.array()).abs().maxCoeff();
  }
  if (lp.num_cols() > 0) {
    res.primal = std::max(res.primal, std::max(0.0, -sol.x.minCoeff()));
    res.dual = std::max(res.dual, std::max(0.0, -reduced.minCoeff()));
    res.complementarity = std::max(
        res.complementarity, (sol.x.array() * reduced.array()).abs().maxCoeff());
  }
  res.gap = std::abs(lp.c.dot(sol.x) - lp.b.dot(sol.y));
  return res;
}

bool certifies_optimality(const LinearProgram& lp, const LpSolution& sol,
                          std::string* why) {
  if (sol.status != LpStatus::optimal) {
    if (why) *why = "status is " + to_string(sol.status);
    return false;
  }
  const LpResiduals r = lp_residuals(lp, sol);
  const double b_inf = lp.num_rows() > 0 ? lp.b.cwiseAbs().maxCoeff() : 0.0;
  const double obj = std::abs(lp.c.dot(sol.x));
  std::ostringstream msg;
  bool ok = true;
  if (r.primal > 1e-9 * (1.0 + b_inf)) {
    ok = false;
    msg << "primal residual " << r.primal << "; ";
  }
  if (r.dual > 1e-9) {
    ok = false;
    msg << "dual residual " << r.dual << "; ";
  }
  if (r.complementarity > 1e-8) {
    ok = false;
    msg << "complementarity " << r.complementarity << "; ";
  }
  if (r.gap > 1e-8 * (1.0 + obj)) {
    ok = false;
    msg << "duality gap " << r.gap << "; ";
  }
  if (why) *why = msg.str();
  return ok;
}

void write_lp(std::ostream& out, const LinearProgram& lp) {
  lp.validate();
  const auto old_precision = out.precision(17);
  out << "lp " << lp.num_rows() << ' ' << lp.num_cols() << '\n' << "min";
  for (Eigen::Index j = 0; j < lp.c.size(); ++j) out << ' ' << lp.c(j);
  out << '\n';
  for (int i = 0; i < lp.num_rows(); ++i) {
    out << "row";
    for (int j = 0; j < lp.num_cols(); ++j) out << ' ' << lp.A(i, j);
    out << " <= " << lp.b(i) << '\n';
  }
  out.precision(old_precision);
}

LinearProgram read_lp(std::istream& in) {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("read_lp: " + what);
  };
  std::string tag;
  int rows = 0;
  int cols = 0;
  if (!(in >> tag >> rows >> cols) || tag != "lp" || rows < 0 || cols < 0) {
    fail("bad header");
  }
  LinearProgram lp;
  lp.c.resize(cols);
  lp.A.resize(rows, cols);
  lp.b.resize(rows);
  if (!(in >> tag) || tag != "min") fail("expected 'min'");
  for (int j = 0; j < cols; ++j) {
    if (!(in >> lp.c(j))) fail("short objective row");
  }
  for (int i = 0; i < rows; ++i) {
    if (!(in >> tag) || tag != "row") fail("expected 'row'");
    for (int j = 0; j < cols; ++j) {
      if (!(in >> lp.A(i, j))) fail("short constraint row");
    }
    if (!(in >> tag) || tag != "<=" || !(in >> lp.b(i))) fail("expected '<= b'");
  }
  return lp;
}

}  // namespace mmimo
