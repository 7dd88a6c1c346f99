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

#include "mmimo/socp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mmimo {

void SocProgram::validate() const {
  const int n = num_vars();
  if (linear.size() != n) throw std::invalid_argument("SocProgram: linear term size");
  if ((quad.array() < 0.0).any()) {
    throw std::invalid_argument("SocProgram: quadratic weights must be >= 0");
  }
  for (const SocCone& cone : cones) {
    if (cone.A.cols() != n || cone.c.size() != n || cone.b.size() != cone.A.rows()) {
      throw std::invalid_argument("SocProgram: cone dimensions");
    }
  }
}

double SocProgram::objective(const Eigen::VectorXd& x) const {
  return (quad.array() * x.array().square()).sum() + linear.dot(x);
}

std::string to_string(SocStatus status) {
  switch (status) {
    case SocStatus::optimal:
      return "optimal";
    case SocStatus::infeasible:
      return "infeasible";
    case SocStatus::iteration_limit:
      return "iteration_limit";
  }
  return "unknown";
}

double SocCertificate::worst() const {
  return std::max({gap, stationarity, cone_residual});
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Barrier objective t * f(x) + sum_j -log r_j(x).
class Barrier {
 public:
  explicit Barrier(const SocProgram& program) : p_(program) {}

  double value(const Eigen::VectorXd& x, double t) const {
    double sum = t * p_.objective(x);
    for (const SocCone& cone : p_.cones) {
      const double s = cone.c.dot(x) + cone.d;
      if (!(s > 0.0)) return kInf;
      const double r = s * s - (cone.A * x + cone.b).squaredNorm();
      if (!(r > 0.0)) return kInf;
      sum -= std::log(r);
    }
    return sum;
  }

  void derivatives(const Eigen::VectorXd& x, double t, Eigen::VectorXd& grad,
                   Eigen::MatrixXd& hess) const {
    const int n = p_.num_vars();
    grad = t * (2.0 * p_.quad.cwiseProduct(x) + p_.linear);
    hess = (2.0 * t * p_.quad).asDiagonal();
    for (const SocCone& cone : p_.cones) {
      const Eigen::VectorXd y = cone.A * x + cone.b;
      const double s = cone.c.dot(x) + cone.d;
      const double r = s * s - y.squaredNorm();
      const Eigen::VectorXd g =
          (2.0 * Eigen::VectorXd(cone.A.transpose() * y) - 2.0 * s * cone.c) / r;
      grad += g;
      const Eigen::MatrixXd ata =
          Eigen::MatrixXd(Eigen::SparseMatrix<double>(cone.A.transpose() * cone.A));
      hess.noalias() += (2.0 / r) * (ata - cone.c * cone.c.transpose());
      hess.noalias() += g * g.transpose();
    }
    (void)n;
  }

 private:
  const SocProgram& p_;
};

struct CenterOutcome {
  bool stalled = false;
};

// Damped Newton on the barrier objective. `stop` is polled after every step.
template <typename Stop>
CenterOutcome center(const Barrier& barrier, Eigen::VectorXd& x, double t,
                     const SocOptions& options, int& steps, Stop&& stop) {
  CenterOutcome out;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  double fx = barrier.value(x, t);
  double previous = kInf;
  while (steps < options.max_newton_steps) {
    barrier.derivatives(x, t, grad, hess);
    Eigen::LLT<Eigen::MatrixXd> llt(hess);
    Eigen::VectorXd dx;
    if (llt.info() == Eigen::Success) {
      dx = -llt.solve(grad);
    } else {
      const double reg = 1e-12 * std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
      Eigen::MatrixXd shifted = hess;
      shifted.diagonal().array() += reg;
      dx = -shifted.ldlt().solve(grad);
    }
    const double decrement = -grad.dot(dx);
    if (!(decrement >= 0.0) || decrement / 2.0 <= options.centering_tol) break;
    // Rounding floor: Newton stopped converging quadratically.
    if (decrement < 1e-6 && decrement > 0.25 * previous) break;
    previous = decrement;

    double step = 1.0;
    Eigen::VectorXd trial;
    double ftrial = kInf;
    // Close to the centre the decrease is below the rounding level of the
    // barrier value, so a full step is taken once it stays interior.
    const bool quadratic = decrement < 1e-6;
    while (step > 1e-16) {
      trial = x + step * dx;
      ftrial = barrier.value(trial, t);
      if (quadratic ? std::isfinite(ftrial)
                    : ftrial <= fx - 0.25 * step * decrement) {
        break;
      }
      step *= 0.5;
    }
    ++steps;
    if (!std::isfinite(ftrial) || (!quadratic && !(ftrial < fx))) {
      out.stalled = true;
      break;
    }
    x = trial;
    fx = ftrial;
    if (stop(x)) break;
  }
  return out;
}

double cone_margin(const SocCone& cone, const Eigen::VectorXd& x) {
  return cone.c.dot(x) + cone.d - (cone.A * x + cone.b).norm();
}

}  // namespace

SocCertificate soc_certificate(const SocProgram& p, const Eigen::VectorXd& x) {
  constexpr double kActiveMargin = 1e-4;
  SocCertificate cert;
  const int n = p.num_vars();
  const int m = static_cast<int>(p.cones.size());
  const Eigen::VectorXd grad_f = 2.0 * p.quad.cwiseProduct(x) + p.linear;

  // Multipliers read off the barrier gradient lose accuracy as the margins
  // shrink, so cones are only classified by their relative margin. Each active cone gets a
  // dual on the boundary of the dual cone, (z, eta) = eta (-y / |y|, 1),
  // and the scalars eta are fitted to the stationarity condition.
  std::vector<Eigen::VectorXd> y(m);
  std::vector<double> s(m);
  std::vector<int> active;
  for (int j = 0; j < m; ++j) {
    const SocCone& cone = p.cones[j];
    y[j] = cone.A * x + cone.b;
    s[j] = cone.c.dot(x) + cone.d;
    cert.cone_residual = std::max(cert.cone_residual, y[j].norm() - s[j]);
    if (s[j] - y[j].norm() < kActiveMargin * std::max(s[j], 1e-300)) {
      active.push_back(j);
    }
  }
  auto direction = [&](int j) {
    const SocCone& cone = p.cones[j];
    const double norm = y[j].norm();
    Eigen::VectorXd d = cone.c;
    if (norm > 0.0) d -= cone.A.transpose() * (y[j] / norm);
    return d;
  };
  Eigen::VectorXd eta_all = Eigen::VectorXd::Zero(m);
  while (!active.empty()) {
    Eigen::MatrixXd D(n, active.size());
    for (std::size_t a = 0; a < active.size(); ++a) D.col(a) = direction(active[a]);
    const Eigen::VectorXd eta = D.colPivHouseholderQr().solve(grad_f);
    std::vector<int> kept;
    for (std::size_t a = 0; a < active.size(); ++a) {
      if (eta(a) >= 0.0) kept.push_back(active[a]);
    }
    if (kept.size() == active.size()) {
      for (std::size_t a = 0; a < active.size(); ++a) eta_all(active[a]) = eta(a);
      break;
    }
    active = std::move(kept);
  }

  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  double offset = 0.0;  // sum_j z_j^T b_j + eta_j d_j
  for (int j = 0; j < m; ++j) {
    if (eta_all(j) == 0.0) continue;
    const SocCone& cone = p.cones[j];
    const double norm = y[j].norm();
    Eigen::VectorXd z = Eigen::VectorXd::Zero(y[j].size());
    if (norm > 0.0) z = -eta_all(j) * y[j] / norm;
    v += cone.A.transpose() * z + eta_all(j) * cone.c;
    offset += z.dot(cone.b) + eta_all(j) * cone.d;
  }
  const double f = p.objective(x);
  cert.stationarity = (grad_f - v).cwiseAbs().maxCoeff() /
                      std::max(1.0, grad_f.cwiseAbs().maxCoeff());
  // Dual bound: inf_x f(x) - v^T x - offset, separable over coordinates.
  double bound = -offset;
  bool bounded = true;
  for (int j = 0; j < n; ++j) {
    const double a = p.linear(j) - v(j);
    if (p.quad(j) > 0.0) {
      bound -= a * a / (4.0 * p.quad(j));
    } else if (a != 0.0) {
      bounded = false;
    }
  }
  cert.gap = bounded ? std::max(0.0, f - bound) / std::max(1.0, std::abs(f))
                     : std::numeric_limits<double>::infinity();
  return cert;
}

SocSolution solve_soc(const SocProgram& program, const SocOptions& options) {
  program.validate();
  const int n = program.num_vars();
  const int m = static_cast<int>(program.cones.size());
  SocSolution sol;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);

  // Feasibility phase: minimize a common slack s added to every cone.
  double worst = kInf;
  for (const SocCone& cone : program.cones) worst = std::min(worst, cone_margin(cone, x));
  if (m > 0 && !(worst > 0.0)) {
    SocProgram aux;
    aux.quad = Eigen::VectorXd::Zero(n + 1);
    aux.linear = Eigen::VectorXd::Zero(n + 1);
    aux.linear(n) = 1.0;
    const double s0 = 1.0 - worst;
    for (const SocCone& cone : program.cones) {
      SocCone c = cone;
      c.A.conservativeResize(cone.A.rows(), n + 1);
      c.c.conservativeResize(n + 1);
      c.c(n) = 1.0;
      aux.cones.push_back(std::move(c));
    }
    // Floor s >= -s0 keeps the auxiliary program bounded.
    SocCone floor;
    floor.A.resize(0, n + 1);
    floor.b.resize(0);
    floor.c = Eigen::VectorXd::Zero(n + 1);
    floor.c(n) = 1.0;
    floor.d = s0;
    aux.cones.push_back(std::move(floor));

    Barrier barrier(aux);
    Eigen::VectorXd z(n + 1);
    z.head(n).setZero();
    z(n) = s0;
    const double nu = 2.0 * static_cast<double>(aux.cones.size());
    double t = nu / s0;
    bool found = false;
    while (true) {
      const CenterOutcome oc = center(barrier, z, t, options, sol.newton_steps,
                                      [&](const Eigen::VectorXd& zz) { return zz(n) < 0.0; });
      sol.phase1_value = z(n);
      if (z(n) < 0.0) {
        found = true;
        break;
      }
      const double gap = nu / t;
      if (z(n) - 1.5 * gap > 0.0 || gap < 1e-13 * s0 || oc.stalled) break;
      if (sol.newton_steps >= options.max_newton_steps) {
        sol.status = SocStatus::iteration_limit;
        return sol;
      }
      t *= options.barrier_growth;
    }
    if (!found) {
      sol.status = SocStatus::infeasible;
      sol.x = z.head(n);
      return sol;
    }
    x = z.head(n);
  }

  // Optimality phase.
  Barrier barrier(program);
  const double nu = 2.0 * m;
  double t = nu / std::max(std::abs(program.objective(x)), 1e-12);
  if (m == 0) t = 1.0;
  while (true) {
    const CenterOutcome oc =
        center(barrier, x, t, options, sol.newton_steps, [](const Eigen::VectorXd&) { return false; });
    const double f = program.objective(x);
    if (m == 0 || nu / t <= options.rel_gap * std::abs(f) || oc.stalled) break;
    if (sol.newton_steps >= options.max_newton_steps) {
      sol.status = SocStatus::iteration_limit;
      sol.x = x;
      sol.objective = f;
      sol.certificate = soc_certificate(program, x);
      return sol;
    }
    t *= options.barrier_growth;
  }
  sol.status = SocStatus::optimal;
  sol.x = x;
  sol.objective = program.objective(x);
  sol.certificate = m > 0 ? soc_certificate(program, x) : SocCertificate{};
  return sol;
}

}  // namespace mmimo
