#include "cbfsim/qp.hpp"

#include "cbfsim/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cbfsim {

void QpProblem::add_row(const Eigen::RowVectorXd& coef, double offset, bool hard) {
  if (coef.size() != dim()) throw std::invalid_argument("add_row: coefficient size mismatch");
  row_coefs.conservativeResize(rows() + 1, dim());
  row_coefs.row(rows() - 1) = coef;
  row_offsets.conservativeResize(rows());
  row_offsets(rows() - 1) = offset;
  row_is_hard.push_back(hard ? 1 : 0);
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Internal diagonal-Hessian form: min sum_k gdiag_k (x_k - center_k)^2
// subject to A x + b >= 0. The unconstrained optimum is x = center.
struct DiagonalQp {
  VectorXd gdiag;
  VectorXd center;
  MatrixXd A;
  VectorXd b;
};

struct ActiveSetResult {
  VectorXd x;
  VectorXd lambda; // per row of A, zero on inactive rows
  std::vector<int> active;
  bool feasible = true;
  int infeasible_row = -1;
  int iterations = 0;
};

// Dual active-set iteration (Goldfarb-Idnani): start at the unconstrained
// optimum, repeatedly pull in the most violated row. Maintains x optimal for
// the active equalities with nonnegative multipliers throughout, so
// termination at primal feasibility is global optimality; when a violated
// row's normal lies in the span of the active ones with no droppable row,
// that row certifies infeasibility.
ActiveSetResult active_set_solve(const DiagonalQp& qp, int iter_cap) {
  const int n = static_cast<int>(qp.center.size());
  const int m = static_cast<int>(qp.b.size());
  const VectorXd ginv = qp.gdiag.cwiseInverse();

  ActiveSetResult res;
  res.x = qp.center;
  res.lambda = VectorXd::Zero(m);

  std::vector<int> W;
  std::vector<double> lamW;

  const double bscale = m > 0 ? std::max(1.0, qp.b.cwiseAbs().maxCoeff()) : 1.0;
  const double viol_tol = 1e-11 * bscale;

  int iters = 0;
  while (true) {
    if (++iters > iter_cap) throw SolverFailure("active set iteration cap exceeded");

    // Most violated row, lowest index on ties.
    int p = -1;
    double worst = -viol_tol;
    for (int i = 0; i < m; ++i) {
      const double r = qp.A.row(i).dot(res.x) + qp.b(i);
      if (r < worst) { worst = r; p = i; }
    }
    if (p < 0) break; // primal feasible -> optimal

    double u_plus = 0.0;
    while (true) {
      if (++iters > iter_cap) throw SolverFailure("active set iteration cap exceeded");

      const VectorXd n_p = qp.A.row(p).transpose();
      const int q = static_cast<int>(W.size());

      VectorXd nu(q);
      VectorXd z;
      if (q == 0) {
        z = ginv.cwiseProduct(n_p);
      } else {
        MatrixXd Aw(q, n);
        for (int k = 0; k < q; ++k) Aw.row(k) = qp.A.row(W[k]);
        const MatrixXd Bw = Aw * ginv.asDiagonal();      // q x n
        const MatrixXd N = Bw * Aw.transpose();          // q x q, PSD
        // Rank-revealing solve keeps dual-degenerate active sets harmless.
        nu = N.completeOrthogonalDecomposition().solve(Bw * n_p);
        z = ginv.cwiseProduct(n_p - Aw.transpose() * nu);
      }

      const double zscale = ginv.cwiseProduct(n_p).cwiseAbs().maxCoeff();
      const bool z_is_zero = z.cwiseAbs().maxCoeff() <= 1e-11 * zscale + 1e-300;

      // Dual blocking step: smallest lambda/nu over nu > 0.
      double t2 = std::numeric_limits<double>::infinity();
      int k2 = -1;
      for (int k = 0; k < q; ++k) {
        if (nu(k) > 1e-12) {
          const double ratio = lamW[static_cast<std::size_t>(k)] / nu(k);
          if (ratio < t2 || (ratio == t2 && k2 >= 0 && W[k] < W[k2])) { t2 = ratio; k2 = k; }
        }
      }

      if (z_is_zero) {
        if (k2 < 0) {
          res.feasible = false;
          res.infeasible_row = p;
          res.iterations = iters;
          return res;
        }
        for (int k = 0; k < q; ++k) lamW[static_cast<std::size_t>(k)] -= t2 * nu(k);
        u_plus += t2;
        W.erase(W.begin() + k2);
        lamW.erase(lamW.begin() + k2);
        continue;
      }

      const double denom = n_p.dot(z); // = z' G z > 0
      const double t1 = -(qp.A.row(p).dot(res.x) + qp.b(p)) / denom;
      const double t = std::min(t1, t2);
      res.x += t * z;
      for (int k = 0; k < q; ++k) lamW[static_cast<std::size_t>(k)] -= t * nu(k);
      u_plus += t;
      if (!res.x.allFinite()) throw SolverFailure("active set produced non-finite iterate");

      if (t1 <= t2) {
        W.push_back(p);
        lamW.push_back(u_plus);
        break;
      }
      W.erase(W.begin() + k2);
      lamW.erase(lamW.begin() + k2);
    }
  }

  // Polish: re-solve the equality-constrained optimum on the final active set
  // with one round of iterative refinement.
  const int q = static_cast<int>(W.size());
  if (q > 0) {
    MatrixXd Aw(q, n);
    for (int k = 0; k < q; ++k) Aw.row(k) = qp.A.row(W[k]);
    VectorXd bw(q);
    for (int k = 0; k < q; ++k) bw(k) = qp.b(W[k]);
    const MatrixXd Bw = Aw * ginv.asDiagonal();
    const MatrixXd N = Bw * Aw.transpose();
    const VectorXd rhs = -(Aw * qp.center + bw);
    auto cod = N.completeOrthogonalDecomposition();
    VectorXd lam = cod.solve(rhs);
    lam += cod.solve(rhs - N * lam);
    for (int k = 0; k < q; ++k) lam(k) = std::max(0.0, lam(k));
    res.x = qp.center + ginv.cwiseProduct(Aw.transpose() * lam);
    for (int k = 0; k < q; ++k) res.lambda(W[k]) = lam(k);
  }
  res.active = W;
  std::sort(res.active.begin(), res.active.end());
  res.iterations = iters;
  return res;
}

// Appends one slack variable per relaxed row: the row gains +s_i, the slack
// gains a bound row s_i >= 0 and a penalty rho_i s_i^2 in the cost.
DiagonalQp expand(const QpProblem& p, const std::vector<int>& relaxed,
                  const std::vector<double>& rho) {
  const int n = p.dim();
  const int m = p.rows();
  const int ns = static_cast<int>(relaxed.size());

  DiagonalQp qp;
  qp.gdiag = VectorXd::Constant(n + ns, 2.0);
  for (int k = 0; k < ns; ++k) qp.gdiag(n + k) = 2.0 * rho[static_cast<std::size_t>(k)];
  qp.center = VectorXd::Zero(n + ns);
  qp.center.head(n) = p.cost_center;
  qp.A = MatrixXd::Zero(m + ns, n + ns);
  qp.b = VectorXd::Zero(m + ns);
  qp.A.topLeftCorner(m, n) = p.row_coefs;
  qp.b.head(m) = p.row_offsets;
  for (int k = 0; k < ns; ++k) {
    qp.A(relaxed[static_cast<std::size_t>(k)], n + k) = 1.0; // slacked inequality
    qp.A(m + k, n + k) = 1.0;                                // s_k >= 0
  }
  return qp;
}

void validate_inputs(const QpProblem& p) {
  if (p.dim() < 1) throw std::invalid_argument("qp: dim must be >= 1");
  if (p.row_coefs.rows() != p.rows() ||
      static_cast<int>(p.row_is_hard.size()) != p.rows() || p.row_coefs.cols() != p.dim())
    throw std::invalid_argument("qp: inconsistent problem shape");
  if (!p.cost_center.allFinite() || !p.row_coefs.allFinite() || !p.row_offsets.allFinite())
    throw std::invalid_argument("qp: non-finite input");
}

QpSolution finish(const QpProblem& p, const ActiveSetResult& as, const std::vector<int>& relaxed,
                  bool feasible, const QpSolverOptions& opt) {
  const int n = p.dim();
  const int m = p.rows();

  QpSolution sol;
  sol.u_star = as.x.head(n);
  sol.feasible = feasible;
  sol.iterations = as.iterations;
  sol.multipliers = as.lambda.head(m);
  sol.slacks = Eigen::VectorXd::Zero(m);
  sol.relaxed_rows.assign(static_cast<std::size_t>(m), 0);
  for (std::size_t k = 0; k < relaxed.size(); ++k) {
    sol.slacks(relaxed[k]) = std::max(0.0, as.x(n + static_cast<int>(k)));
    sol.relaxed_rows[static_cast<std::size_t>(relaxed[k])] = 1;
  }
  for (int i : as.active)
    if (i < m) sol.active_set.push_back(i);

  sol.max_violation = 0.0;
  for (int i = 0; i < m; ++i)
    if (p.row_is_hard[static_cast<std::size_t>(i)])
      sol.max_violation = std::max(sol.max_violation, sol.slacks(i));
  if (sol.max_violation <= opt.feas_tol) sol.max_violation = 0.0;

  sol.kkt_residual = check_kkt(p, sol, opt).worst();
  return sol;
}

QpSolution relax_all(const QpProblem& p, const QpSolverOptions& opt, bool mark_feasible_if_clean) {
  std::vector<int> relaxed;
  std::vector<double> rho;
  for (int i = 0; i < p.rows(); ++i) {
    relaxed.push_back(i);
    rho.push_back(p.row_is_hard[static_cast<std::size_t>(i)] ? opt.rho_hard : opt.rho_soft);
  }
  const DiagonalQp full = expand(p, relaxed, rho);
  const int cap = std::max(100, opt.max_iter_per_row * static_cast<int>(full.b.size()));
  const ActiveSetResult as = active_set_solve(full, cap);
  if (!as.feasible) throw SolverFailure("relaxed problem reported infeasible");

  QpSolution sol = finish(p, as, relaxed, false, opt);
  if (mark_feasible_if_clean && sol.max_violation == 0.0) sol.feasible = true;
  return sol;
}

} // namespace

QpSolution solve(const QpProblem& p, const QpSolverOptions& opt) {
  validate_inputs(p);

  // A zero hard row with negative offset can never be satisfied.
  bool structurally_infeasible = false;
  for (int i = 0; i < p.rows() && !structurally_infeasible; ++i)
    if (p.row_is_hard[static_cast<std::size_t>(i)] &&
        p.row_coefs.row(i).cwiseAbs().maxCoeff() == 0.0 && p.row_offsets(i) < 0.0)
      structurally_infeasible = true;

  if (!structurally_infeasible) {
    std::vector<int> relaxed;
    std::vector<double> rho;
    for (int i = 0; i < p.rows(); ++i)
      if (!p.row_is_hard[static_cast<std::size_t>(i)]) {
        relaxed.push_back(i);
        rho.push_back(opt.rho_soft);
      }
    const DiagonalQp phase1 = expand(p, relaxed, rho);
    const int cap = std::max(100, opt.max_iter_per_row * static_cast<int>(phase1.b.size()));
    const ActiveSetResult as = active_set_solve(phase1, cap);
    if (as.feasible) return finish(p, as, relaxed, true, opt);
  }
  return relax_all(p, opt, /*mark_feasible_if_clean=*/false);
}

QpSolution solve_relaxed(const QpProblem& p, const QpSolverOptions& opt) {
  validate_inputs(p);
  return relax_all(p, opt, /*mark_feasible_if_clean=*/true);
}

} // namespace cbfsim
