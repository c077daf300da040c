#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace cbfsim {

// Strictly convex program: min ||u - cost_center||^2 (+ slack penalties on
// soft rows) subject to row_coefs.row(i) * u + row_offsets(i) >= 0.
struct QpProblem {
  Eigen::VectorXd cost_center;
  Eigen::MatrixXd row_coefs;
  Eigen::VectorXd row_offsets;
  std::vector<char> row_is_hard;

  explicit QpProblem(int n = 0)
      : cost_center(Eigen::VectorXd::Zero(n)), row_coefs(0, n), row_offsets(0) {}

  int dim() const { return static_cast<int>(cost_center.size()); }
  int rows() const { return static_cast<int>(row_offsets.size()); }
  void add_row(const Eigen::RowVectorXd& coef, double offset, bool hard = true);
};

struct QpSolution {
  Eigen::VectorXd u_star;
  bool feasible = true;        // hard rows satisfiable
  double max_violation = 0.0;  // largest hard-row slack; 0 when feasible
  std::vector<int> active_set; // original row indices, ascending
  double kkt_residual = 0.0;   // worst scaled KKT residual of the solved problem
  Eigen::VectorXd multipliers;    // one per row (for its slacked form when relaxed)
  Eigen::VectorXd slacks;         // one per row; nonzero only on relaxed rows
  std::vector<char> relaxed_rows; // which rows carried a slack in the solved problem
  int iterations = 0;
};

class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QpSolverOptions {
  double rho_hard = 1e6; // slack penalty when hard rows must be relaxed
  double rho_soft = 1e4; // slack penalty on soft rows
  double feas_tol = 1e-9;
  int max_iter_per_row = 100;
};

// Two-phase solve: hard rows enforced exactly (soft rows always slack-
// penalized); on hard-row conflict falls back to the least-infeasible
// relaxation and reports feasible = false.
QpSolution solve(const QpProblem& p, const QpSolverOptions& opt = {});

// The relaxation alone: every row gets a penalized slack.
QpSolution solve_relaxed(const QpProblem& p, const QpSolverOptions& opt = {});

} // namespace cbfsim
