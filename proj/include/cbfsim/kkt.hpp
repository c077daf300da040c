#pragma once

#include "cbfsim/qp.hpp"

namespace cbfsim {

// Scaled KKT residuals, each nonnegative and ~0 at an exact optimum.
struct KktReport {
  double stationarity = 0.0;
  double primal = 0.0;
  double dual = 0.0;
  double complementarity = 0.0;

  double worst() const;
  bool pass(double tol = 1e-8) const { return worst() <= tol; }
};

// Recomputes the KKT system of the problem the solver reports having solved
// (soft rows slack-relaxed; every row relaxed when feasible is false) from the
// problem data and the returned point, independent of solver internals.
KktReport check_kkt(const QpProblem& p, const QpSolution& s, const QpSolverOptions& opt = {});

} // namespace cbfsim
