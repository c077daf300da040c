#include "cbfsim/kkt.hpp"

#include <algorithm>
#include <cmath>

namespace cbfsim {

double KktReport::worst() const {
  return std::max({stationarity, primal, dual, complementarity});
}

KktReport check_kkt(const QpProblem& p, const QpSolution& s, const QpSolverOptions& opt) {
  const int m = p.rows();
  const Eigen::VectorXd& u = s.u_star;
  const Eigen::VectorXd& lam = s.multipliers;

  KktReport rep;

  // Stationarity in u: 2 (u - u0) = sum_i lambda_i coef_i'.
  Eigen::VectorXd grad = 2.0 * (u - p.cost_center);
  double st_scale = 1.0 + grad.cwiseAbs().maxCoeff();
  for (int i = 0; i < m; ++i) {
    grad -= lam(i) * p.row_coefs.row(i).transpose();
    st_scale = std::max(st_scale, std::abs(lam(i)) * p.row_coefs.row(i).cwiseAbs().maxCoeff());
  }
  rep.stationarity = grad.cwiseAbs().maxCoeff() / st_scale;

  double primal = 0.0, dual = 0.0, compl_ = 0.0;
  double pscale = 1.0, cscale = 1.0;
  for (int i = 0; i < m; ++i) {
    const bool relaxed = i < static_cast<int>(s.relaxed_rows.size()) && s.relaxed_rows[i];
    const double plain = p.row_coefs.row(i).dot(u) + p.row_offsets(i);
    const double rscale = 1.0 + std::abs(p.row_coefs.row(i).dot(u)) + std::abs(p.row_offsets(i));
    pscale = std::max(pscale, rscale);

    double resid = plain;
    if (relaxed) {
      const double sl = s.slacks(i);
      resid = plain + sl;
      primal = std::max(primal, -sl); // s_i >= 0
      // Multiplier of the s_i >= 0 bound, from stationarity in s_i.
      const double rho = p.row_is_hard[static_cast<std::size_t>(i)] ? opt.rho_hard : opt.rho_soft;
      const double mu = 2.0 * rho * sl - lam(i);
      dual = std::max(dual, -mu / (1.0 + 2.0 * rho * sl + std::abs(lam(i))));
      compl_ = std::max(compl_, std::abs(mu * sl));
      cscale = std::max(cscale, (1.0 + std::abs(mu)) * (1.0 + std::abs(sl)));
    }
    primal = std::max(primal, -resid);
    dual = std::max(dual, -lam(i) / (1.0 + std::abs(lam(i))));
    compl_ = std::max(compl_, std::abs(lam(i) * resid));
    cscale = std::max(cscale, (1.0 + std::abs(lam(i))) * rscale);
  }
  rep.primal = primal / pscale;
  rep.dual = dual;
  rep.complementarity = compl_ / cscale;
  return rep;
}

} // namespace cbfsim
