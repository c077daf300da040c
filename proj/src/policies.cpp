#include "cbfsim/policies.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cbfsim {

const char* to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::Centralized: return "centralized";
    case PolicyKind::DecFollower: return "df";
    case PolicyKind::DecReciprocal: return "dr";
    case PolicyKind::Ccs2: return "ccs2";
    case PolicyKind::PccaDelay: return "pcca_delay";
    case PolicyKind::PccaFilter: return "pcca_filter";
  }
  return "?";
}

PolicyKind policy_from_string(std::string_view name) {
  if (name == "centralized" || name == "central") return PolicyKind::Centralized;
  if (name == "df") return PolicyKind::DecFollower;
  if (name == "dr") return PolicyKind::DecReciprocal;
  if (name == "ccs2") return PolicyKind::Ccs2;
  if (name == "pcca_delay" || name == "pcca") return PolicyKind::PccaDelay;
  if (name == "pcca_filter") return PolicyKind::PccaFilter;
  throw std::invalid_argument("unknown policy: " + std::string(name));
}

bool is_pcca(PolicyKind k) {
  return k == PolicyKind::PccaDelay || k == PolicyKind::PccaFilter;
}

namespace {

using Eigen::RowVectorXd;

std::vector<Vec2> baselines(const WorldState& world, const std::vector<Vec2>& goals,
                            const ScenarioConfig& cfg) {
  if (static_cast<int>(goals.size()) != world.count())
    throw std::invalid_argument("policies: goals length must match agent count");
  const LqrGain gain = lqr_gain(cfg.lqr_q);
  std::vector<Vec2> u0(goals.size());
  for (int i = 0; i < world.count(); ++i)
    u0[static_cast<std::size_t>(i)] = baseline_control(world.agents[i], goals[i], gain);
  return u0;
}

// Pair row spread over the stacked controls: +b on block i, -b on block j.
RowVectorXd pair_row(const PairConstraint& c, int n_agents) {
  RowVectorXd row = RowVectorXd::Zero(2 * n_agents);
  row.segment<2>(2 * c.i) = c.b;
  row.segment<2>(2 * c.j) = -c.b;
  return row;
}

RowVectorXd wall_row(const WallConstraint& c, int n_agents) {
  RowVectorXd row = RowVectorXd::Zero(2 * n_agents);
  row.segment<2>(2 * c.i) = c.b;
  return row;
}

StepOutcome uniform_outcome(const QpSolution& sol, int n_agents) {
  StepOutcome out;
  out.controls.resize(static_cast<std::size_t>(n_agents));
  out.per_agent_feasible.assign(static_cast<std::size_t>(n_agents), sol.feasible ? 1 : 0);
  out.worst_violation = sol.max_violation;
  return out;
}

} // namespace

StepOutcome centralized_step(const WorldState& world, const std::vector<Vec2>& goals,
                             const ScenarioConfig& cfg) {
  const int n = world.count();
  const std::vector<Vec2> u0 = baselines(world, goals, cfg);
  const double r_sq = cfg.constraint_radius_sq();

  QpProblem qp(2 * n);
  for (int i = 0; i < n; ++i) qp.cost_center.segment<2>(2 * i) = u0[static_cast<std::size_t>(i)];

  // Each unordered pair once: F_ij and F_ji are the same row.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const RelativeState rel = relative_state(world, i, j);
      const PairConstraint c = pair_constraint(rel.xi, rel.v, r_sq, cfg.l0, cfg.l1, i, j);
      qp.add_row(pair_row(c, n), c.a, /*hard=*/true);
    }
  for (int i = 0; i < n; ++i) {
    const WallConstraint w = wall_constraint(world.agents[i].pos, world.agents[i].vel,
                                             cfg.wall_radius(), cfg.l0, cfg.l1, i);
    qp.add_row(wall_row(w, n), w.a, /*hard=*/false);
  }

  const QpSolution sol = solve(qp);
  StepOutcome out = uniform_outcome(sol, n);
  for (int i = 0; i < n; ++i) out.controls[static_cast<std::size_t>(i)] = sol.u_star.segment<2>(2 * i);
  return out;
}

namespace {

StepOutcome decentralized_step(const WorldState& world, const std::vector<Vec2>& goals,
                               const ScenarioConfig& cfg, double responsibility) {
  const int n = world.count();
  const std::vector<Vec2> u0 = baselines(world, goals, cfg);
  const double r_sq = cfg.constraint_radius_sq();

  StepOutcome out;
  out.controls.resize(static_cast<std::size_t>(n));
  out.per_agent_feasible.assign(static_cast<std::size_t>(n), 1);

  for (int i = 0; i < n; ++i) {
    QpProblem qp(2);
    qp.cost_center = u0[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const RelativeState rel = relative_state(world, i, j);
      const PairConstraint c = pair_constraint(rel.xi, rel.v, r_sq, cfg.l0, cfg.l1, i, j);
      qp.add_row(c.b, responsibility * c.a, /*hard=*/true);
    }
    const WallConstraint w = wall_constraint(world.agents[i].pos, world.agents[i].vel,
                                             cfg.wall_radius(), cfg.l0, cfg.l1, i);
    qp.add_row(w.b, w.a, /*hard=*/false);

    const QpSolution sol = solve(qp);
    out.controls[static_cast<std::size_t>(i)] = sol.u_star;
    out.per_agent_feasible[static_cast<std::size_t>(i)] = sol.feasible ? 1 : 0;
    out.worst_violation = std::max(out.worst_violation, sol.max_violation);
  }
  return out;
}

} // namespace

StepOutcome dec_follower_step(const WorldState& world, const std::vector<Vec2>& goals,
                              const ScenarioConfig& cfg) {
  return decentralized_step(world, goals, cfg, 1.0);
}

StepOutcome dec_reciprocal_step(const WorldState& world, const std::vector<Vec2>& goals,
                                const ScenarioConfig& cfg) {
  return decentralized_step(world, goals, cfg, 0.5);
}

StepOutcome ccs2_step(const WorldState& world, const std::vector<Vec2>& goals,
                      const ScenarioConfig& cfg) {
  const int n = world.count();
  const std::vector<Vec2> u0 = baselines(world, goals, cfg);
  const double r_sq = cfg.constraint_radius_sq();

  StepOutcome out;
  out.controls.resize(static_cast<std::size_t>(n));
  out.per_agent_feasible.assign(static_cast<std::size_t>(n), 1);

  for (int host = 0; host < n; ++host) {
    // Host solves for everyone; cost center zero (unknown preferences).
    QpProblem qp(2 * n);

    // Host rows carry the doubled preference shift.
    for (int j = 0; j < n; ++j) {
      if (j == host) continue;
      const RelativeState rel = relative_state(world, host, j);
      const PairConstraint c = pair_constraint(rel.xi, rel.v, r_sq, cfg.l0, cfg.l1, host, j);
      qp.add_row(pair_row(c, n), c.a + 2.0 * c.b.dot(u0[static_cast<std::size_t>(host)]),
                 /*hard=*/true);
    }
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        if (j == host || k == host) continue;
        const RelativeState rel = relative_state(world, j, k);
        const PairConstraint c = pair_constraint(rel.xi, rel.v, r_sq, cfg.l0, cfg.l1, j, k);
        qp.add_row(pair_row(c, n), c.a, /*hard=*/true);
      }
    for (int j = 0; j < n; ++j) {
      const WallConstraint w = wall_constraint(world.agents[j].pos, world.agents[j].vel,
                                               cfg.wall_radius(), cfg.l0, cfg.l1, j);
      // The host's own variable is shifted by u0; its applied control
      // u_ii + u0 must see the unshifted wall row.
      const double shift = j == host ? w.b.dot(u0[static_cast<std::size_t>(host)]) : 0.0;
      qp.add_row(wall_row(w, n), w.a + shift, /*hard=*/false);
    }

    const QpSolution sol = solve(qp);
    out.controls[static_cast<std::size_t>(host)] =
        Vec2(sol.u_star.segment<2>(2 * host)) + u0[static_cast<std::size_t>(host)];
    out.per_agent_feasible[static_cast<std::size_t>(host)] = sol.feasible ? 1 : 0;
    out.worst_violation = std::max(out.worst_violation, sol.max_violation);
  }
  return out;
}

StepOutcome pcca_step(const WorldState& world, const std::vector<Vec2>& goals,
                      const ScenarioConfig& cfg, std::vector<PccaState>& states,
                      const std::vector<Vec2>& applied_prev, bool use_filter) {
  const int n = world.count();
  if (static_cast<int>(states.size()) != n || static_cast<int>(applied_prev.size()) != n)
    throw std::invalid_argument("pcca_step: state/control list length mismatch");
  const std::vector<Vec2> u0 = baselines(world, goals, cfg);
  const double r_sq = cfg.constraint_radius_sq();

  StepOutcome out;
  out.controls.resize(static_cast<std::size_t>(n));
  out.per_agent_feasible.assign(static_cast<std::size_t>(n), 1);

  for (int host = 0; host < n; ++host) {
    PccaState& st = states[static_cast<std::size_t>(host)];

    // Observed deviation between what each agent applied and what the host
    // had computed for it, one sample behind.
    for (int j = 0; j < n; ++j) {
      if (j == host) continue;
      const Vec2 innov =
          applied_prev[static_cast<std::size_t>(j)] - st.u_prev[static_cast<std::size_t>(j)];
      if (use_filter)
        st.w_hat[static_cast<std::size_t>(j)] +=
            (cfg.dt / cfg.pcca_filter_tau) * (innov - st.w_hat[static_cast<std::size_t>(j)]);
      else
        st.w_hat[static_cast<std::size_t>(j)] = innov;
    }

    QpProblem qp(2 * n);
    qp.cost_center.segment<2>(2 * host) = u0[static_cast<std::size_t>(host)];

    auto what = [&](int j) -> const Vec2& { return st.w_hat[static_cast<std::size_t>(j)]; };

    for (int j = 0; j < n; ++j) {
      if (j == host) continue;
      const RelativeState rel = relative_state(world, host, j);
      const PairConstraint c = pair_constraint(rel.xi, rel.v, r_sq, cfg.l0, cfg.l1, host, j);
      qp.add_row(pair_row(c, n), c.a - c.b.dot(what(j)), /*hard=*/true);
    }
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        if (j == host || k == host) continue;
        const RelativeState rel = relative_state(world, j, k);
        const PairConstraint c = pair_constraint(rel.xi, rel.v, r_sq, cfg.l0, cfg.l1, j, k);
        qp.add_row(pair_row(c, n), c.a + c.b.dot(what(j) - what(k)), /*hard=*/true);
      }
    for (int j = 0; j < n; ++j) {
      const WallConstraint w = wall_constraint(world.agents[j].pos, world.agents[j].vel,
                                               cfg.wall_radius(), cfg.l0, cfg.l1, j);
      const double shift = j == host ? 0.0 : w.b.dot(what(j));
      qp.add_row(wall_row(w, n), w.a + shift, /*hard=*/false);
    }

    const QpSolution sol = solve(qp);
    out.controls[static_cast<std::size_t>(host)] = sol.u_star.segment<2>(2 * host);
    out.per_agent_feasible[static_cast<std::size_t>(host)] = sol.feasible ? 1 : 0;
    out.worst_violation = std::max(out.worst_violation, sol.max_violation);
    for (int j = 0; j < n; ++j)
      st.u_prev[static_cast<std::size_t>(j)] = sol.u_star.segment<2>(2 * j);
  }
  return out;
}

std::vector<Vec2> feasible_point_oracle(const WorldState& world, const ScenarioConfig& cfg) {
  const double lambda1 = cfg.lambda1();
  const double r_sq = cfg.constraint_radius_sq();
  for (int i = 0; i < world.count(); ++i)
    for (int j = i + 1; j < world.count(); ++j) {
      const RelativeState rel = relative_state(world, i, j);
      if (!diagnostics(rel.xi, rel.v, r_sq, cfg.r0, lambda1).in_cstar)
        throw std::invalid_argument("feasible_point_oracle: pair (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") outside the admissible set");
    }
  std::vector<Vec2> u(static_cast<std::size_t>(world.count()));
  for (int i = 0; i < world.count(); ++i)
    u[static_cast<std::size_t>(i)] = -lambda1 * world.agents[i].vel;
  return u;
}

PolicyRunner::PolicyRunner(PolicyKind kind, int n_agents)
    : kind_(kind),
      states_(static_cast<std::size_t>(n_agents), PccaState(n_agents)),
      applied_prev_(static_cast<std::size_t>(n_agents), Vec2::Zero()) {}

StepOutcome PolicyRunner::step(const WorldState& world, const std::vector<Vec2>& goals,
                               const ScenarioConfig& cfg) {
  StepOutcome out;
  switch (kind_) {
    case PolicyKind::Centralized: out = centralized_step(world, goals, cfg); break;
    case PolicyKind::DecFollower: out = dec_follower_step(world, goals, cfg); break;
    case PolicyKind::DecReciprocal: out = dec_reciprocal_step(world, goals, cfg); break;
    case PolicyKind::Ccs2: out = ccs2_step(world, goals, cfg); break;
    case PolicyKind::PccaDelay:
      out = pcca_step(world, goals, cfg, states_, applied_prev_, false);
      break;
    case PolicyKind::PccaFilter:
      out = pcca_step(world, goals, cfg, states_, applied_prev_, true);
      break;
  }
  applied_prev_ = out.controls;
  return out;
}

} // namespace cbfsim
