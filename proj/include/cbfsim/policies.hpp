#pragma once

#include "cbfsim/baseline.hpp"
#include "cbfsim/barrier.hpp"
#include "cbfsim/qp.hpp"

#include <string_view>

namespace cbfsim {

enum class PolicyKind { Centralized, DecFollower, DecReciprocal, Ccs2, PccaDelay, PccaFilter };

const char* to_string(PolicyKind k);
PolicyKind policy_from_string(std::string_view name); // throws on unknown name
bool is_pcca(PolicyKind k);

// Host-side estimator memory for the predictor-corrector policies.
struct PccaState {
  std::vector<Vec2> w_hat;  // estimated deviation of each agent from the host's model
  std::vector<Vec2> u_prev; // host's previous-step solved control for each agent

  explicit PccaState(int n_agents = 0)
      : w_hat(n_agents, Vec2::Zero()), u_prev(n_agents, Vec2::Zero()) {}
};

struct StepOutcome {
  std::vector<Vec2> controls;            // one applied control per agent
  std::vector<char> per_agent_feasible;  // hard rows of that agent's QP satisfiable
  double worst_violation = 0.0;          // largest hard-row violation across QPs
};

// One QP over all agents' controls; requires every agent's preferred input.
StepOutcome centralized_step(const WorldState& world, const std::vector<Vec2>& goals,
                             const ScenarioConfig& cfg);

// Each agent takes full responsibility for every pairwise constraint.
StepOutcome dec_follower_step(const WorldState& world, const std::vector<Vec2>& goals,
                              const ScenarioConfig& cfg);

// Each agent takes half responsibility.
StepOutcome dec_reciprocal_step(const WorldState& world, const std::vector<Vec2>& goals,
                                const ScenarioConfig& cfg);

// Each host solves for everyone with unknown preferences set to zero and its
// own preference doubled in its rows, then applies u_ii* + u0_i.
StepOutcome ccs2_step(const WorldState& world, const std::vector<Vec2>& goals,
                      const ScenarioConfig& cfg);

// Predictor-corrector: each host solves for everyone, offsetting other agents
// by the estimated deviation w_hat between modeled and observed controls.
// applied_prev holds every agent's actually applied control from the previous
// step; use_filter selects the low-pass estimator (time constant
// cfg.pcca_filter_tau) over the one-sample delay.
StepOutcome pcca_step(const WorldState& world, const std::vector<Vec2>& goals,
                      const ScenarioConfig& cfg, std::vector<PccaState>& states,
                      const std::vector<Vec2>& applied_prev, bool use_filter);

// Proportional braking u_i = -lambda1 vel_i; guarantees every pairwise row
// F_ij >= 2 |v_ij|^2 when all pairs are inside the admissible set, which is
// checked first (throws naming the offending pair otherwise).
std::vector<Vec2> feasible_point_oracle(const WorldState& world, const ScenarioConfig& cfg);

// Dispatch on kind, carrying PCCA estimator state across steps.
class PolicyRunner {
 public:
  PolicyRunner(PolicyKind kind, int n_agents);
  StepOutcome step(const WorldState& world, const std::vector<Vec2>& goals,
                   const ScenarioConfig& cfg);
  PolicyKind kind() const { return kind_; }

 private:
  PolicyKind kind_;
  std::vector<PccaState> states_;
  std::vector<Vec2> applied_prev_;
};

} // namespace cbfsim
