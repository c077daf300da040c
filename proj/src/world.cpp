#include "cbfsim/world.hpp"

#include <cmath>
#include <stdexcept>

namespace cbfsim {

double ScenarioConfig::lambda1() const {
  const double disc = l1 * l1 - 4.0 * l0;
  return 0.5 * (l1 - std::sqrt(disc));
}

void ScenarioConfig::validate() const {
  auto fail = [](const char* what) { throw std::invalid_argument(std::string("ScenarioConfig: ") + what); };
  if (n_agents < 1) fail("n_agents must be >= 1");
  if (!(r0 > 0.0)) fail("r0 must be > 0");
  if (!(outer_radius > r0)) fail("outer_radius must exceed r0");
  if (!(radius_margin >= 0.0)) fail("radius_margin must be >= 0");
  if (!(dt > 0.0)) fail("dt must be > 0");
  if (!(horizon > 0.0)) fail("horizon must be > 0");
  if (l1 * l1 < 4.0 * l0) fail("l1^2 >= 4 l0 required (real barrier roots)");
  if (!(lambda1() > 0.0)) fail("barrier roots must be positive");
  if (!(lqr_q > 0.0)) fail("lqr_q must be > 0");
  if (!(convergence_pos_tol > 0.0)) fail("convergence_pos_tol must be > 0");
  if (!(convergence_vel_tol > 0.0)) fail("convergence_vel_tol must be > 0");
  if (!(pcca_filter_tau > 0.0)) fail("pcca_filter_tau must be > 0");
  if (!starts.empty() && static_cast<int>(starts.size()) != n_agents) fail("starts must have n_agents entries");
  if (!goals.empty() && static_cast<int>(goals.size()) != n_agents) fail("goals must have n_agents entries");
  for (const Vec2& p : starts)
    if (!p.allFinite()) fail("starts must be finite");
  for (const Vec2& p : goals)
    if (!p.allFinite()) fail("goals must be finite");
}

WorldState step(const WorldState& state, const std::vector<Vec2>& controls, double dt) {
  if (static_cast<int>(controls.size()) != state.count())
    throw std::invalid_argument("step: controls length must match agent count");
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");

  WorldState next = state;
  for (int i = 0; i < state.count(); ++i) {
    const Vec2& u = controls[i];
    next.agents[i].pos += state.agents[i].vel * dt + 0.5 * dt * dt * u;
    next.agents[i].vel += u * dt;
  }
  next.time = state.time + dt;
  next.step_index = state.step_index + 1;
  return next;
}

RelativeState relative_state(const WorldState& state, int i, int j) {
  if (i == j) throw std::invalid_argument("relative_state: i and j must differ");
  if (i < 0 || j < 0 || i >= state.count() || j >= state.count())
    throw std::invalid_argument("relative_state: index out of range");
  return {state.agents[i].pos - state.agents[j].pos, state.agents[i].vel - state.agents[j].vel};
}

WorldState make_world(const std::vector<Vec2>& starts) {
  WorldState w;
  w.agents.resize(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) w.agents[i].pos = starts[i];
  return w;
}

} // namespace cbfsim
